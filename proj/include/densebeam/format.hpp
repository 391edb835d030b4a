#pragma once

#include <string>

namespace densebeam {

/// Locale-independent %.*g rendering ("nan", "inf", "-inf" for specials).
std::string format_number(double value, int significant_digits);

/// 9 significant digits, the CSV convention.
inline std::string csv_number(double value) { return format_number(value, 9); }

}  // namespace densebeam

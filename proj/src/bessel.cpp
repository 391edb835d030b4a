#include "densebeam/bessel.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>

#include "densebeam/errors.hpp"

namespace densebeam {

std::vector<double> bessel_j_sequence(double x, int q_max) {
  if (q_max < 0) throw ConfigError("bessel_j_sequence: q_max must be >= 0");
  if (!std::isfinite(x)) throw ConfigError("bessel_j_sequence: argument must be finite");
  std::vector<double> out(static_cast<std::size_t>(q_max) + 1, 0.0);
  const double ax = std::abs(x);
  if (ax == 0.0) {
    out[0] = 1.0;
    return out;
  }

  if (ax < 1e-100) {
    // Leading series term; the next correction is O(x^2) relative.
    double term = 1.0;
    for (int q = 0; q <= q_max; ++q) {
      out[q] = (x < 0.0 && (q % 2 == 1)) ? -term : term;
      term *= ax / (2.0 * (q + 1));
    }
    return out;
  }

  const double top = std::max(static_cast<double>(q_max), ax);
  int start = static_cast<int>(top + 30.0 + std::sqrt(40.0 * top));
  start += start % 2;  // even, so the J_{2k} sum ends on J_0's parity

  constexpr double kBig = 1e100;  // one step grows by at most 2 start / ax
  std::vector<double> seq(static_cast<std::size_t>(start) + 2, 0.0);
  seq[start] = 1.0;
  for (int k = start; k > 0; --k) {
    seq[k - 1] = (2.0 * k / ax) * seq[k] - seq[k + 1];
    if (std::abs(seq[k - 1]) > kBig) {
      for (int j = k - 1; j <= start + 1; ++j) seq[j] /= kBig;
    }
  }
  double peak = 0.0;
  for (double v : seq) peak = std::max(peak, std::abs(v));
  for (double& v : seq) v /= peak;

  double sum_sq = seq[0] * seq[0];
  double sum_even = seq[0];
  for (int k = 1; k <= start; ++k) {
    sum_sq += 2.0 * seq[k] * seq[k];
    if (k % 2 == 0) sum_even += 2.0 * seq[k];
  }
  const double scale = std::copysign(1.0 / std::sqrt(sum_sq), sum_even);

  for (int q = 0; q <= q_max; ++q) {
    const double v = q <= start ? seq[q] * scale : 0.0;
    out[q] = (x < 0.0 && (q % 2 == 1)) ? -v : v;
  }
  return out;
}

double bessel_j(int q, double x) {
  const int aq = std::abs(q);
  const double v = bessel_j_sequence(x, aq)[aq];
  return (q < 0 && (aq % 2 == 1)) ? -v : v;
}

}  // namespace densebeam

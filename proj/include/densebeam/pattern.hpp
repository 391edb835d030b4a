#pragma once

#include <optional>
#include <vector>

namespace densebeam {

/// Populations of the diffraction orders q = -q_max .. q_max.
struct DiffractionPattern {
  int q_max = 0;
  std::vector<double> probabilities;  // index q + q_max
  std::vector<double> angles;         // radians, same indexing; empty if not computed
  std::optional<double> tau;          // set for the analytic pattern

  DiffractionPattern() = default;
  explicit DiffractionPattern(int qmax)
      : q_max(qmax), probabilities(static_cast<std::size_t>(2 * qmax + 1), 0.0) {}

  double probability(int q) const { return probabilities.at(static_cast<std::size_t>(q + q_max)); }
  double& probability(int q) { return probabilities.at(static_cast<std::size_t>(q + q_max)); }
  double angle(int q) const { return angles.at(static_cast<std::size_t>(q + q_max)); }

  double total() const {
    double s = 0.0;
    for (double p : probabilities) s += p;
    return s;
  }
};

/// max over the common orders of |a_q - b_q|.
double max_order_discrepancy(const DiffractionPattern& a, const DiffractionPattern& b);

}  // namespace densebeam

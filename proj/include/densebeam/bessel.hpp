#pragma once

#include <vector>

namespace densebeam {

/// J_0(x) ... J_{q_max}(x) by Miller's backward recurrence.
///
/// The recurrence J_{k-1} = (2k/x) J_k - J_{k+1} is started well above
/// max(q_max, |x|) and the unnormalized sequence is scaled so that
/// J_0^2 + 2 sum_k J_k^2 = 1; the sign of the scale comes from
/// J_0 + 2 sum_k J_{2k} = 1. Negative x uses J_k(-x) = (-1)^k J_k(x).
std::vector<double> bessel_j_sequence(double x, int q_max);

/// J_q(x) for any integer q, via J_{-q} = (-1)^q J_q.
double bessel_j(int q, double x);

}  // namespace densebeam

#ifndef PHYLAB_STATS_HPP
#define PHYLAB_STATS_HPP

#include <cmath>

namespace phylab {

// Standard normal CDF.
inline double normal_cdf(double x) { return 0.5 * std::erfc(-x / std::sqrt(2.0)); }

// Gaussian tail probability Q(x) = P(N(0,1) > x).
inline double q_func(double x) { return 0.5 * std::erfc(x / std::sqrt(2.0)); }

}  // namespace phylab

#endif  // PHYLAB_STATS_HPP

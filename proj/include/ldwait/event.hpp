#pragma once

#include <cmath>
#include <cstdint>
#include <limits>

#include "ldwait/error.hpp"

namespace ldwait {

/// floor(q * total) for the strict event z > q * total, shared by the exact
/// series and the simulator so both agree on the event boundary.
///
/// q normally arrives as a decimal literal (0.7, 2.7, ...) that binary64
/// cannot hold exactly; a product landing within a few ulps of an integer is
/// taken to be that integer, i.e. the decimal value of q is honoured.
inline double threshold_floor(double total, double q) {
  const double product = total * q;
  const double nearest = std::nearbyint(product);
  if (std::abs(product - nearest) <= 4.0 * std::numeric_limits<double>::epsilon() *
                                         std::abs(product)) {
    return nearest;
  }
  return std::floor(product);
}

/// True when a wait of `wait` steps after a total of `total` realises
/// wait / total > q.
inline bool exceeds_ratio(std::uint64_t wait, std::uint64_t total, double q) {
  const double bound = threshold_floor(static_cast<double>(total), q);
  if (bound < 0.0) return true;
  if (bound >= 18446744073709551615.0) return false;
  return wait > static_cast<std::uint64_t>(bound);
}

}  // namespace ldwait

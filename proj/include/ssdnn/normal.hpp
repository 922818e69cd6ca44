#pragma once

namespace ssdnn {

/// Standard normal quantile (Wichura's AS241, about 1e-16 relative accuracy).
/// Requires 0 < p < 1.
double normal_quantile(double p);

/// Standard normal CDF.
double normal_cdf(double z);

}  // namespace ssdnn

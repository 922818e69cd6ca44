#include "ssdnn/sizing.hpp"

namespace ssdnn {

Index auto_width(Index input_dim, Index depth, std::size_t budget) {
  if (input_dim < 1 || depth < 1) throw ConfigError("auto width: input_dim and depth must be >= 1");
  const auto fits = [&](Index w) {
    NetworkSpec spec{input_dim, std::vector<Index>(static_cast<std::size_t>(depth), w), 1};
    return static_cast<std::size_t>(param_count(spec)) <= budget;
  };
  // param_count is increasing in w; exponential then binary search.
  Index lo = 1;
  if (!fits(lo)) return 1;
  Index hi = 2;
  while (fits(hi)) {
    lo = hi;
    hi *= 2;
  }
  while (hi - lo > 1) {
    const Index mid = lo + (hi - lo) / 2;
    (fits(mid) ? lo : hi) = mid;
  }
  return lo;
}

NetworkSpec auto_spec(Index input_dim, Index depth, std::size_t budget) {
  const Index w = auto_width(input_dim, depth, budget);
  return NetworkSpec{input_dim, std::vector<Index>(static_cast<std::size_t>(depth), w), 1};
}

std::string to_string(Baseline baseline) {
  switch (baseline) {
    case Baseline::SDnn: return "S-DNN";
    case Baseline::Deep1: return "DNN-deep-1";
    case Baseline::Deep2: return "DNN-deep-2";
    case Baseline::Wide1: return "DNN-wide-1";
    case Baseline::Wide2: return "DNN-wide-2";
  }
  return "unknown";
}

NetworkSpec baseline_spec(Baseline baseline, const NetworkSpec& member_spec, std::size_t n) {
  const Index d = member_spec.input_dim;
  const Index depth = member_spec.depth();
  switch (baseline) {
    case Baseline::SDnn: return member_spec;
    case Baseline::Deep1: return auto_spec(d, depth, n);
    case Baseline::Deep2: return auto_spec(d, depth, n / 2);
    case Baseline::Wide1: return auto_spec(d, 1, n);
    case Baseline::Wide2: return auto_spec(d, 1, n / 2);
  }
  return member_spec;
}

}  // namespace ssdnn

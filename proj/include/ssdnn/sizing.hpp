#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "ssdnn/network.hpp"

namespace ssdnn {

/// Largest constant width w >= 1 such that a depth-`depth` network on
/// `input_dim` inputs has param_count <= budget. Returns 1 when even width 1
/// exceeds the budget.
Index auto_width(Index input_dim, Index depth, std::size_t budget);

/// Constant-width spec sized by auto_width.
NetworkSpec auto_spec(Index input_dim, Index depth, std::size_t budget);

/// The whole-sample comparison networks trained next to SS-DNN.
enum class Baseline { SDnn, Deep1, Deep2, Wide1, Wide2 };

inline constexpr Baseline kAllBaselines[] = {Baseline::SDnn, Baseline::Deep1, Baseline::Deep2,
                                             Baseline::Wide1, Baseline::Wide2};

std::string to_string(Baseline baseline);

/// S-DNN reuses the member architecture; deep-1/-2 keep its depth with size
/// close to n and n/2; wide-1/-2 use one hidden layer sized to n and n/2.
NetworkSpec baseline_spec(Baseline baseline, const NetworkSpec& member_spec, std::size_t n);

}  // namespace ssdnn

#pragma once

#include <cstdint>
#include <iterator>
#include <random>
#include <utility>

namespace ssdnn {

std::uint64_t splitmix64(std::uint64_t x) noexcept;

/// Deterministic child seed for (master, stream, index). Independent of any
/// scheduling order, so members trained in parallel get the same seeds as
/// members trained sequentially.
std::uint64_t derive_seed(std::uint64_t master, std::uint64_t stream,
                          std::uint64_t index = 0) noexcept;

/// Seeded generator with version-stable derived distributions.
///
/// The raw engine is std::mt19937_64, whose output sequence is fixed by the
/// standard. Uniforms take the top 53 bits; normals use the Box-Muller
/// transform (both values of each pair are consumed); bounded integers use
/// rejection sampling. None of these go through the implementation-defined
/// std:: distributions.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  std::uint64_t next() { return engine_(); }

  /// Uniform on [0, 1).
  double uniform();

  /// Standard normal.
  double normal();

  /// Uniform integer on [0, bound). bound must be > 0.
  std::uint64_t below(std::uint64_t bound);

  /// Fisher-Yates.
  template <typename RandomIt>
  void shuffle(RandomIt first, RandomIt last) {
    auto n = static_cast<std::uint64_t>(std::distance(first, last));
    for (std::uint64_t i = n; i > 1; --i) {
      std::uint64_t j = below(i);
      using std::swap;
      swap(first[static_cast<std::ptrdiff_t>(i - 1)],
           first[static_cast<std::ptrdiff_t>(j)]);
    }
  }

 private:
  std::mt19937_64 engine_;
  double spare_normal_ = 0.0;
  bool has_spare_ = false;
};

}  // namespace ssdnn

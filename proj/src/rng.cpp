#include "adview/rng.hpp"

#include <cmath>
#include <numbers>

namespace adview {

double Rng::normal() {
  // 1 - uniform() lies in (0, 1], so the log is finite.
  const double u1 = 1.0 - uniform();
  const double u2 = uniform();
  return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
}

std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t stream) {
  SplitMix64 outer(seed);
  SplitMix64 inner(outer.next() ^ (stream * 0xd1b54a32d192ed03ULL));
  return inner.next();
}

}  // namespace adview

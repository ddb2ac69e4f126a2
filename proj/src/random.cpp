#include "mdm/random.hpp"

namespace mdm {

std::uint64_t mix_seed(std::uint64_t master_seed, std::uint64_t index) {
  std::uint64_t z = master_seed + (index + 1) * 0x9E3779B97F4A7C15ULL;
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

RandomStream RandomStream::derive(std::uint64_t master_seed,
                                  std::uint64_t index) {
  return RandomStream(mix_seed(master_seed, index));
}

}  // namespace mdm

#pragma once

#include <cstdint>
#include <random>

namespace fridge {

/// splitmix64 finalizer; used to decorrelate seeds and stream ids.
inline std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

/// Seed for substream `stream` of a master seed. Replicates, folds and
/// bootstrap draws each get their own substream so that parallel and
/// sequential execution see identical random inputs.
inline std::uint64_t substream_seed(std::uint64_t seed, std::uint64_t stream) {
  return splitmix64(splitmix64(seed) ^ splitmix64(stream + 0x632be59bd9b4e019ULL));
}

/// The library-wide generator: mt19937_64 on a decorrelated substream.
inline std::mt19937_64 make_rng(std::uint64_t seed, std::uint64_t stream = 0) {
  return std::mt19937_64(substream_seed(seed, stream));
}

}  // namespace fridge

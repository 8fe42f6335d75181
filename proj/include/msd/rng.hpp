#pragma once

#include <cstdint>
#include <random>

namespace msd {

// Deterministic randomness: mt19937_64 engines seeded through splitmix64, with
// uniforms and normals generated by explicit bit manipulation so that streams
// are identical across standard-library implementations.
//
// Stream splitting rule: stream k of master seed s is
//   mt19937_64(splitmix64(s + (k + 1) * 0x9E3779B97F4A7C15)).

uint64_t splitmix64(uint64_t x);

// splitmix64(master + (stream + 1) * golden); also used directly when a
// sub-experiment needs its own master seed.
uint64_t derive_seed(uint64_t master_seed, uint64_t stream_index);

std::mt19937_64 make_stream(uint64_t master_seed, uint64_t stream_index);

// Uniform in [0, 1) from the top 53 bits.
double uniform01(std::mt19937_64& rng);

// Uniform in [lo, hi].
double uniform_in(std::mt19937_64& rng, double lo, double hi);

// Standard normal via Box-Muller.
double standard_normal(std::mt19937_64& rng);

}  // namespace msd

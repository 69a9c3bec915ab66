#pragma once

// Seed expansion. A 64-bit seed plus a stream tag goes through one splitmix64
// step and seeds a std::mt19937_64, whose output sequence is fixed by the C++
// standard. Residues are the low m bits of one draw; a pair redraws n1 until it
// differs from n0. Transcripts record kGeneratorId so they are self-describing.

#include "rbc/codec.hpp"

#include <cstdint>
#include <random>

namespace rbc {

inline constexpr const char* kGeneratorId =
    "mt19937_64(splitmix64(seed+0x9e3779b97f4a7c15*(stream+1)));residue=low-m-bits;pair=redraw-n1";

namespace stream {
inline constexpr std::uint64_t tape = 0;
inline constexpr std::uint64_t bob_site_base = 10;  // + site id
inline constexpr std::uint64_t strategy_base = 100;  // + site id
inline constexpr std::uint64_t trial_alice = 1000;
inline constexpr std::uint64_t trial_bob = 1001;
inline constexpr std::uint64_t trial_bit = 1002;
}  // namespace stream

constexpr std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

constexpr std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t stream_tag) {
  return splitmix64(seed + 0x9e3779b97f4a7c15ULL * (stream_tag + 1));
}

using Rng = std::mt19937_64;

inline Rng make_rng(std::uint64_t seed, std::uint64_t stream_tag) {
  return Rng(derive_seed(seed, stream_tag));
}

inline Residue sample_residue(Rng& rng, const Modulus& mod) { return mod.reduce(rng()); }

inline Residue sample_nonzero_residue(Rng& rng, const Modulus& mod) {
  Residue r;
  do r = sample_residue(rng, mod);
  while (r == 0);
  return r;
}

// Uniform over ordered pairs of distinct residues.
inline Pair sample_pair(Rng& rng, const Modulus& mod) {
  Pair p;
  p.n0 = sample_residue(rng, mod);
  do p.n1 = sample_residue(rng, mod);
  while (p.n1 == p.n0);
  return p;
}

}  // namespace rbc

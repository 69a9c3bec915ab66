#pragma once

// Commitment arithmetic mod N = 2^m.
//
// A bit b is committed against a labelled pair (n0, n1) with key k as
// (n_b + k) mod N. Round k >= 2 commits, bit by bit and LSB first, the tape
// values used as keys in round k - 1. Tape indices are 0-based: tape[0] is the
// first shared random number.

#include "rbc/spacetime.hpp"

#include <cstdint>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace rbc {

using Residue = std::uint64_t;

enum class Bit : std::uint8_t { zero = 0, one = 1 };

constexpr Bit flip(Bit b) { return b == Bit::zero ? Bit::one : Bit::zero; }
constexpr int to_int(Bit b) { return static_cast<int>(b); }

inline Bit bit_from_int(long long v) {
  if (v == 0) return Bit::zero;
  if (v == 1) return Bit::one;
  throw std::invalid_argument("bit must be 0 or 1, got " + std::to_string(v));
}

struct Pair {
  Residue n0 = 0;
  Residue n1 = 0;

  Residue select(Bit b) const { return b == Bit::zero ? n0 : n1; }

  friend bool operator==(const Pair&, const Pair&) = default;
};

struct PairChallenge {
  RoundIndex round = 0;
  std::vector<Pair> pairs;

  friend bool operator==(const PairChallenge&, const PairChallenge&) = default;
};

struct CommitResponse {
  RoundIndex round = 0;
  std::vector<Residue> values;

  friend bool operator==(const CommitResponse&, const CommitResponse&) = default;
};

struct SegmentBounds {
  std::uint64_t start = 0;
  std::uint64_t count = 0;

  friend bool operator==(const SegmentBounds&, const SegmentBounds&) = default;
};

namespace detail {

inline std::uint64_t checked_mul(std::uint64_t a, std::uint64_t b) {
  std::uint64_t out;
  if (__builtin_mul_overflow(a, b, &out)) throw std::overflow_error("tape index overflow");
  return out;
}

inline std::uint64_t checked_add(std::uint64_t a, std::uint64_t b) {
  std::uint64_t out;
  if (__builtin_add_overflow(a, b, &out)) throw std::overflow_error("tape index overflow");
  return out;
}

inline void require_valid_pair(const Modulus& mod, const Pair& pair) {
  if (!mod.contains(pair.n0) || !mod.contains(pair.n1))
    throw std::out_of_range("pair member outside [0, N)");
  if (pair.n0 == pair.n1) throw std::invalid_argument("pair members must be distinct");
}

}  // namespace detail

// Tape slice keyed by round k: start = (m^(k-1) - 1)/(m - 1), count = m^(k-1).
inline SegmentBounds segment_bounds(RoundIndex k, unsigned m) {
  require_round(k);
  if (m < 2) throw std::invalid_argument("segment_bounds needs m >= 2");
  SegmentBounds b{0, 1};
  for (RoundIndex i = 1; i < k; ++i) {
    b.start = detail::checked_add(b.start, b.count);
    b.count = detail::checked_mul(b.count, m);
  }
  return b;
}

// Total tape needed for rounds 1..R.
inline std::uint64_t tape_length(unsigned m, RoundIndex rounds) {
  SegmentBounds last = segment_bounds(rounds, m);
  return detail::checked_add(last.start, last.count);
}

class RandomTape {
 public:
  RandomTape() = default;
  RandomTape(const Modulus& mod, std::vector<Residue> values) : values_(std::move(values)) {
    for (Residue v : values_)
      if (!mod.contains(v)) throw std::out_of_range("tape value outside [0, N)");
  }

  std::size_t size() const { return values_.size(); }
  Residue operator[](std::size_t i) const { return values_.at(i); }
  std::span<const Residue> values() const { return values_; }

  bool covers(RoundIndex k, unsigned m) const {
    SegmentBounds b = segment_bounds(k, m);
    return b.start + b.count <= values_.size();
  }

  std::span<const Residue> segment(RoundIndex k, unsigned m) const {
    SegmentBounds b = segment_bounds(k, m);
    if (b.start + b.count > values_.size())
      throw std::out_of_range("tape too short for round " + std::to_string(k));
    return std::span<const Residue>(values_).subspan(b.start, b.count);
  }

  friend bool operator==(const RandomTape&, const RandomTape&) = default;

 private:
  std::vector<Residue> values_;
};

inline Residue commit_one(const Modulus& mod, const Pair& pair, Residue key, Bit bit) {
  detail::require_valid_pair(mod, pair);
  if (!mod.contains(key)) throw std::out_of_range("key outside [0, N)");
  return mod.add(pair.select(bit), key);
}

// Returns the bit whose pair member equals response - key, or nullopt when
// neither does.
inline std::optional<Bit> decode_one(const Modulus& mod, Residue response, const Pair& pair,
                                     Residue key) {
  detail::require_valid_pair(mod, pair);
  if (!mod.contains(response) || !mod.contains(key))
    throw std::out_of_range("response or key outside [0, N)");
  const Residue member = mod.sub(response, key);
  if (member == pair.n0) return Bit::zero;
  if (member == pair.n1) return Bit::one;
  return std::nullopt;
}

// LSB first: x = sum a_j 2^j.
inline std::vector<Bit> binary_form(Residue x, unsigned m) {
  if (m == 0 || m > 64) throw std::invalid_argument("bit count must be in [1, 64]");
  if (m < 64 && (x >> m) != 0) throw std::out_of_range("value does not fit in m bits");
  std::vector<Bit> bits(m);
  for (unsigned j = 0; j < m; ++j) bits[j] = ((x >> j) & 1u) ? Bit::one : Bit::zero;
  return bits;
}

inline Residue from_binary(std::span<const Bit> bits) {
  if (bits.size() > 64) throw std::invalid_argument("more than 64 bits");
  Residue x = 0;
  for (std::size_t j = 0; j < bits.size(); ++j)
    if (bits[j] == Bit::one) x |= Residue{1} << j;
  return x;
}

// Bits committed in round k >= 2: binary forms of the round-(k-1) keys, in
// tape order, each LSB first.
inline std::vector<Bit> round_payload_bits(RoundIndex k, const RandomTape& tape, unsigned m) {
  require_round(k);
  if (k == 1) throw std::invalid_argument("round 1 commits the chosen bit, not tape bits");
  std::vector<Bit> bits;
  auto keys = tape.segment(k - 1, m);
  bits.reserve(keys.size() * m);
  for (Residue key : keys) {
    auto form = binary_form(key, m);
    bits.insert(bits.end(), form.begin(), form.end());
  }
  return bits;
}

inline CommitResponse commit_round(const Modulus& mod, std::span<const Bit> bits,
                                   const PairChallenge& challenge, std::span<const Residue> keys) {
  if (bits.size() != challenge.pairs.size() || keys.size() != challenge.pairs.size())
    throw std::invalid_argument("commit_round: bits, pairs and keys differ in length");
  CommitResponse out{challenge.round, {}};
  out.values.reserve(bits.size());
  for (std::size_t j = 0; j < bits.size(); ++j)
    out.values.push_back(commit_one(mod, challenge.pairs[j], keys[j], bits[j]));
  return out;
}

}  // namespace rbc

#pragma once

// Bob's acceptance logic. Works from the transcript alone and runs its checks
// in a fixed order so that the reject reason is deterministic:
//   1. params validity (guaranteed by ProtocolParams construction),
//   2. completeness and shape: rounds, sites, counts, ranges, pair distinctness,
//   3. timing: round windows, test-signal echoes, unveil sites and deadlines,
//      spacelike dual unveilings, aggregation time,
//   4. backward decode of the commitment chain.

#include "rbc/codec.hpp"
#include "rbc/netsim.hpp"
#include "rbc/spacetime.hpp"

#include <optional>
#include <span>
#include <string>
#include <vector>

namespace rbc {

enum class RejectReason {
  timing_violation,
  site_mismatch,
  count_mismatch,
  duplicate_pair_members,
  decode_mismatch,
  range_error,
  incomplete_transcript,
};

inline const char* to_string(RejectReason r) {
  switch (r) {
    case RejectReason::timing_violation: return "timing_violation";
    case RejectReason::site_mismatch: return "site_mismatch";
    case RejectReason::count_mismatch: return "count_mismatch";
    case RejectReason::duplicate_pair_members: return "duplicate_pair_members";
    case RejectReason::decode_mismatch: return "decode_mismatch";
    case RejectReason::range_error: return "range_error";
    case RejectReason::incomplete_transcript: return "incomplete_transcript";
  }
  return "unknown";
}

struct Position {
  RoundIndex round = 0;
  std::size_t index = 0;

  friend bool operator==(const Position&, const Position&) = default;
};

class Verdict {
 public:
  static Verdict accept(Bit bit, std::optional<Time> issued_at) {
    Verdict v;
    v.bit_ = bit;
    v.issued_at_ = std::move(issued_at);
    return v;
  }

  static Verdict reject(RejectReason reason, std::string detail,
                        std::optional<Position> position = std::nullopt) {
    Verdict v;
    v.reason_ = reason;
    v.detail_ = std::move(detail);
    v.position_ = position;
    return v;
  }

  bool accepted() const { return bit_.has_value(); }
  std::optional<Bit> bit() const { return bit_; }
  std::optional<RejectReason> reason() const { return reason_; }
  std::optional<Position> position() const { return position_; }
  const std::string& detail() const { return detail_; }
  const std::optional<Time>& issued_at() const { return issued_at_; }

  Verdict& at(std::optional<Time> t) {
    issued_at_ = std::move(t);
    return *this;
  }

 private:
  Verdict() = default;

  std::optional<Bit> bit_;
  std::optional<RejectReason> reason_;
  std::optional<Position> position_;
  std::string detail_;
  std::optional<Time> issued_at_;
};

struct DecodeResult {
  std::optional<Bit> bit;
  std::optional<Position> failure;
  // keys[k - 1] holds the round-k keys recovered by the decode; filled for
  // every round on success.
  std::vector<std::vector<Residue>> keys;
};

// Walks from the revealed round-R keys down to round 1. Rounds must already
// be shape-checked (counts m^(k-1), distinct in-range pairs).
inline DecodeResult backward_decode(std::span<const RoundRecord> rounds,
                                    std::span<const Residue> revealed, const Modulus& mod) {
  const unsigned m = mod.bits();
  const RoundIndex last = rounds.size();
  DecodeResult out;
  if (last == 0) throw std::invalid_argument("backward_decode needs at least one round");
  if (revealed.size() != segment_bounds(last, m).count)
    throw std::invalid_argument("revealed list has the wrong length for the last round");

  out.keys.assign(last, {});
  out.keys[last - 1].assign(revealed.begin(), revealed.end());
  for (RoundIndex k = last; k >= 1; --k) {
    const RoundRecord& r = rounds[k - 1];
    const auto& keys = out.keys[k - 1];
    std::vector<Bit> bits;
    bits.reserve(keys.size());
    for (std::size_t j = 0; j < keys.size(); ++j) {
      auto b = decode_one(mod, r.response.values[j], r.challenge.pairs[j], keys[j]);
      if (!b) {
        out.failure = Position{k, j};
        out.keys.clear();
        return out;
      }
      bits.push_back(*b);
    }
    if (k == 1) {
      out.bit = bits.front();
      break;
    }
    auto& previous = out.keys[k - 2];
    previous.reserve(bits.size() / m);
    for (std::size_t j = 0; j < bits.size(); j += m)
      previous.push_back(from_binary(std::span<const Bit>(bits).subspan(j, m)));
  }
  return out;
}

namespace detail {

inline std::optional<Verdict> check_rounds_shape(const Transcript& t) {
  const Modulus& mod = t.params.modulus();
  for (std::size_t i = 0; i < t.rounds.size(); ++i) {
    const RoundRecord& r = t.rounds[i];
    const RoundIndex k = i + 1;
    if (r.k != k)
      return Verdict::reject(RejectReason::count_mismatch,
                             "round " + std::to_string(i + 1) + " is labelled " + std::to_string(r.k),
                             Position{k, 0});
    if (r.site != round_site(k))
      return Verdict::reject(RejectReason::site_mismatch,
                             "round " + std::to_string(k) + " ran at the wrong site", Position{k, 0});
    const std::uint64_t count = segment_bounds(k, mod.bits()).count;
    if (r.challenge.pairs.size() != count || r.response.values.size() != count)
      return Verdict::reject(RejectReason::count_mismatch,
                             "round " + std::to_string(k) + " must carry " + std::to_string(count) +
                                 " commitments",
                             Position{k, 0});
    for (std::size_t j = 0; j < count; ++j) {
      const Pair& p = r.challenge.pairs[j];
      if (!mod.contains(p.n0) || !mod.contains(p.n1) || !mod.contains(r.response.values[j]))
        return Verdict::reject(RejectReason::range_error, "residue outside [0, N)", Position{k, j});
      if (p.n0 == p.n1)
        return Verdict::reject(RejectReason::duplicate_pair_members, "pair members coincide",
                               Position{k, j});
    }
  }
  return std::nullopt;
}

inline std::optional<Verdict> check_unveil_shape(const Transcript& t, const UnveilMessage& u,
                                                 RoundIndex expected_round) {
  const Modulus& mod = t.params.modulus();
  if (u.round != expected_round)
    return Verdict::reject(RejectReason::count_mismatch,
                           "unveiling names round " + std::to_string(u.round) + ", expected " +
                               std::to_string(expected_round));
  const std::uint64_t count = segment_bounds(expected_round, mod.bits()).count;
  if (u.revealed.size() != count)
    return Verdict::reject(RejectReason::count_mismatch,
                           "unveiling must reveal " + std::to_string(count) + " values",
                           Position{expected_round, 0});
  for (std::size_t j = 0; j < count; ++j)
    if (!mod.contains(u.revealed[j]))
      return Verdict::reject(RejectReason::range_error, "revealed value outside [0, N)",
                             Position{expected_round, j});
  return std::nullopt;
}

inline std::optional<Verdict> check_round_timing(const Transcript& t) {
  for (const RoundRecord& r : t.rounds) {
    const RoundWindow w = round_window(t.params, r.k);
    const auto& c = r.challenge;
    auto late = [&](const std::string& what) {
      return Verdict::reject(RejectReason::timing_violation,
                             "round " + std::to_string(r.k) + ": " + what, Position{r.k, 0});
    };
    if (c.start < w.challenge_start) return late("challenge starts before its window");
    if (c.end < c.start) return late("challenge ends before it starts");
    if (c.end > w.challenge_end) return late("challenge completes after its window");
    if (r.response.end < c.end) return late("response completes before the challenge");
    if (r.response.end > w.response_end) return late("response completes after its window");
  }
  for (const TestSignal& s : t.test_signals) {
    if (s.sent < 0 || s.echoed < s.sent || s.echoed - s.sent > 2 * t.params.delta())
      return Verdict::reject(RejectReason::timing_violation,
                             "test signal at site " + std::to_string(to_int(s.site)) +
                                 " not echoed within 2*delta");
  }
  return std::nullopt;
}

inline std::optional<Verdict> check_unveil_timing(const Transcript& t, const UnveilMessage& u) {
  if (u.site != other(round_site(u.round)))
    return Verdict::reject(RejectReason::site_mismatch,
                           "unveiling for round " + std::to_string(u.round) + " must come from site " +
                               std::to_string(to_int(other(round_site(u.round)))));
  if (u.completes_at < 0 || u.completes_at >= unveil_deadline(t.params, u.round))
    return Verdict::reject(RejectReason::timing_violation,
                           "unveiling for round " + std::to_string(u.round) +
                               " does not complete strictly before " +
                               format_time(unveil_deadline(t.params, u.round)));
  return std::nullopt;
}

inline std::optional<Verdict> check_aggregation(const Transcript& t) {
  const SpacetimeEvent earliest = aggregate_event(t);
  if (t.aggregation->site != t.settings.hq_site || t.aggregation->time < earliest.time)
    return Verdict::reject(RejectReason::incomplete_transcript,
                           "verdict requested before all data reached HQ (earliest " +
                               format_time(earliest.time) + ")");
  return std::nullopt;
}

inline std::optional<Verdict> check_complete(const Transcript& t, std::size_t max_unveils) {
  if (t.abort) return Verdict::reject(RejectReason::incomplete_transcript, "aborted: " + *t.abort);
  if (t.rounds.empty()) return Verdict::reject(RejectReason::incomplete_transcript, "no rounds");
  if (t.unveils.empty()) return Verdict::reject(RejectReason::incomplete_transcript, "no unveiling");
  if (t.unveils.size() > max_unveils)
    return Verdict::reject(RejectReason::count_mismatch, "too many unveilings");
  if (!t.aggregation)
    return Verdict::reject(RejectReason::incomplete_transcript, "no aggregation event");
  return std::nullopt;
}

inline Verdict decode_verdict(const DecodeResult& d) {
  return Verdict::reject(RejectReason::decode_mismatch,
                         "commitment " + std::to_string(d.failure->index) + " of round " +
                             std::to_string(d.failure->round) + " does not decode",
                         d.failure);
}

}  // namespace detail

// Two unveilings at spacelike separated points: the round-R keys from site
// 3 - round_site(R) and the round-(R-1) keys from round_site(R). The second
// list must equal the round-(R-1) keys recovered from the first, and both
// chains must decode to the same bit.
inline Verdict dual_unveil_check(const Transcript& t) {
  if (auto v = detail::check_complete(t, 2)) return *v;
  if (t.unveils.size() != 2)
    return Verdict::reject(RejectReason::count_mismatch, "dual check needs two unveilings");
  const RoundIndex last = t.rounds.size();
  if (last < 2)
    return Verdict::reject(RejectReason::count_mismatch, "dual unveiling needs two rounds");
  const UnveilMessage& primary = t.unveils[0];
  const UnveilMessage& secondary = t.unveils[1];

  if (auto v = detail::check_rounds_shape(t)) return *v;
  if (auto v = detail::check_unveil_shape(t, primary, last)) return *v;
  if (auto v = detail::check_unveil_shape(t, secondary, last - 1)) return *v;

  if (auto v = detail::check_round_timing(t)) return *v;
  if (auto v = detail::check_unveil_timing(t, primary)) return *v;
  if (auto v = detail::check_unveil_timing(t, secondary)) return *v;
  if (!spacelike({primary.completes_at, primary.site}, {secondary.completes_at, secondary.site},
                 t.params))
    return Verdict::reject(RejectReason::timing_violation, "unveilings are not spacelike separated");
  if (auto v = detail::check_aggregation(t)) return *v;

  const Modulus& mod = t.params.modulus();
  DecodeResult full = backward_decode(t.rounds, primary.revealed, mod);
  if (!full.bit) return detail::decode_verdict(full);
  const auto& recovered = full.keys[last - 2];
  for (std::size_t j = 0; j < recovered.size(); ++j)
    if (recovered[j] != secondary.revealed[j])
      return Verdict::reject(RejectReason::decode_mismatch,
                             "second unveiling disagrees with the keys recovered from the first",
                             Position{last - 1, j});
  DecodeResult shorter = backward_decode(std::span<const RoundRecord>(t.rounds).first(last - 1),
                                         secondary.revealed, mod);
  if (!shorter.bit) return detail::decode_verdict(shorter);
  if (*shorter.bit != *full.bit)
    return Verdict::reject(RejectReason::decode_mismatch, "unveilings decode to different bits");
  return Verdict::accept(*full.bit, t.aggregation->time);
}

inline Verdict verify(const Transcript& t) {
  if (t.unveils.size() == 2 && !t.abort) return dual_unveil_check(t);
  if (auto v = detail::check_complete(t, 2)) return *v;

  const RoundIndex last = t.rounds.size();
  const UnveilMessage& u = t.unveils.front();
  if (auto v = detail::check_rounds_shape(t)) return *v;
  if (auto v = detail::check_unveil_shape(t, u, last)) return *v;

  if (auto v = detail::check_round_timing(t)) return *v;
  if (auto v = detail::check_unveil_timing(t, u)) return *v;
  if (auto v = detail::check_aggregation(t)) return *v;

  DecodeResult d = backward_decode(t.rounds, u.revealed, t.params.modulus());
  if (!d.bit) return detail::decode_verdict(d);
  return Verdict::accept(*d.bit, t.aggregation->time);
}

}  // namespace rbc

#pragma once

// Honest parties. Bob's agent at each site draws fresh pairs from its own
// stream; Alice's agents share a tape materialized up front from one seed.

#include "rbc/codec.hpp"
#include "rbc/rng.hpp"
#include "rbc/spacetime.hpp"

#include <cstdint>
#include <memory>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

namespace rbc {

// Largest tape the simulator will materialize.
inline constexpr std::uint64_t kMaxTapeLength = std::uint64_t{1} << 24;

inline RandomTape materialize_tape(std::uint64_t alice_seed, const Modulus& mod, unsigned m,
                                   RoundIndex rounds) {
  const std::uint64_t length = tape_length(m, rounds);
  if (length > kMaxTapeLength)
    throw std::invalid_argument("tape of " + std::to_string(length) +
                                " values exceeds the simulator limit");
  Rng rng = make_rng(alice_seed, stream::tape);
  std::vector<Residue> values(length);
  for (auto& v : values) v = sample_residue(rng, mod);
  return RandomTape(mod, std::move(values));
}

struct AliceState {
  Bit committed_bit = Bit::zero;
  std::shared_ptr<const RandomTape> tape;
  RoundIndex planned_rounds = 1;

  AliceState(Bit bit, std::shared_ptr<const RandomTape> shared_tape, RoundIndex rounds,
             unsigned m)
      : committed_bit(bit), tape(std::move(shared_tape)), planned_rounds(rounds) {
    require_round(rounds);
    if (!tape) throw std::invalid_argument("AliceState needs a tape");
    if (tape->size() < tape_length(m, rounds))
      throw std::invalid_argument("tape shorter than (m^R - 1)/(m - 1)");
  }
};

struct UnveilMessage {
  RoundIndex round = 0;
  std::vector<Residue> revealed;
  Site site = Site::one;
  Time completes_at;

  friend bool operator==(const UnveilMessage&, const UnveilMessage&) = default;
};

class BobAgent {
 public:
  BobAgent(Site site, std::uint64_t bob_seed)
      : site_(site), rng_(make_rng(bob_seed, stream::bob_site_base + to_int(site))) {}

  Site site() const { return site_; }
  const std::vector<PairChallenge>& issued() const { return issued_; }

  PairChallenge challenge(RoundIndex k, const ProtocolParams& params) {
    require_round(k);
    if (round_site(k) != site_)
      throw std::logic_error("round " + std::to_string(k) + " is not run at this site");
    if (!rounds_.insert(k).second)
      throw std::logic_error("round " + std::to_string(k) + " already challenged");
    const std::uint64_t count = segment_bounds(k, params.m()).count;
    PairChallenge c{k, {}};
    c.pairs.reserve(count);
    for (std::uint64_t j = 0; j < count; ++j) c.pairs.push_back(sample_pair(rng_, params.modulus()));
    issued_.push_back(c);
    return c;
  }

 private:
  Site site_;
  Rng rng_;
  std::set<RoundIndex> rounds_;
  std::vector<PairChallenge> issued_;
};

inline CommitResponse alice_response(RoundIndex k, const PairChallenge& challenge,
                                     const AliceState& state, const ProtocolParams& params) {
  require_round(k);
  const unsigned m = params.m();
  const std::uint64_t expected = segment_bounds(k, m).count;
  if (challenge.pairs.size() != expected)
    throw std::invalid_argument("round " + std::to_string(k) + " challenge has " +
                                std::to_string(challenge.pairs.size()) + " pairs, expected " +
                                std::to_string(expected));
  if (!state.tape->covers(k, m))
    throw std::invalid_argument("tape does not cover round " + std::to_string(k));
  std::vector<Bit> bits =
      k == 1 ? std::vector<Bit>{state.committed_bit} : round_payload_bits(k, *state.tape, m);
  CommitResponse r = commit_round(params.modulus(), bits, challenge, state.tape->segment(k, m));
  r.round = k;
  return r;
}

// Reveals the keys used in round R. Only the agent at site 3 - round_site(R)
// may unveil. The deadline is not enforced here; a late message is the
// verifier's to reject.
inline UnveilMessage alice_unveil(RoundIndex last_round, const AliceState& state,
                                  const ProtocolParams& params, Site site, Time completes_at) {
  require_round(last_round);
  if (site != other(round_site(last_round)))
    throw std::logic_error("unveil for round " + std::to_string(last_round) +
                           " must come from site " + std::to_string(to_int(other(round_site(last_round)))));
  auto keys = state.tape->segment(last_round, params.m());
  return {last_round, std::vector<Residue>(keys.begin(), keys.end()), site, std::move(completes_at)};
}

}  // namespace rbc

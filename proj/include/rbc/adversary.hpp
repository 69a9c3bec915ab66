#pragma once

// Cheating Alice.
//
// Binding game: Alice commits honestly to bit b through rounds 1..R, then the
// unveiler tries to make Bob accept 1 - b. Its revealed list may be any
// function of the pre-agreed secrets and its causal view, which holds every
// round before R but none of round R's pairs.

#include "rbc/agents.hpp"
#include "rbc/codec.hpp"
#include "rbc/netsim.hpp"
#include "rbc/rng.hpp"
#include "rbc/verifier.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace rbc {

using Probability = Rational;

// Commits honestly. At unveiling it walks the visible rounds forward from the
// key that would decode round 1 to the target bit, which fixes the bits every
// later round would have to decode to. Round-R positions whose needed bit
// matches the honest one reveal the true key; the rest shift it by a guessed
// non-zero offset. A guess succeeds iff it equals n_honest - n_needed.
class OffsetGuessStrategy : public HonestStrategy {
 public:
  std::string name() const override { return "offset-guess"; }

  UnveilMessage unveil(const ProtocolParams& params, const AliceSecrets& secrets,
                       const UnveilRequest& req, const CausalView& view) const override {
    UnveilMessage honest = HonestStrategy::unveil(params, secrets, req, view);
    if (secrets.target_bit == secrets.committed_bit) return honest;

    const Modulus& mod = params.modulus();
    const unsigned m = params.m();
    const RoundIndex last = req.round;

    std::vector<Bit> needed{secrets.target_bit};
    for (RoundIndex k = 1; k < last; ++k) {
      const PairChallenge* c = view.challenge(k);
      const CommitResponse* r = view.response(k);
      if (!c || !r) return honest;  // cannot steer a round it has not seen
      std::vector<Bit> next;
      next.reserve(needed.size() * m);
      for (std::size_t j = 0; j < needed.size(); ++j) {
        Residue key = mod.sub(r->values[j], c->pairs[j].select(needed[j]));
        auto form = binary_form(key, m);
        next.insert(next.end(), form.begin(), form.end());
      }
      needed = std::move(next);
    }

    const std::vector<Bit> committed =
        last == 1 ? std::vector<Bit>{secrets.committed_bit}
                  : round_payload_bits(last, *secrets.tape, m);
    Rng rng = make_rng(secrets.seed, stream::strategy_base + to_int(req.site));
    rng.discard(last);
    for (std::size_t j = 0; j < needed.size(); ++j)
      if (needed[j] != committed[j])
        honest.revealed[j] = mod.add(honest.revealed[j], sample_nonzero_residue(rng, mod));
    return honest;
  }
};

enum class AttackKind { offset_guess, honest_relabel };

inline std::optional<AttackKind> attack_from_name(std::string_view name) {
  if (name == "offset-guess") return AttackKind::offset_guess;
  if (name == "honest-relabel") return AttackKind::honest_relabel;
  return std::nullopt;
}

inline const char* attack_name(AttackKind k) {
  return k == AttackKind::offset_guess ? "offset-guess" : "honest-relabel";
}

// ---------------------------------------------------------------------------
// Exact oracle

class OracleBudgetExceeded : public std::runtime_error {
 public:
  OracleBudgetExceeded(double estimate, double budget)
      : std::runtime_error("oracle needs about " + std::to_string(estimate) +
                           " enumeration steps, budget is " + std::to_string(budget)),
        estimate_(estimate) {}
  double estimate() const { return estimate_; }

 private:
  double estimate_;
};

inline constexpr double kDefaultOracleBudget = 5e7;

// Enumeration steps for optimal_flip_success(m, R).
inline double oracle_cost(unsigned m, RoundIndex rounds) {
  const double n = std::ldexp(1.0, static_cast<int>(m));
  const double pairs = n * (n - 1);
  const double leaf = 4 * n * n * pairs;
  const double inner = 4 * n * pairs * m;
  return leaf + static_cast<double>(rounds - 1) * inner;
}

inline bool oracle_sized(unsigned m, RoundIndex rounds, double budget = kDefaultOracleBudget) {
  return m >= 2 && m <= 20 && rounds >= 1 && oracle_cost(m, rounds) <= budget;
}

// Exact optimal probability that the unveiler makes Bob accept the flipped
// bit, maximized over the committed bit and every tape value, averaged over
// Bob's uniformly random pairs.
//
// Bob's pairs are independent across positions, so the view splits into one
// subtree per commitment. A position is characterized by the bit its
// commitment holds and the bit the verifier will need from it; value[k][a][c]
// is the best success for a round-k position with honest bit a and needed bit
// c, maximized over that position's own tape key. For the last round the
// unveiler also picks the revealed key without seeing the pair. For earlier
// rounds the pair is in the unveiler's past: the needed key response - n_c is
// forced, and its bits become the needed bits of the m child positions,
// whose honest bits are those of the tape key.
inline Probability optimal_flip_success(unsigned m, RoundIndex rounds,
                                        double budget = kDefaultOracleBudget) {
  require_round(rounds);
  if (m < 2) throw std::invalid_argument("oracle needs m >= 2");
  const double cost = oracle_cost(m, rounds);
  if (m > 20 || cost > budget) throw OracleBudgetExceeded(cost, budget);

  const Modulus mod(m);
  const Residue n = mod.value();
  const BigInt pair_count = BigInt(n) * (n - 1);
  using Table = std::array<std::array<Probability, 2>, 2>;

  Table below{};
  for (int a = 0; a < 2; ++a)
    for (int c = 0; c < 2; ++c) {
      std::uint64_t best = 0;
      for (Residue key = 0; key < n; ++key)
        for (Residue shown = 0; shown < n; ++shown) {
          std::uint64_t hits = 0;
          for (Residue n0 = 0; n0 < n; ++n0)
            for (Residue n1 = 0; n1 < n; ++n1) {
              if (n0 == n1) continue;
              const Pair p{n0, n1};
              Residue response = mod.add(p.select(Bit(a)), key);
              if (mod.sub(response, shown) == p.select(Bit(c))) ++hits;
            }
          best = std::max(best, hits);
        }
      below[a][c] = Probability(BigInt(best), pair_count);
    }

  for (RoundIndex k = rounds - 1; k >= 1; --k) {
    Table here{};
    for (int a = 0; a < 2; ++a)
      for (int c = 0; c < 2; ++c) {
        Probability best = 0;
        for (Residue key = 0; key < n; ++key) {
          Probability total = 0;
          for (Residue n0 = 0; n0 < n; ++n0)
            for (Residue n1 = 0; n1 < n; ++n1) {
              if (n0 == n1) continue;
              const Pair p{n0, n1};
              Residue response = mod.add(p.select(Bit(a)), key);
              Residue needed_key = mod.sub(response, p.select(Bit(c)));
              Probability product = 1;
              for (unsigned j = 0; j < m && product != 0; ++j)
                product *= below[(key >> j) & 1u][(needed_key >> j) & 1u];
              total += product;
            }
          total /= Probability(pair_count);
          if (total > best) best = total;
        }
        here[a][c] = best;
      }
    below = here;
    if (k == 1) break;
  }
  return std::max(below[0][1], below[1][0]);
}

// ---------------------------------------------------------------------------
// Monte Carlo harness

struct AttackOutcome {
  std::string strategy;
  unsigned m = 0;
  RoundIndex rounds = 0;
  std::uint64_t trials = 0;
  std::uint64_t successes = 0;
  double success_rate = 0;
  std::optional<Probability> oracle_rate;
};

// Runs independent simulations with per-trial seeds derived from `seed`.
// offset-guess targets the flipped bit; honest-relabel targets the committed
// bit. A trial succeeds when verify accepts the target.
inline AttackOutcome run_attack(const ProtocolParams& params, RoundIndex rounds, AttackKind kind,
                                std::uint64_t trials, std::uint64_t seed,
                                const SimConfig& config = {}) {
  if (trials < 1) throw std::invalid_argument("at least one trial is required");
  static const HonestStrategy honest;
  static const OffsetGuessStrategy offset;
  const AliceStrategy& strategy =
      kind == AttackKind::offset_guess ? static_cast<const AliceStrategy&>(offset) : honest;

  AttackOutcome out;
  out.strategy = attack_name(kind);
  out.m = params.m();
  out.rounds = rounds;
  out.trials = trials;
  for (std::uint64_t i = 0; i < trials; ++i) {
    const std::uint64_t trial_seed = derive_seed(seed, i);
    const Bit bit = (derive_seed(trial_seed, stream::trial_bit) & 1u) ? Bit::one : Bit::zero;
    const Bit target = kind == AttackKind::offset_guess ? flip(bit) : bit;
    auto run = simulate(params, rounds, bit, derive_seed(trial_seed, stream::trial_alice),
                        derive_seed(trial_seed, stream::trial_bob), strategy, config, target);
    Verdict v = verify(run.transcript);
    if (v.accepted() && *v.bit() == target) ++out.successes;
  }
  out.success_rate = static_cast<double>(out.successes) / static_cast<double>(trials);
  if (kind == AttackKind::honest_relabel)
    out.oracle_rate = Probability(1);
  else if (oracle_sized(params.m(), rounds))
    out.oracle_rate = optimal_flip_success(params.m(), rounds);
  return out;
}

}  // namespace rbc

#include "support.hpp"

#include <gtest/gtest.h>

#include <cmath>

using namespace rbc;
using rbc::testing::unit_params;

namespace {

// Independent oracle: enumerate every deterministic unveiler for tiny
// instances. The committed bit and tape are maximized over; Bob's pairs are
// averaged. For R = 1 the unveiler sees nothing and chooses one revealed key.
// For R = 2 it sees the round-1 pair and response and chooses the two
// revealed round-2 keys as a function of them.
Probability naive_r1(unsigned m) {
  const Modulus mod(m);
  const Residue n = mod.value();
  Probability best = 0;
  for (int b = 0; b < 2; ++b)
    for (Residue key = 0; key < n; ++key)
      for (Residue shown = 0; shown < n; ++shown) {
        long hits = 0, total = 0;
        for (Residue n0 = 0; n0 < n; ++n0)
          for (Residue n1 = 0; n1 < n; ++n1) {
            if (n0 == n1) continue;
            ++total;
            Residue r = commit_one(mod, {n0, n1}, key, Bit(b));
            if (decode_one(mod, r, {n0, n1}, shown) == flip(Bit(b))) ++hits;
          }
        Probability p(hits, total);
        if (p > best) best = p;
      }
  return best;
}

// m = 2, R = 2. Tape is (k1, k2a, k2b); round 2 commits the bits of k1.
// Given the round-1 view, the best revealed pair is chosen per view; it
// succeeds on those round-2 pairs where both positions decode and the decoded
// bits form a key that opens round 1 to the flipped bit.
Probability naive_r2() {
  const Modulus mod(2);
  const Residue n = 4;
  std::vector<Pair> pairs;
  for (Residue a = 0; a < n; ++a)
    for (Residue b = 0; b < n; ++b)
      if (a != b) pairs.push_back({a, b});
  Probability best = 0;
  for (int b = 0; b < 2; ++b)
    for (Residue k1 = 0; k1 < n; ++k1)
      for (Residue k2a = 0; k2a < n; ++k2a)
        for (Residue k2b = 0; k2b < n; ++k2b) {
          long wins = 0;
          for (const Pair& p1 : pairs) {
            Residue r1 = commit_one(mod, p1, k1, Bit(b));
            long best_here = 0;
            for (Residue sa = 0; sa < n; ++sa)
              for (Residue sb = 0; sb < n; ++sb) {
                long count = 0;
                for (const Pair& pa : pairs)
                  for (const Pair& pb : pairs) {
                    Residue ra = commit_one(mod, pa, k2a, (k1 & 1) ? Bit::one : Bit::zero);
                    Residue rb = commit_one(mod, pb, k2b, (k1 & 2) ? Bit::one : Bit::zero);
                    auto da = decode_one(mod, ra, pa, sa);
                    auto db = decode_one(mod, rb, pb, sb);
                    if (!da || !db) continue;
                    Residue key = static_cast<Residue>(to_int(*da)) | (static_cast<Residue>(to_int(*db)) << 1);
                    if (decode_one(mod, r1, p1, key) == flip(Bit(b))) ++count;
                  }
                best_here = std::max(best_here, count);
              }
            wins += best_here;
          }
          Probability p(wins, static_cast<long>(pairs.size() * pairs.size() * pairs.size()));
          if (p > best) best = p;
        }
  return best;
}

// value_1 = 1/(N-1); value_{R+1} = ((1 + value_R)^m - 1)/(N - 1).
Probability closed_form(unsigned m, RoundIndex R) {
  const Residue n = Residue{1} << m;
  Probability v(1, static_cast<long>(n - 1));
  for (RoundIndex k = 1; k < R; ++k) {
    Probability x = 1;
    for (unsigned j = 0; j < m; ++j) x *= (1 + v);
    v = (x - 1) / static_cast<long>(n - 1);
  }
  return v;
}

}  // namespace

TEST(Oracle, MatchesNaiveEnumerationForOneRound) {
  EXPECT_EQ(naive_r1(2), Probability(1, 3));
  EXPECT_EQ(naive_r1(3), Probability(1, 7));
  EXPECT_EQ(optimal_flip_success(2, 1), naive_r1(2));
  EXPECT_EQ(optimal_flip_success(3, 1), naive_r1(3));
}

TEST(Oracle, MatchesNaiveEnumerationForTwoRounds) {
  Probability naive = naive_r2();
  EXPECT_EQ(optimal_flip_success(2, 2), naive);
  EXPECT_LE(naive, Probability(1, 3));
}

TEST(Oracle, MatchesClosedForm) {
  for (unsigned m = 2; m <= 3; ++m)
    for (RoundIndex R = 1; R <= 3; ++R)
      EXPECT_EQ(optimal_flip_success(m, R), closed_form(m, R)) << "m=" << m << " R=" << R;
  EXPECT_EQ(optimal_flip_success(2, 2), Probability(7, 27));
  EXPECT_EQ(optimal_flip_success(2, 3), Probability(427, 2187));
  EXPECT_EQ(optimal_flip_success(3, 2), Probability(169, 2401));
}

TEST(Oracle, BoundedAndNonIncreasing) {
  for (unsigned m = 2; m <= 4; ++m) {
    Probability previous = 1;
    for (RoundIndex R = 1; R <= 3; ++R) {
      Probability v = optimal_flip_success(m, R);
      EXPECT_LE(v, Probability(2, static_cast<long>(Residue{1} << m)));
      EXPECT_LE(v, previous);
      previous = v;
    }
  }
}

TEST(Oracle, RefusesOversizedInstances) {
  EXPECT_FALSE(oracle_sized(12, 2));
  EXPECT_THROW(optimal_flip_success(12, 2), OracleBudgetExceeded);
  EXPECT_THROW(optimal_flip_success(2, 0), std::out_of_range);
}

TEST(OffsetGuess, OneRoundMatchesOracle) {
  auto out = run_attack(unit_params(2), 1, AttackKind::offset_guess, 10000, 99);
  ASSERT_TRUE(out.oracle_rate);
  const double p = to_double(*out.oracle_rate);
  const double sigma = std::sqrt(p * (1 - p) / 10000);
  EXPECT_NEAR(out.success_rate, p, 3 * sigma);
}

TEST(OffsetGuess, LongerCommitmentsStayBelowTwoOverN) {
  auto out = run_attack(unit_params(4), 2, AttackKind::offset_guess, 10000, 5);
  const double bound = 2.0 / 16;
  const double sigma = std::sqrt(bound * (1 - bound) / 10000);
  EXPECT_LE(out.success_rate, bound + 3 * sigma);
  ASSERT_TRUE(out.oracle_rate);
  EXPECT_LE(out.success_rate, to_double(*out.oracle_rate) + 3 * sigma);
}

TEST(OffsetGuess, MatchingPositionsRevealTheTrueKey) {
  // target == committed: the strategy behaves honestly
  OffsetGuessStrategy s;
  auto run = simulate(unit_params(2), 3, Bit::one, 4, 5, s, {}, Bit::one);
  EXPECT_EQ(verify(run.transcript).bit(), Bit::one);
}

TEST(HonestRelabel, AlwaysSucceeds) {
  auto out = run_attack(unit_params(3), 3, AttackKind::honest_relabel, 300, 1);
  EXPECT_EQ(out.successes, 300u);
  EXPECT_EQ(out.success_rate, 1.0);
}

TEST(Attack, Names) {
  EXPECT_EQ(attack_from_name("offset-guess"), AttackKind::offset_guess);
  EXPECT_EQ(attack_from_name("honest-relabel"), AttackKind::honest_relabel);
  EXPECT_FALSE(attack_from_name("unknown"));
}

TEST(Attack, Deterministic) {
  auto a = run_attack(unit_params(2), 2, AttackKind::offset_guess, 500, 3);
  auto b = run_attack(unit_params(2), 2, AttackKind::offset_guess, 500, 3);
  EXPECT_EQ(a.successes, b.successes);
}

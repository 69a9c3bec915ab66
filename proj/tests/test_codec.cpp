#include "support.hpp"

#include <gtest/gtest.h>

#include <map>

using namespace rbc;

namespace {
std::vector<Bit> bits(std::initializer_list<int> v) {
  std::vector<Bit> out;
  for (int b : v) out.push_back(bit_from_int(b));
  return out;
}
}  // namespace

TEST(CommitOne, Examples) {
  Modulus n(4);
  EXPECT_EQ(commit_one(n, {3, 9}, 7, Bit::zero), 10u);
  EXPECT_EQ(commit_one(n, {3, 9}, 7, Bit::one), 0u);
  EXPECT_EQ(commit_one(n, {3, 9}, 0, Bit::zero), 3u);
}

TEST(CommitOne, RejectsBadPairs) {
  Modulus n(4);
  EXPECT_THROW(commit_one(n, {3, 3}, 7, Bit::zero), std::invalid_argument);
  EXPECT_THROW(commit_one(n, {3, 16}, 7, Bit::zero), std::out_of_range);
}

TEST(DecodeOne, Examples) {
  Modulus n(4);
  EXPECT_EQ(decode_one(n, 10, {3, 9}, 7), Bit::zero);
  EXPECT_EQ(decode_one(n, 0, {3, 9}, 7), Bit::one);
  EXPECT_EQ(decode_one(n, 5, {3, 9}, 7), std::nullopt);
}

TEST(DecodeOne, InvertsCommitForEveryInput) {
  for (unsigned m : {2u, 3u}) {
    Modulus n(m);
    for (Residue a = 0; a < n.value(); ++a)
      for (Residue b = 0; b < n.value(); ++b) {
        if (a == b) continue;
        for (Residue key = 0; key < n.value(); ++key)
          for (Bit bit : {Bit::zero, Bit::one})
            ASSERT_EQ(decode_one(n, commit_one(n, {a, b}, key, bit), {a, b}, key), bit);
      }
  }
}

// For each fixed pair, the response distribution over uniform keys is the
// same for both bits, counted exactly.
TEST(Hiding, ResponseDistributionIndependentOfBit) {
  for (unsigned m : {2u, 3u, 4u}) {
    Modulus n(m);
    for (Residue a = 0; a < n.value(); ++a)
      for (Residue b = 0; b < n.value(); ++b) {
        if (a == b) continue;
        std::map<Residue, int> zero, one;
        for (Residue key = 0; key < n.value(); ++key) {
          ++zero[commit_one(n, {a, b}, key, Bit::zero)];
          ++one[commit_one(n, {a, b}, key, Bit::one)];
        }
        ASSERT_EQ(zero, one) << "m=" << m << " pair=(" << a << "," << b << ")";
      }
  }
}

TEST(BinaryForm, Examples) {
  EXPECT_EQ(binary_form(5, 3), bits({1, 0, 1}));
  EXPECT_EQ(binary_form(0, 4), bits({0, 0, 0, 0}));
  EXPECT_EQ(binary_form(15, 4), bits({1, 1, 1, 1}));
  EXPECT_THROW(binary_form(16, 4), std::out_of_range);
  for (Residue x = 0; x < 64; ++x) EXPECT_EQ(from_binary(binary_form(x, 6)), x);
}

TEST(SegmentBounds, Examples) {
  EXPECT_EQ(segment_bounds(1, 2).start, 0u);
  EXPECT_EQ(segment_bounds(1, 7).count, 1u);
  EXPECT_EQ(segment_bounds(2, 10).start, 1u);
  EXPECT_EQ(segment_bounds(2, 10).count, 10u);
  EXPECT_EQ(segment_bounds(3, 10).start, 11u);
  EXPECT_EQ(segment_bounds(3, 10).count, 100u);
  EXPECT_EQ(segment_bounds(3, 2).start, 3u);
  EXPECT_EQ(segment_bounds(3, 2).count, 4u);
}

TEST(SegmentBounds, TileTheTape) {
  for (unsigned m = 2; m <= 5; ++m) {
    std::uint64_t next = 0;
    for (RoundIndex k = 1; k <= 6; ++k) {
      auto b = segment_bounds(k, m);
      EXPECT_EQ(b.start, next);
      next = b.start + b.count;
    }
    EXPECT_EQ(tape_length(m, 6), next);
  }
}

TEST(RoundPayloadBits, Examples) {
  Modulus n(2);
  RandomTape tape(n, {3, 1, 2, 0, 0, 0, 0});
  EXPECT_EQ(round_payload_bits(2, tape, 2), bits({1, 1}));
  EXPECT_EQ(round_payload_bits(3, tape, 2), bits({1, 0, 0, 1}));
  EXPECT_THROW(round_payload_bits(1, tape, 2), std::invalid_argument);

  Modulus n3(3);
  RandomTape big(n3, std::vector<Residue>(tape_length(3, 4), 5));
  for (RoundIndex k = 2; k <= 4; ++k)
    EXPECT_EQ(round_payload_bits(k, big, 3).size(), segment_bounds(k, 3).count);
}

TEST(CommitRound, Examples) {
  Modulus n(4);
  PairChallenge c{2, {{3, 9}, {2, 5}}};
  const std::vector<Residue> keys{7, 4};
  auto r = commit_round(n, bits({1, 1}), c, keys);
  EXPECT_EQ(r.values, (std::vector<Residue>{0, 9}));

  PairChallenge empty{1, {}};
  EXPECT_TRUE(commit_round(n, {}, empty, {}).values.empty());

  PairChallenge single{1, {{3, 9}}};
  const std::vector<Residue> key{7};
  EXPECT_EQ(commit_round(n, bits({0}), single, key).values.front(),
            commit_one(n, {3, 9}, 7, Bit::zero));
}

TEST(RandomTape, RejectsOutOfRangeValues) {
  EXPECT_THROW(RandomTape(Modulus(2), {0, 4}), std::out_of_range);
}

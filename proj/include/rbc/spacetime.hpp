#pragma once

// Two-site geometry and the round schedule.
//
// Laboratories sit within delta of two agreed points a distance delta_x
// apart. Only site ids and (delta_x, delta) are modeled; every bound below uses
// worst-case placement inside the delta-balls.

#include "rbc/time.hpp"

#include <cstddef>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <utility>

namespace rbc {

class InvalidParams : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

enum class Site : std::uint8_t { one = 1, two = 2 };

constexpr Site other(Site s) { return s == Site::one ? Site::two : Site::one; }
constexpr int to_int(Site s) { return static_cast<int>(s); }

inline Site site_from_int(long long value) {
  if (value == 1) return Site::one;
  if (value == 2) return Site::two;
  throw std::invalid_argument("site id must be 1 or 2, got " + std::to_string(value));
}

using RoundIndex = std::size_t;

struct SpacetimeEvent {
  Time time;
  Site site = Site::one;

  friend bool operator==(const SpacetimeEvent&, const SpacetimeEvent&) = default;
};

// Arithmetic in Z/2^m. Residues are stored in uint64, so m <= 63.
class Modulus {
 public:
  static constexpr unsigned max_bits = 63;

  explicit Modulus(unsigned bits) : bits_(bits) {
    if (bits < 1 || bits > max_bits)
      throw InvalidParams("security parameter m must be in [1, 63], got " + std::to_string(bits));
    mask_ = (std::uint64_t{1} << bits) - 1;
  }

  unsigned bits() const { return bits_; }
  std::uint64_t value() const { return mask_ + 1; }
  bool contains(std::uint64_t x) const { return x <= mask_; }
  std::uint64_t reduce(std::uint64_t x) const { return x & mask_; }
  std::uint64_t add(std::uint64_t a, std::uint64_t b) const { return (a + b) & mask_; }
  std::uint64_t sub(std::uint64_t a, std::uint64_t b) const { return (a - b) & mask_; }

  friend bool operator==(const Modulus&, const Modulus&) = default;

 private:
  unsigned bits_;
  std::uint64_t mask_;
};

// Security parameter m (N = 2^m), site separation delta_x, placement tolerance
// delta and per-round window delta_t. Construction validates:
//   m >= 2, delta_x > 0, delta >= 0, delta_t > 0,
//   delta < delta_x / 10, delta_t < delta_x / 10,
//   T = delta_x - 2 delta_t - 3 delta > 0, and delta + 2 delta_t < T.
class ProtocolParams {
 public:
  ProtocolParams(unsigned m, Time delta_x, Time delta, Time delta_t)
      : modulus_(check_bits(m)),
        delta_x_(std::move(delta_x)),
        delta_(std::move(delta)),
        delta_t_(std::move(delta_t)) {
    if (delta_x_ <= 0) throw InvalidParams("delta_x must be positive");
    if (delta_ < 0) throw InvalidParams("delta must be non-negative");
    if (delta_t_ <= 0) throw InvalidParams("delta_t must be positive");
    period_ = delta_x_ - 2 * delta_t_ - 3 * delta_;
    if (period_ <= 0)
      throw InvalidParams("round period T = delta_x - 2*delta_t - 3*delta = " +
                          format_time(period_) + " is not positive");
    if (delta_ * 10 >= delta_x_) throw InvalidParams("delta_x must exceed 10*delta");
    if (delta_t_ * 10 >= delta_x_) throw InvalidParams("delta_t must be below delta_x/10");
    if (delta_ + 2 * delta_t_ >= period_)
      throw InvalidParams("round windows overlap: delta + 2*delta_t must be below T");
  }

  unsigned m() const { return modulus_.bits(); }
  const Modulus& modulus() const { return modulus_; }
  std::uint64_t N() const { return modulus_.value(); }
  const Time& delta_x() const { return delta_x_; }
  const Time& delta() const { return delta_; }
  const Time& delta_t() const { return delta_t_; }
  const Time& period() const { return period_; }

  friend bool operator==(const ProtocolParams& a, const ProtocolParams& b) {
    return a.modulus_ == b.modulus_ && a.delta_x_ == b.delta_x_ && a.delta_ == b.delta_ &&
           a.delta_t_ == b.delta_t_;
  }

 private:
  static unsigned check_bits(unsigned m) {
    if (m < 2) throw InvalidParams("security parameter m must be at least 2");
    return m;
  }

  Modulus modulus_;
  Time delta_x_;
  Time delta_;
  Time delta_t_;
  Time period_;
};

inline Time period(const ProtocolParams& p) { return p.period(); }

// Conservative lower bound on any cross-site signal delay.
inline Time min_cross_delay(const ProtocolParams& p) { return p.delta_x() - 2 * p.delta(); }

struct RoundWindow {
  Time challenge_start;
  Time challenge_end;
  Time response_end;

  friend bool operator==(const RoundWindow&, const RoundWindow&) = default;
};

inline void require_round(RoundIndex k) {
  if (k < 1) throw std::out_of_range("round index must be >= 1");
}

inline RoundWindow round_window(const ProtocolParams& p, RoundIndex k) {
  require_round(k);
  Time start = Time(k - 1) * p.period();
  return {start, start + p.delta_t(), start + p.delta() + 2 * p.delta_t()};
}

// Odd rounds run at site 1, even rounds at site 2.
inline Site round_site(RoundIndex k) {
  require_round(k);
  return k % 2 == 1 ? Site::one : Site::two;
}

// An unveiling from site 3 - round_site(R) is causally safe iff it completes
// strictly before this time: the round-R challenge cannot have reached it.
inline Time unveil_deadline(const ProtocolParams& p, RoundIndex last_round) {
  require_round(last_round);
  return Time(last_round - 1) * p.period() + min_cross_delay(p);
}

// Same-site pairs are never spacelike: lab positions are only known to within
// delta.
inline bool spacelike(const SpacetimeEvent& a, const SpacetimeEvent& b, const ProtocolParams& p) {
  if (a.site == b.site) return false;
  Time gap = a.time > b.time ? Time(a.time - b.time) : Time(b.time - a.time);
  return gap < min_cross_delay(p);
}

}  // namespace rbc

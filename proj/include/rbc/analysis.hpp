#pragma once

// Resource accounting. Tape use and traffic grow by a factor m per round, so
// for a fixed separation the channel rate caps how long a commitment can be
// sustained.
//
// Traffic convention: each commitment carries a challenge of two m-bit numbers
// and an m-bit response, so round k moves 3 m * m^(k-1) payload bits, with no
// framing. A round is practical if its traffic fits in one period T at the
// given rate.

#include "rbc/spacetime.hpp"
#include "rbc/time.hpp"

#include <cstdint>
#include <iomanip>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

namespace rbc {

namespace detail {

inline void require_analysis_args(unsigned m, RoundIndex k) {
  if (m < 2) throw std::invalid_argument("m must be at least 2");
  require_round(k);
}

inline BigInt ipow(unsigned base, RoundIndex exponent) {
  BigInt r = 1;
  for (RoundIndex i = 0; i < exponent; ++i) r *= base;
  return r;
}

}  // namespace detail

// (m^R - 1)/(m - 1) tape values for rounds 1..R.
inline BigInt tape_consumed(unsigned m, RoundIndex rounds) {
  detail::require_analysis_args(m, rounds);
  return (detail::ipow(m, rounds) - 1) / (m - 1);
}

inline BigInt round_traffic_bits(unsigned m, RoundIndex k) {
  detail::require_analysis_args(m, k);
  return 3 * BigInt(m) * detail::ipow(m, k - 1);
}

// Largest R whose round-R traffic fits in baud * T bits; 0 if round 1 does
// not fit.
inline RoundIndex max_practical_rounds(const ProtocolParams& params, const Rational& baud) {
  if (baud <= 0) throw std::invalid_argument("baud must be positive");
  const Rational budget = baud * params.period();
  RoundIndex r = 0;
  while (Rational(round_traffic_bits(params.m(), r + 1)) <= budget) ++r;
  return r;
}

struct TrafficRow {
  RoundIndex round = 0;
  BigInt bits;
  Rational seconds;  // bits / baud
  bool fits = false;
};

struct CapacityReport {
  unsigned m = 0;
  Time delta_x;
  Time delta;
  Time delta_t;
  Time period;
  Rational baud;
  std::vector<TrafficRow> traffic;  // rounds 1..max_rounds + 1
  BigInt tape_consumed;             // for max_rounds rounds
  RoundIndex max_rounds = 0;
};

inline CapacityReport capacity_report(const ProtocolParams& params, const Rational& baud) {
  CapacityReport rep;
  rep.m = params.m();
  rep.delta_x = params.delta_x();
  rep.delta = params.delta();
  rep.delta_t = params.delta_t();
  rep.period = params.period();
  rep.baud = baud;
  rep.max_rounds = max_practical_rounds(params, baud);
  const Rational budget = baud * params.period();
  for (RoundIndex k = 1; k <= rep.max_rounds + 1; ++k) {
    TrafficRow row;
    row.round = k;
    row.bits = round_traffic_bits(params.m(), k);
    row.seconds = Rational(row.bits) / baud;
    row.fits = Rational(row.bits) <= budget;
    rep.traffic.push_back(std::move(row));
  }
  rep.tape_consumed = rep.max_rounds == 0 ? BigInt(0) : tape_consumed(params.m(), rep.max_rounds);
  return rep;
}

inline std::string format_table(const CapacityReport& rep) {
  std::ostringstream os;
  os << "m            " << rep.m << "\n"
     << "delta_x      " << format_time(rep.delta_x) << " s\n"
     << "delta        " << format_time(rep.delta) << " s\n"
     << "delta_t      " << format_time(rep.delta_t) << " s\n"
     << "period T     " << format_time(rep.period) << " s\n"
     << "baud         " << format_rational(rep.baud) << " bit/s\n"
     << "max rounds   " << rep.max_rounds << "\n"
     << "tape values  " << rep.tape_consumed.str() << "\n\n";
  os << std::right << std::setw(6) << "round" << std::setw(24) << "bits" << std::setw(16)
     << "seconds" << std::setw(6) << "fits" << "\n";
  for (const auto& row : rep.traffic) {
    std::ostringstream secs;
    secs << std::setprecision(6) << to_double(row.seconds);
    os << std::setw(6) << row.round << std::setw(24) << row.bits.str() << std::setw(16)
       << secs.str() << std::setw(6) << (row.fits ? "yes" : "no") << "\n";
  }
  return os.str();
}

}  // namespace rbc

#pragma once

#include "rbc/rbc.hpp"

#include <string>

namespace rbc::testing {

inline ProtocolParams make_params(unsigned m, const std::string& dx, const std::string& delta,
                                  const std::string& dt) {
  return ProtocolParams(m, parse_time(dx), parse_time(delta), parse_time(dt));
}

// dx = 1, delta = 0.005, dt = 0.01, so T = 0.965.
inline ProtocolParams unit_params(unsigned m = 2) { return make_params(m, "1", "0.005", "0.01"); }

inline const HonestStrategy& honest() {
  static const HonestStrategy s;
  return s;
}

inline SimulationResult honest_run(unsigned m, RoundIndex rounds, Bit bit, std::uint64_t alice = 1,
                                   std::uint64_t bob = 2, const SimConfig& config = {}) {
  return simulate(unit_params(m), rounds, bit, alice, bob, honest(), config);
}

inline Time t(const char* s) { return parse_time(s); }

}  // namespace rbc::testing

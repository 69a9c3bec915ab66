// rbc: run, verify, attack and size relativistic bit commitments.
//
// Exit codes: 0 success or accept, 1 usage or parse error, 2 protocol abort,
// 3 verification reject.

#include "rbc/rbc.hpp"

#include "CLI11.hpp"

#include <cstdlib>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <sstream>
#include <string>

namespace {

enum Exit { ok = 0, usage = 1, aborted = 2, rejected = 3 };

struct ParamFlags {
  unsigned m = 2;
  std::string dx = "1";
  std::string delta = "0.005";
  std::string dt = "0.01";

  void add_to(CLI::App& cmd) {
    cmd.add_option("--m", m, "bits per number; N = 2^m")->capture_default_str();
    cmd.add_option("--dx", dx, "site separation in light-seconds")->capture_default_str();
    cmd.add_option("--delta", delta, "site radius in light-seconds")->capture_default_str();
    cmd.add_option("--dt", dt, "challenge/response duration in seconds")->capture_default_str();
  }

  rbc::ProtocolParams build() const {
    return rbc::ProtocolParams(m, rbc::parse_time(dx), rbc::parse_time(delta), rbc::parse_time(dt));
  }
};

void print_flat(const rbc::Json& j, std::ostream& os, const std::string& prefix = "") {
  for (const auto& [key, value] : j.items()) {
    const std::string name = prefix.empty() ? key : prefix + "." + key;
    if (value.is_object()) {
      print_flat(value, os, name);
    } else {
      os << std::left << std::setw(20) << name << ' '
         << (value.is_string() ? value.get<std::string>() : value.dump()) << '\n';
    }
  }
}

void emit(const rbc::Json& j, const std::string& format) {
  if (format == "table")
    print_flat(j, std::cout);
  else
    std::cout << j.dump(2) << '\n';
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot read " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace

int main(int argc, char** argv) {
  std::string format = "json";
  if (const char* env = std::getenv("RBC_FORMAT")) format = env;

  CLI::App app{"Relativistic bit commitment toolkit"};
  app.require_subcommand(1);
  app.fallthrough();
  app.add_option("--format", format, "output format: json or table (default from RBC_FORMAT)");

  // run
  auto* run = app.add_subcommand("run", "simulate an honest commitment and write its transcript");
  ParamFlags run_params;
  run_params.add_to(*run);
  std::size_t rounds = 3;
  int bit = 0;
  std::uint64_t alice_seed = 1, bob_seed = 2;
  std::string out_path;
  bool dual = false, handshake = false;
  std::string intra_delay, unveil_delay;
  int hq_site = 0;
  run->add_option("--rounds", rounds, "number of commitment rounds")->capture_default_str();
  run->add_option("--bit", bit, "committed bit")->check(CLI::IsMember({0, 1}))->capture_default_str();
  run->add_option("--alice-seed", alice_seed)->capture_default_str();
  run->add_option("--bob-seed", bob_seed)->capture_default_str();
  run->add_option("--out", out_path, "transcript path (default: stdout)");
  run->add_flag("--dual-unveil", dual, "also unveil round R-1 from the other site");
  run->add_flag("--handshake", handshake, "record a test-signal exchange at each site");
  run->add_option("--intra-delay", intra_delay, "same-site delivery delay (default: delta)");
  run->add_option("--unveil-delay", unveil_delay, "hold the unveiling back by this long");
  run->add_option("--hq-site", hq_site, "site that aggregates the unveilings")
      ->check(CLI::IsMember({1, 2}));

  // verify
  auto* ver = app.add_subcommand("verify", "check a transcript and print the verdict");
  std::string in_path;
  ver->add_option("transcript", in_path, "transcript file")->required();

  // attack
  auto* att = app.add_subcommand("attack", "estimate a cheating strategy's success rate");
  ParamFlags att_params;
  att_params.add_to(*att);
  std::size_t att_rounds = 1;
  std::string strategy = "offset-guess";
  std::uint64_t trials = 10000, seed = 1;
  att->add_option("--rounds", att_rounds)->capture_default_str();
  att->add_option("--strategy", strategy, "offset-guess or honest-relabel")->capture_default_str();
  att->add_option("--trials", trials)->capture_default_str();
  att->add_option("--seed", seed)->capture_default_str();

  // capacity
  auto* cap = app.add_subcommand("capacity", "largest round count a channel can sustain");
  ParamFlags cap_params{10, "0.1", "0.00001", "0.0001"};
  cap_params.add_to(*cap);
  std::string baud = "1e11";
  cap->add_option("--baud", baud, "channel rate in bits per second")->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? Exit::ok : Exit::usage;
  }
  if (format != "json" && format != "table") {
    std::cerr << "error: unknown format '" << format << "' (expected json or table)\n";
    return Exit::usage;
  }

  try {
    if (*run) {
      const auto params = run_params.build();
      rbc::SimConfig config;
      config.dual_unveil = dual;
      config.handshake = handshake;
      if (!intra_delay.empty()) config.intra_site_delay = rbc::parse_time(intra_delay);
      if (!unveil_delay.empty()) config.unveil_delay = rbc::parse_time(unveil_delay);
      if (hq_site) config.hq_site = rbc::site_from_int(hq_site);
      static const rbc::HonestStrategy honest;
      const auto t = rbc::run_protocol(params, rounds, rbc::bit_from_int(bit), alice_seed,
                                       bob_seed, honest, config);
      const std::string text = rbc::serialize(t);
      if (out_path.empty()) {
        std::cout << text;
      } else {
        std::ofstream out(out_path, std::ios::binary);
        if (!out) throw std::runtime_error("cannot write " + out_path);
        out << text;
      }
      if (t.abort) {
        std::cerr << "aborted: " << *t.abort << '\n';
        return Exit::aborted;
      }
      return Exit::ok;
    }

    if (*ver) {
      rbc::Transcript t = rbc::parse_transcript(read_file(in_path));
      const rbc::Verdict v = rbc::verify(t);
      emit(rbc::to_json(v, t), format);
      return v.accepted() ? Exit::ok : Exit::rejected;
    }

    if (*att) {
      auto kind = rbc::attack_from_name(strategy);
      if (!kind) {
        std::cerr << "error: unknown strategy '" << strategy
                  << "' (expected offset-guess or honest-relabel)\n";
        return Exit::usage;
      }
      const auto outcome = rbc::run_attack(att_params.build(), att_rounds, *kind, trials, seed);
      emit(rbc::to_json(outcome), format);
      return Exit::ok;
    }

    if (*cap) {
      const auto report = rbc::capacity_report(cap_params.build(), rbc::parse_rational(baud));
      if (format == "table")
        std::cout << rbc::format_table(report);
      else
        std::cout << rbc::to_json(report).dump(2) << '\n';
      return Exit::ok;
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return Exit::usage;
  }
  return Exit::usage;
}

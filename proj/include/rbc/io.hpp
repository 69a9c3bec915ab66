#pragma once

// JSON file formats: transcripts (versioned, bit-exact), verdict records,
// attack reports and capacity reports. Residues are JSON integers; times are
// strings holding exact decimals or "p/q" fractions.

#include "rbc/adversary.hpp"
#include "rbc/analysis.hpp"
#include "rbc/netsim.hpp"
#include "rbc/verifier.hpp"

#include "json.hpp"

#include <stdexcept>
#include <string>
#include <string_view>

namespace rbc {

using Json = nlohmann::ordered_json;

inline constexpr const char* kTranscriptFormat = "rbc-transcript";
inline constexpr const char* kTranscriptVersion = "1";

class TranscriptParseError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// ---------------------------------------------------------------------------
// Transcript

inline Json to_json(const Transcript& t) {
  Json j;
  j["format"] = kTranscriptFormat;
  j["version"] = kTranscriptVersion;
  j["generator"] = t.provenance.generator;
  j["seeds"] = {{"alice", t.provenance.alice_seed}, {"bob", t.provenance.bob_seed}};
  j["params"] = {{"m", t.params.m()},
                 {"N", t.params.N()},
                 {"delta_x", format_time(t.params.delta_x())},
                 {"delta", format_time(t.params.delta())},
                 {"delta_t", format_time(t.params.delta_t())},
                 {"period", format_time(t.params.period())}};
  j["simulation"] = {{"intra_site_delay", format_time(t.settings.intra_site_delay)},
                     {"hq_site", to_int(t.settings.hq_site)}};

  Json signals = Json::array();
  for (const auto& s : t.test_signals)
    signals.push_back(
        {{"site", to_int(s.site)}, {"sent", format_time(s.sent)}, {"echoed", format_time(s.echoed)}});
  j["test_signals"] = std::move(signals);

  Json rounds = Json::array();
  for (const auto& r : t.rounds) {
    Json pairs = Json::array();
    for (const auto& p : r.challenge.pairs) pairs.push_back(Json::array({p.n0, p.n1}));
    rounds.push_back({{"k", r.k},
                      {"site", to_int(r.site)},
                      {"challenge",
                       {{"start", format_time(r.challenge.start)},
                        {"end", format_time(r.challenge.end)},
                        {"pairs", std::move(pairs)}}},
                      {"response",
                       {{"end", format_time(r.response.end)}, {"values", r.response.values}}}});
  }
  j["rounds"] = std::move(rounds);

  Json unveils = Json::array();
  for (const auto& u : t.unveils)
    unveils.push_back({{"round", u.round},
                       {"site", to_int(u.site)},
                       {"completes_at", format_time(u.completes_at)},
                       {"revealed", u.revealed}});
  j["unveils"] = std::move(unveils);

  if (t.aggregation)
    j["aggregation"] = {{"time", format_time(t.aggregation->time)},
                        {"site", to_int(t.aggregation->site)}};
  else
    j["aggregation"] = nullptr;
  j["abort"] = t.abort ? Json(*t.abort) : Json(nullptr);
  return j;
}

inline std::string serialize(const Transcript& t) { return to_json(t).dump(2) + "\n"; }

namespace detail {

inline const Json& field(const Json& obj, const char* key) {
  if (!obj.is_object()) throw TranscriptParseError("expected an object");
  auto it = obj.find(key);
  if (it == obj.end()) throw TranscriptParseError(std::string("missing field '") + key + "'");
  return *it;
}

inline std::uint64_t as_uint(const Json& v, const char* what) {
  if (!v.is_number_unsigned()) throw TranscriptParseError(std::string(what) + " must be a non-negative integer");
  return v.get<std::uint64_t>();
}

inline Time as_time(const Json& v, const char* what) {
  if (!v.is_string()) throw TranscriptParseError(std::string(what) + " must be a time string");
  try {
    return parse_time(v.get<std::string>());
  } catch (const std::invalid_argument& e) {
    throw TranscriptParseError(std::string(what) + ": " + e.what());
  }
}

inline Site as_site(const Json& v) {
  std::uint64_t s = as_uint(v, "site");
  if (s != 1 && s != 2) throw TranscriptParseError("site must be 1 or 2");
  return s == 1 ? Site::one : Site::two;
}

inline std::vector<Residue> as_residues(const Json& v, const char* what) {
  if (!v.is_array()) throw TranscriptParseError(std::string(what) + " must be an array");
  std::vector<Residue> out;
  out.reserve(v.size());
  for (const auto& x : v) out.push_back(as_uint(x, what));
  return out;
}

inline const Json& as_array(const Json& v, const char* what) {
  if (!v.is_array()) throw TranscriptParseError(std::string(what) + " must be an array");
  return v;
}

inline ProtocolParams parse_params(const Json& p) {
  const std::uint64_t m = as_uint(field(p, "m"), "m");
  if (m < 2 || m > Modulus::max_bits) throw TranscriptParseError("m out of range");
  try {
    ProtocolParams params(static_cast<unsigned>(m), as_time(field(p, "delta_x"), "delta_x"),
                          as_time(field(p, "delta"), "delta"),
                          as_time(field(p, "delta_t"), "delta_t"));
    if (as_uint(field(p, "N"), "N") != params.N())
      throw TranscriptParseError("N does not equal 2^m");
    if (as_time(field(p, "period"), "period") != params.period())
      throw TranscriptParseError("period does not equal delta_x - 2 delta_t - 3 delta");
    return params;
  } catch (const InvalidParams& e) {
    throw TranscriptParseError(std::string("invalid params: ") + e.what());
  }
}

}  // namespace detail

inline Transcript from_json(const Json& j) {
  using namespace detail;
  if (!j.is_object()) throw TranscriptParseError("transcript must be a JSON object");
  if (field(j, "format") != kTranscriptFormat) throw TranscriptParseError("not an rbc transcript");
  if (field(j, "version") != kTranscriptVersion)
    throw TranscriptParseError("unsupported transcript version");

  Transcript t(parse_params(field(j, "params")));
  const Json& gen = field(j, "generator");
  if (!gen.is_string()) throw TranscriptParseError("generator must be a string");
  t.provenance.generator = gen.get<std::string>();
  const Json& seeds = field(j, "seeds");
  t.provenance.alice_seed = as_uint(field(seeds, "alice"), "alice seed");
  t.provenance.bob_seed = as_uint(field(seeds, "bob"), "bob seed");

  const Json& sim = field(j, "simulation");
  t.settings.intra_site_delay = as_time(field(sim, "intra_site_delay"), "intra_site_delay");
  t.settings.hq_site = as_site(field(sim, "hq_site"));

  for (const auto& s : as_array(field(j, "test_signals"), "test_signals"))
    t.test_signals.push_back({as_site(field(s, "site")), as_time(field(s, "sent"), "sent"),
                              as_time(field(s, "echoed"), "echoed")});

  for (const auto& r : as_array(field(j, "rounds"), "rounds")) {
    RoundRecord rec;
    rec.k = as_uint(field(r, "k"), "k");
    rec.site = as_site(field(r, "site"));
    const Json& c = field(r, "challenge");
    rec.challenge.start = as_time(field(c, "start"), "challenge start");
    rec.challenge.end = as_time(field(c, "end"), "challenge end");
    for (const auto& p : as_array(field(c, "pairs"), "pairs")) {
      if (!p.is_array() || p.size() != 2) throw TranscriptParseError("a pair must have two members");
      rec.challenge.pairs.push_back({as_uint(p[0], "pair member"), as_uint(p[1], "pair member")});
    }
    const Json& resp = field(r, "response");
    rec.response.end = as_time(field(resp, "end"), "response end");
    rec.response.values = as_residues(field(resp, "values"), "response values");
    t.rounds.push_back(std::move(rec));
  }

  for (const auto& u : as_array(field(j, "unveils"), "unveils")) {
    UnveilMessage msg;
    msg.round = as_uint(field(u, "round"), "round");
    msg.site = as_site(field(u, "site"));
    msg.completes_at = as_time(field(u, "completes_at"), "completes_at");
    msg.revealed = as_residues(field(u, "revealed"), "revealed");
    t.unveils.push_back(std::move(msg));
  }

  const Json& agg = field(j, "aggregation");
  if (!agg.is_null())
    t.aggregation = SpacetimeEvent{as_time(field(agg, "time"), "aggregation time"),
                                   as_site(field(agg, "site"))};
  const Json& abort = field(j, "abort");
  if (!abort.is_null()) {
    if (!abort.is_string()) throw TranscriptParseError("abort must be a string or null");
    t.abort = abort.get<std::string>();
  }
  return t;
}

inline Transcript parse_transcript(std::string_view text) {
  Json j;
  try {
    j = Json::parse(text.begin(), text.end());
  } catch (const nlohmann::json::parse_error& e) {
    throw TranscriptParseError(std::string("malformed JSON: ") + e.what());
  }
  try {
    return from_json(j);
  } catch (const nlohmann::json::exception& e) {
    throw TranscriptParseError(std::string("bad transcript: ") + e.what());
  }
}

// ---------------------------------------------------------------------------
// Reports

inline Json to_json(const Verdict& v, const Transcript& t) {
  Json j;
  j["outcome"] = v.accepted() ? "accept" : "reject";
  if (v.accepted()) j["bit"] = to_int(*v.bit());
  if (v.reason()) j["reason"] = to_string(*v.reason());
  if (v.position()) j["reject_position"] = {{"round", v.position()->round}, {"index", v.position()->index}};
  if (!v.detail().empty()) j["detail"] = v.detail();
  j["aggregation_time"] = t.aggregation ? Json(format_time(t.aggregation->time)) : Json(nullptr);
  return j;
}

inline Json to_json(const AttackOutcome& o) {
  Json j;
  j["strategy"] = o.strategy;
  j["m"] = o.m;
  j["rounds"] = o.rounds;
  j["trials"] = o.trials;
  j["successes"] = o.successes;
  j["success_rate"] = o.success_rate;
  if (o.oracle_rate) {
    j["oracle_rate"] = to_double(*o.oracle_rate);
    j["oracle_rate_exact"] = format_rational(*o.oracle_rate);
  } else {
    j["oracle_rate"] = nullptr;
  }
  return j;
}

inline Json to_json(const CapacityReport& r) {
  Json j;
  j["m"] = r.m;
  j["delta_x"] = format_time(r.delta_x);
  j["delta"] = format_time(r.delta);
  j["delta_t"] = format_time(r.delta_t);
  j["period"] = format_time(r.period);
  j["baud"] = format_rational(r.baud);
  j["max_rounds"] = r.max_rounds;
  j["tape_consumed"] = r.tape_consumed.str();
  Json rows = Json::array();
  for (const auto& row : r.traffic)
    rows.push_back({{"round", row.round},
                    {"bits", row.bits.str()},
                    {"seconds", to_double(row.seconds)},
                    {"fits", row.fits}});
  j["traffic"] = std::move(rows);
  return j;
}

}  // namespace rbc

#pragma once

// Deterministic discrete-event simulation of the two-site protocol.
//
// Every message is timestamped with the spacetime event that emitted it.
// Same-site delivery takes the configured intra-site delay (default delta,
// allowed range [0, 2 delta]). Everything any Alice agent sees or emits is
// also mirrored to the other site at the fastest physically allowed speed,
// delta_x - 2 delta after emission, so colluding Alice agents get all the
// information relativity permits and nothing more. Strategies only ever
// receive a CausalView: the messages that have reached their site by the
// decision time.

#include "rbc/agents.hpp"
#include "rbc/codec.hpp"
#include "rbc/spacetime.hpp"

#include <algorithm>
#include <cstdint>
#include <memory>
#include <optional>
#include <queue>
#include <span>
#include <string>
#include <tuple>
#include <variant>
#include <vector>

namespace rbc {

// Bob's lab-placement probe: sent at `sent`, Alice's echo received at `echoed`.
struct TestSignal {
  Site site = Site::one;
  Time sent;
  Time echoed;

  friend bool operator==(const TestSignal&, const TestSignal&) = default;
};

using Payload = std::variant<PairChallenge, CommitResponse, UnveilMessage, TestSignal>;

enum class Transit { same_site, cross_site };

struct TimedMessage {
  Payload payload;
  SpacetimeEvent sent;
  Site destination = Site::one;
  Transit transit = Transit::same_site;
  Time earliest_arrival;

  friend bool operator==(const TimedMessage&, const TimedMessage&) = default;
};

struct ChallengeRecord {
  Time start;
  Time end;
  std::vector<Pair> pairs;

  friend bool operator==(const ChallengeRecord&, const ChallengeRecord&) = default;
};

struct ResponseRecord {
  Time end;
  std::vector<Residue> values;

  friend bool operator==(const ResponseRecord&, const ResponseRecord&) = default;
};

struct RoundRecord {
  RoundIndex k = 0;
  Site site = Site::one;
  ChallengeRecord challenge;
  ResponseRecord response;

  friend bool operator==(const RoundRecord&, const RoundRecord&) = default;
};

struct SimSettings {
  Time intra_site_delay;
  Site hq_site = Site::one;

  friend bool operator==(const SimSettings&, const SimSettings&) = default;
};

struct Provenance {
  std::string generator = kGeneratorId;
  std::uint64_t alice_seed = 0;
  std::uint64_t bob_seed = 0;

  friend bool operator==(const Provenance&, const Provenance&) = default;
};

// The audit artifact. unveils[0] is the round-R unveiling; in dual mode
// unveils[1] is the round-(R-1) unveiling from the other site.
struct Transcript {
  explicit Transcript(ProtocolParams p) : params(std::move(p)) {}

  ProtocolParams params;
  Provenance provenance;
  SimSettings settings;
  std::vector<TestSignal> test_signals;
  std::vector<RoundRecord> rounds;
  std::vector<UnveilMessage> unveils;
  std::optional<SpacetimeEvent> aggregation;
  std::optional<std::string> abort;

  friend bool operator==(const Transcript&, const Transcript&) = default;
};

// ---------------------------------------------------------------------------
// Messages

inline Time transit_delay(const ProtocolParams& p, const Time& intra_delay, Site from, Site to) {
  return from == to ? intra_delay : min_cross_delay(p);
}

inline TimedMessage make_message(const ProtocolParams& p, const Time& intra_delay, Payload payload,
                                 SpacetimeEvent sent, Site destination) {
  Time arrival = sent.time + transit_delay(p, intra_delay, sent.site, destination);
  Transit transit = sent.site == destination ? Transit::same_site : Transit::cross_site;
  return {std::move(payload), std::move(sent), destination, transit, std::move(arrival)};
}

namespace detail {

// The local delivery plus its mirror to the other site. The mirror leaves at
// `origin`, the earliest moment the information existed at the sending site.
inline void emit(std::vector<TimedMessage>& log, const ProtocolParams& p, const Time& intra,
                 const Payload& payload, Site site, const Time& local_sent, const Time& origin) {
  log.push_back(make_message(p, intra, payload, {local_sent, site}, site));
  log.push_back(make_message(p, intra, payload, {origin, site}, other(site)));
}

inline void emit_test_signal(std::vector<TimedMessage>& log, const ProtocolParams& p,
                             const Time& intra, const TestSignal& s) {
  emit(log, p, intra, s, s.site, s.sent, s.sent);
}

inline void emit_challenge(std::vector<TimedMessage>& log, const ProtocolParams& p,
                           const Time& intra, const RoundRecord& r) {
  emit(log, p, intra, PairChallenge{r.k, r.challenge.pairs}, r.site, r.challenge.end,
       r.challenge.start);
}

// Alice decides on arrival of the challenge and takes delta_t to transmit.
inline Time response_decision_time(const ProtocolParams& p, const ResponseRecord& r) {
  return r.end - p.delta_t();
}

inline void emit_response(std::vector<TimedMessage>& log, const ProtocolParams& p,
                          const Time& intra, const RoundRecord& r) {
  emit(log, p, intra, CommitResponse{r.k, r.response.values}, r.site, r.response.end,
       response_decision_time(p, r.response));
}

inline void emit_unveil(std::vector<TimedMessage>& log, const ProtocolParams& p, const Time& intra,
                        const UnveilMessage& u) {
  emit(log, p, intra, u, u.site, u.completes_at, u.completes_at);
}

}  // namespace detail

// Rebuilds every message implied by a transcript. The simulator emits through
// the same helpers, so views computed from a finished transcript match the
// views strategies saw live.
inline std::vector<TimedMessage> message_log(const Transcript& t) {
  std::vector<TimedMessage> log;
  const Time& intra = t.settings.intra_site_delay;
  for (const auto& s : t.test_signals) detail::emit_test_signal(log, t.params, intra, s);
  for (const auto& r : t.rounds) {
    detail::emit_challenge(log, t.params, intra, r);
    detail::emit_response(log, t.params, intra, r);
  }
  for (const auto& u : t.unveils) detail::emit_unveil(log, t.params, intra, u);
  return log;
}

class CausalView {
 public:
  Site site() const { return site_; }
  const Time& now() const { return now_; }
  std::span<const TimedMessage> messages() const { return messages_; }

  const PairChallenge* challenge(RoundIndex k) const { return find<PairChallenge>(k); }
  const CommitResponse* response(RoundIndex k) const { return find<CommitResponse>(k); }

 private:
  CausalView(Site site, Time now, std::vector<TimedMessage> messages)
      : site_(site), now_(std::move(now)), messages_(std::move(messages)) {}

  template <class T>
  const T* find(RoundIndex k) const {
    for (const auto& msg : messages_)
      if (const T* p = std::get_if<T>(&msg.payload); p && p->round == k) return p;
    return nullptr;
  }

  friend CausalView causal_view(Site, const Time&, std::span<const TimedMessage>);

  Site site_;
  Time now_;
  std::vector<TimedMessage> messages_;
};

// Messages addressed to `site` whose earliest arrival is at or before `now`.
inline CausalView causal_view(Site site, const Time& now, std::span<const TimedMessage> log) {
  std::vector<TimedMessage> visible;
  for (const auto& msg : log)
    if (msg.destination == site && msg.earliest_arrival <= now) visible.push_back(msg);
  return CausalView(site, now, std::move(visible));
}

// Earliest event at the HQ site at which every round record and every
// unveiling has arrived. Records at the HQ site count from local completion.
inline SpacetimeEvent aggregate_event(const Transcript& t) {
  if (t.unveils.empty()) throw std::logic_error("aggregation needs an unveiling");
  const Site hq = t.settings.hq_site;
  Time latest = 0;
  auto arrive = [&](const Time& done, Site from) {
    Time at = from == hq ? done : Time(done + min_cross_delay(t.params));
    if (at > latest) latest = at;
  };
  for (const auto& r : t.rounds) arrive(r.response.end, r.site);
  for (const auto& u : t.unveils) arrive(u.completes_at, u.site);
  return {latest, hq};
}

// ---------------------------------------------------------------------------
// Strategies

// Pre-agreed state shared by both Alice agents before the protocol starts.
struct AliceSecrets {
  std::shared_ptr<const RandomTape> tape;
  Bit committed_bit = Bit::zero;
  Bit target_bit = Bit::zero;
  std::uint64_t seed = 0;
  RoundIndex planned_rounds = 1;
};

struct ResponseRequest {
  RoundIndex round = 0;
  Site site = Site::one;
  Time decided_at;

  friend bool operator==(const ResponseRequest&, const ResponseRequest&) = default;
};

struct UnveilRequest {
  RoundIndex round = 0;
  Site site = Site::one;
  Time completes_at;

  friend bool operator==(const UnveilRequest&, const UnveilRequest&) = default;
};

// An Alice agent's decision rule. Outputs must be a function of the request,
// the shared secrets and the causal view only; implementations hold no mutable
// state.
class AliceStrategy {
 public:
  virtual ~AliceStrategy() = default;
  virtual std::string name() const = 0;
  virtual CommitResponse respond(const ProtocolParams&, const AliceSecrets&,
                                 const ResponseRequest&, const CausalView&) const = 0;
  virtual UnveilMessage unveil(const ProtocolParams&, const AliceSecrets&, const UnveilRequest&,
                               const CausalView&) const = 0;
};

class HonestStrategy : public AliceStrategy {
 public:
  std::string name() const override { return "honest"; }

  CommitResponse respond(const ProtocolParams& params, const AliceSecrets& secrets,
                         const ResponseRequest& req, const CausalView& view) const override {
    const PairChallenge* challenge = view.challenge(req.round);
    if (!challenge)
      throw std::logic_error("round " + std::to_string(req.round) + " challenge not in view");
    return alice_response(req.round, *challenge, state(params, secrets), params);
  }

  UnveilMessage unveil(const ProtocolParams& params, const AliceSecrets& secrets,
                       const UnveilRequest& req, const CausalView&) const override {
    return alice_unveil(req.round, state(params, secrets), params, req.site, req.completes_at);
  }

 protected:
  static AliceState state(const ProtocolParams& params, const AliceSecrets& s) {
    return AliceState(s.committed_bit, s.tape, s.planned_rounds, params.m());
  }
};

struct Decision {
  std::variant<ResponseRequest, UnveilRequest> request;
  std::variant<CommitResponse, UnveilMessage> output;
};

// Re-runs each recorded decision against the view rebuilt from the finished
// transcript. Returns the indices of decisions whose output differs.
inline std::vector<std::size_t> replay_mismatches(const Transcript& t, const AliceStrategy& strategy,
                                                  const AliceSecrets& secrets,
                                                  std::span<const Decision> decisions) {
  const auto log = message_log(t);
  std::vector<std::size_t> bad;
  for (std::size_t i = 0; i < decisions.size(); ++i) {
    const Decision& d = decisions[i];
    bool same = false;
    if (auto* rq = std::get_if<ResponseRequest>(&d.request)) {
      auto view = causal_view(rq->site, rq->decided_at, log);
      auto* out = std::get_if<CommitResponse>(&d.output);
      same = out && strategy.respond(t.params, secrets, *rq, view) == *out;
    } else {
      const auto& uq = std::get<UnveilRequest>(d.request);
      auto view = causal_view(uq.site, uq.completes_at, log);
      auto* out = std::get_if<UnveilMessage>(&d.output);
      same = out && strategy.unveil(t.params, secrets, uq, view) == *out;
    }
    if (!same) bad.push_back(i);
  }
  return bad;
}

// ---------------------------------------------------------------------------
// Simulation

struct SimConfig {
  std::optional<Time> intra_site_delay;  // default: delta
  std::optional<Site> hq_site;           // default: the round-R unveiler's site
  bool dual_unveil = false;
  bool handshake = false;
  Time unveil_delay = 0;  // added to the honest unveil completion time
};

struct SimulationResult {
  Transcript transcript;
  std::vector<Decision> decisions;
  AliceSecrets secrets;
};

namespace detail {

enum class EventKind { test_signal, challenge, respond, unveil };

struct Event {
  Time time;
  Site site;
  std::uint64_t seq;
  EventKind kind;
  RoundIndex round;
};

struct LaterFirst {
  bool operator()(const Event& a, const Event& b) const {
    return std::tie(a.time, a.site, a.seq) > std::tie(b.time, b.site, b.seq);
  }
};

inline bool in_range(const Modulus& mod, std::span<const Residue> values) {
  return std::all_of(values.begin(), values.end(), [&](Residue v) { return mod.contains(v); });
}

}  // namespace detail

inline SimulationResult simulate(const ProtocolParams& params, RoundIndex rounds, Bit bit,
                                 std::uint64_t alice_seed, std::uint64_t bob_seed,
                                 const AliceStrategy& strategy, const SimConfig& config = {},
                                 std::optional<Bit> target = std::nullopt) {
  require_round(rounds);
  if (config.dual_unveil && rounds < 2)
    throw std::invalid_argument("dual unveiling needs at least two rounds");
  const Time intra = config.intra_site_delay.value_or(params.delta());
  if (intra < 0 || intra > 2 * params.delta())
    throw std::invalid_argument("intra-site delay must lie in [0, 2*delta]");
  if (config.unveil_delay < 0) throw std::invalid_argument("unveil delay must be non-negative");

  const unsigned m = params.m();
  const Site unveil_site = other(round_site(rounds));

  SimulationResult result{Transcript(params), {}, {}};
  Transcript& t = result.transcript;
  t.provenance = {kGeneratorId, alice_seed, bob_seed};
  t.settings = {intra, config.hq_site.value_or(unveil_site)};

  AliceSecrets& secrets = result.secrets;
  secrets.tape = std::make_shared<const RandomTape>(
      materialize_tape(alice_seed, params.modulus(), m, rounds));
  secrets.committed_bit = bit;
  secrets.target_bit = target.value_or(bit);
  secrets.seed = alice_seed;
  secrets.planned_rounds = rounds;

  BobAgent bob[2] = {BobAgent(Site::one, bob_seed), BobAgent(Site::two, bob_seed)};
  auto bob_at = [&](Site s) -> BobAgent& { return bob[to_int(s) - 1]; };

  std::vector<TimedMessage> log;
  std::vector<std::optional<RoundRecord>> pending(rounds + 1);
  std::priority_queue<detail::Event, std::vector<detail::Event>, detail::LaterFirst> queue;
  std::uint64_t seq = 0;
  auto schedule = [&](Time at, Site site, detail::EventKind kind, RoundIndex k) {
    queue.push({std::move(at), site, seq++, kind, k});
  };

  if (config.handshake)
    for (Site s : {Site::one, Site::two}) schedule(Time(0), s, detail::EventKind::test_signal, 0);
  for (RoundIndex k = 1; k <= rounds; ++k)
    schedule(round_window(params, k).challenge_start, round_site(k), detail::EventKind::challenge, k);
  schedule(round_window(params, rounds).response_end + config.unveil_delay, unveil_site,
           detail::EventKind::unveil, rounds);
  if (config.dual_unveil)
    schedule(round_window(params, rounds).challenge_end, round_site(rounds),
             detail::EventKind::unveil, rounds - 1);

  auto abort_with = [&](std::string reason) { t.abort = std::move(reason); };

  while (!queue.empty() && !t.abort) {
    detail::Event ev = queue.top();
    queue.pop();
    switch (ev.kind) {
      case detail::EventKind::test_signal: {
        TestSignal s{ev.site, ev.time, ev.time + 2 * intra};
        t.test_signals.push_back(s);
        detail::emit_test_signal(log, params, intra, s);
        break;
      }
      case detail::EventKind::challenge: {
        PairChallenge c = bob_at(ev.site).challenge(ev.round, params);
        RoundRecord r;
        r.k = ev.round;
        r.site = ev.site;
        r.challenge = {ev.time, ev.time + params.delta_t(), std::move(c.pairs)};
        detail::emit_challenge(log, params, intra, r);
        schedule(r.challenge.end + intra, ev.site, detail::EventKind::respond, ev.round);
        pending[ev.round] = std::move(r);
        break;
      }
      case detail::EventKind::respond: {
        RoundRecord& r = *pending[ev.round];
        ResponseRequest req{ev.round, ev.site, ev.time};
        CommitResponse out;
        try {
          out = strategy.respond(params, secrets, req, causal_view(ev.site, ev.time, log));
        } catch (const std::exception& e) {
          abort_with("round " + std::to_string(ev.round) + " response failed: " + e.what());
          break;
        }
        if (out.round != ev.round || out.values.size() != r.challenge.pairs.size() ||
            !detail::in_range(params.modulus(), out.values)) {
          abort_with("round " + std::to_string(ev.round) + " response is malformed");
          break;
        }
        r.response = {ev.time + params.delta_t(), out.values};
        if (r.response.end > round_window(params, ev.round).response_end) {
          abort_with("round " + std::to_string(ev.round) + " response missed its window");
          break;
        }
        result.decisions.push_back({req, out});
        detail::emit_response(log, params, intra, r);
        t.rounds.push_back(r);
        break;
      }
      case detail::EventKind::unveil: {
        UnveilRequest req{ev.round, ev.site, ev.time};
        UnveilMessage out;
        try {
          out = strategy.unveil(params, secrets, req, causal_view(ev.site, ev.time, log));
        } catch (const std::exception& e) {
          abort_with(std::string("unveiling failed: ") + e.what());
          break;
        }
        if (out.round != ev.round || out.site != ev.site || out.completes_at != ev.time ||
            out.revealed.size() != segment_bounds(ev.round, m).count ||
            !detail::in_range(params.modulus(), out.revealed)) {
          abort_with("unveiling for round " + std::to_string(ev.round) + " is malformed");
          break;
        }
        if (out.completes_at >= unveil_deadline(params, ev.round)) {
          abort_with("unveiling for round " + std::to_string(ev.round) + " missed its deadline");
          break;
        }
        result.decisions.push_back({req, out});
        detail::emit_unveil(log, params, intra, out);
        t.unveils.push_back(std::move(out));
        break;
      }
    }
  }

  if (!t.abort) {
    std::sort(t.unveils.begin(), t.unveils.end(),
              [](const UnveilMessage& a, const UnveilMessage& b) { return a.round > b.round; });
    t.aggregation = aggregate_event(t);
  }
  return result;
}

inline Transcript run_protocol(const ProtocolParams& params, RoundIndex rounds, Bit bit,
                               std::uint64_t alice_seed, std::uint64_t bob_seed,
                               const AliceStrategy& strategy, const SimConfig& config = {}) {
  return simulate(params, rounds, bit, alice_seed, bob_seed, strategy, config).transcript;
}

}  // namespace rbc

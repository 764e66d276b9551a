#include "enact/agent.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "enact/error.hpp"

namespace enact {

std::string_view mood_name(Mood m) {
    switch (m) {
        case Mood::confident: return "confident";
        case Mood::neutral: return "neutral";
        case Mood::anxious: return "anxious";
    }
    return "unknown";
}

namespace {

Mood mood_for(double gamma, const AffectParams& p) {
    if (gamma >= 0.5 * p.gamma_max) return Mood::confident;
    if (gamma < 0.2 * p.gamma_max) return Mood::anxious;
    return Mood::neutral;
}

}  // namespace

AffectiveState AffectiveState::initial(const AffectParams& params) {
    AffectiveState s;
    s.gamma = params.gamma_max;
    s.zeta = std::clamp(1.0, params.zeta_min, params.zeta_max);
    s.surprise_ema = 0.0;
    s.mood = mood_for(s.gamma, params);
    return s;
}

AffectiveState update_affect(const AffectiveState& state, double surprisal, double beta, const AffectParams& params) {
    if (!(surprisal >= 0.0) || !std::isfinite(surprisal)) throw ValidationError("update_affect: surprisal must be >= 0");
    if (!(beta >= 0.0 && beta <= 1.0)) throw ValidationError("update_affect: beta must lie in [0, 1]");
    AffectiveState next;
    next.surprise_ema = std::max(0.0, (1.0 - beta) * state.surprise_ema + beta * surprisal);
    next.gamma = std::clamp(params.gamma_max * std::exp(-params.k_gamma * next.surprise_ema), params.gamma_min,
                            params.gamma_max);
    next.zeta = std::clamp(std::exp(params.k_zeta * next.surprise_ema), params.zeta_min, params.zeta_max);
    next.mood = mood_for(next.gamma, params);
    return next;
}

std::size_t utf8_length(std::string_view text) {
    return static_cast<std::size_t>(std::count_if(
        text.begin(), text.end(), [](char c) { return (static_cast<unsigned char>(c) & 0xC0) != 0x80; }));
}

double MotorTiming::duration(const Action& action, const ChunkTable& table, const ExternalState& before) const {
    switch (kind_of(action)) {
        case ActionKind::fixate_source:
        case ActionKind::fixate_target: return fixation_ms;
        case ActionKind::type_chunk: {
            const auto n = utf8_length(table.at(std::get<TypeChunk>(action).chunk).target_text);
            return keystroke_ms_per_char * static_cast<double>(std::max<std::size_t>(n, 1));
        }
        case ActionKind::delete_slot: {
            const auto held = before.at(std::get<Delete>(action).slot);
            const std::size_t n = held ? utf8_length(table.at(*held).target_text) : 0;
            return delete_ms_per_char * static_cast<double>(std::max<std::size_t>(n, 1));
        }
        case ActionKind::pause: return static_cast<double>(std::get<Pause>(action).duration_ms);
        case ActionKind::consult: return consult_ms;
    }
    return 0.0;
}

std::string_view strategy_name(Strategy s) {
    switch (s) {
        case Strategy::head_starter: return "head_starter";
        case Strategy::large_context_planner: return "large_context_planner";
        case Strategy::custom: return "custom";
    }
    return "custom";
}

Strategy parse_strategy(std::string_view name) {
    if (name == "head_starter") return Strategy::head_starter;
    if (name == "large_context_planner" || name == "planner") return Strategy::large_context_planner;
    if (name == "custom") return Strategy::custom;
    throw ValidationError("unknown strategy '" + std::string(name) + "'");
}

AgentConfig AgentConfig::head_starter() {
    AgentConfig c;
    c.strategy = Strategy::head_starter;
    c.weights = {1.0, 4.0};
    c.horizon = 1;
    c.adaptive_horizon = false;
    c.read_ahead = 1;
    c.theta_gamma = 1.0;
    return c;
}

AgentConfig AgentConfig::large_context_planner() {
    AgentConfig c;
    c.strategy = Strategy::large_context_planner;
    c.weights = {4.0, 1.0};
    c.horizon = 4;
    c.adaptive_horizon = true;
    c.read_ahead = std::numeric_limits<std::size_t>::max();
    c.theta_gamma = 2.5;
    return c;
}

AgentConfig AgentConfig::preset(Strategy s) {
    switch (s) {
        case Strategy::head_starter: return head_starter();
        case Strategy::large_context_planner: return large_context_planner();
        case Strategy::custom: break;
    }
    return AgentConfig{};
}

std::size_t AgentConfig::effective_horizon(std::size_t unread_content) const {
    return adaptive_horizon ? std::max<std::size_t>(1, unread_content) : horizon;
}

void AgentConfig::validate() const {
    auto finite_nonneg = [](double v) { return std::isfinite(v) && v >= 0.0; };
    if (horizon < 1) throw ValidationError("agent: horizon must be >= 1");
    if (!finite_nonneg(weights.epistemic) || !finite_nonneg(weights.pragmatic))
        throw ValidationError("agent: EFE weights must be finite and >= 0");
    if (!(affect.gamma_min > 0.0) || affect.gamma_min > affect.gamma_max || !std::isfinite(affect.gamma_max))
        throw ValidationError("agent: need 0 < gamma_min <= gamma_max");
    if (!(affect.zeta_min > 0.0) || affect.zeta_min > affect.zeta_max || !std::isfinite(affect.zeta_max))
        throw ValidationError("agent: need 0 < zeta_min <= zeta_max");
    if (!(affect.beta >= 0.0 && affect.beta <= 1.0)) throw ValidationError("agent: beta must lie in [0, 1]");
    if (!finite_nonneg(affect.k_gamma) || !finite_nonneg(affect.k_zeta))
        throw ValidationError("agent: precision gains must be finite and >= 0");
    if (!finite_nonneg(theta_entropy) || !finite_nonneg(theta_gamma))
        throw ValidationError("agent: hesitation thresholds must be finite and >= 0");
    if (hesitation_pause_ms < 0) throw ValidationError("agent: hesitation pause must be >= 0 ms");
    if (branching_limit < 1) throw ValidationError("agent: branching limit must be >= 1");
    for (double v : prefs.log_pref)
        if (!std::isfinite(v)) throw ValidationError("agent: log preferences must be finite");
    for (double v : {prefs.progress_bonus, prefs.inconsistency_penalty, prefs.read_cost, prefs.pause_cost,
                     prefs.consult_cost})
        if (!std::isfinite(v)) throw ValidationError("agent: preference values must be finite");
    for (double v : {timing.fixation_ms, timing.keystroke_ms_per_char, timing.delete_ms_per_char, timing.consult_ms})
        if (!finite_nonneg(v)) throw ValidationError("agent: motor timings must be finite and >= 0");
}

CognitiveState CognitiveState::initial(const CandidateSpace& space) {
    CognitiveState s;
    s.log_evidence.assign(space.size(), 0.0);
    s.refresh(space);
    return s;
}

bool CognitiveState::consistent(const CandidateOrdering& ordering) const {
    return std::all_of(placed.begin(), placed.end(),
                       [&](const auto& sc) { return ordering.places(sc.second, sc.first); });
}

void CognitiveState::refresh(const CandidateSpace& space) {
    double top = -std::numeric_limits<double>::infinity();
    std::vector<bool> live(space.size(), false);
    for (OrderingIndex k = 0; k < space.size(); ++k) {
        live[k] = space.prior()[k] > 0.0 && consistent(space.ordering(k));
        if (live[k]) top = std::max(top, log_evidence[k]);
    }
    if (!std::isfinite(top)) throw ContradictionError("placements contradict every candidate ordering");
    std::vector<double> w(space.size(), 0.0);
    for (OrderingIndex k = 0; k < space.size(); ++k)
        if (live[k]) w[k] = space.prior()[k] * std::exp(log_evidence[k] - top);
    belief = Categorical::from_weights(std::move(w));
}

OrderingIndex CognitiveState::evidence_map(const CandidateSpace& space) const {
    OrderingIndex best = 0;
    double best_score = -std::numeric_limits<double>::infinity();
    for (OrderingIndex k = 0; k < space.size(); ++k) {
        if (!(space.prior()[k] > 0.0)) continue;
        const double score = std::log(space.prior()[k]) + log_evidence[k];
        if (score > best_score) {
            best_score = score;
            best = k;
        }
    }
    return best;
}

std::string_view layer_name(Layer l) {
    switch (l) {
        case Layer::affective: return "affective";
        case Layer::cognitive: return "cognitive";
        case Layer::behavioral: return "behavioral";
    }
    return "unknown";
}

bool layers_adjacent(Layer source, Layer target) {
    if (source == target) return false;
    const bool a_c = (source == Layer::affective && target == Layer::cognitive) ||
                     (source == Layer::cognitive && target == Layer::affective);
    const bool c_b = (source == Layer::cognitive && target == Layer::behavioral) ||
                     (source == Layer::behavioral && target == Layer::cognitive);
    const bool a_to_b = source == Layer::affective && target == Layer::behavioral;
    return a_c || c_b || a_to_b;
}

Message Message::make(Layer source, Layer target, MessageKind kind) {
    if (!layers_adjacent(source, target))
        throw ValidationError("message from " + std::string(layer_name(source)) + " to " +
                              std::string(layer_name(target)) + " skips the layer nesting");
    Message m;
    m.source = source;
    m.target = target;
    m.kind = kind;
    return m;
}

namespace {

struct Rollout {
    std::set<ChunkId> read;
    std::map<Slot, ChunkId> placed;  // cognitive placements plus hypothetical ones
    std::set<Slot> occupied;         // buffer plus hypothetical placements
    std::set<ChunkId> used;          // chunks in the buffer or hypothetically placed
};

struct Enumerator {
    const ChunkTable& table;
    const CandidateSpace& space;
    std::vector<OrderingIndex> live;
    std::vector<ChunkId> chunk_ids;  // ascending
    std::size_t content_count = 0;
    std::size_t horizon = 1;
    EnumerationOptions options;
    std::vector<std::vector<Action>> out;

    bool full() const { return out.size() >= options.branching_limit; }

    std::vector<Action> admissible(const Rollout& r, bool root) const {
        std::vector<Action> acts;
        for (ChunkId c : table.source_order()) {
            if (r.read.count(c) || table.at(c).source_text.empty()) continue;
            acts.push_back(FixateSource{c});
        }
        std::size_t content_read = 0;
        for (ChunkId c : r.read)
            if (table.at(c).kind == ChunkKind::content) ++content_read;
        const bool read_enough = content_read >= std::min(options.read_ahead, content_count);
        const bool content_placed = std::any_of(r.used.begin(), r.used.end(), [&](ChunkId c) {
            return table.at(c).kind == ChunkKind::content;
        });
        if (read_enough) {
            for (Slot s = 1; s <= static_cast<Slot>(space.slot_count()); ++s) {
                if (r.occupied.count(s)) continue;
                for (ChunkId c : chunk_ids) {
                    if (r.used.count(c)) continue;
                    const bool punct = table.at(c).kind == ChunkKind::punctuation;
                    if (punct ? !content_placed : !r.read.count(c)) continue;
                    const bool somewhere = std::any_of(live.begin(), live.end(), [&](OrderingIndex k) {
                        return space.ordering(k).places(c, s);
                    });
                    if (somewhere) acts.push_back(TypeChunk{c, s});
                }
            }
        }
        if (root && !options.after_pause) acts.push_back(Pause{});
        return acts;
    }

    void expand(std::vector<Action>& prefix, const Rollout& r) {
        if (full()) return;
        if (!prefix.empty()) out.push_back(prefix);
        if (prefix.size() >= horizon) return;
        for (const Action& a : admissible(r, prefix.empty())) {
            if (full()) return;
            prefix.push_back(a);
            if (std::holds_alternative<Pause>(a)) {
                // Pausing is only ever a one-step policy.
                out.push_back(prefix);
            } else if (const auto* rd = std::get_if<FixateSource>(&a)) {
                Rollout next = r;
                next.read.insert(rd->chunk);
                expand(prefix, next);
            } else if (const auto* t = std::get_if<TypeChunk>(&a)) {
                Rollout next = r;
                next.placed[t->slot] = t->chunk;
                next.occupied.insert(t->slot);
                next.used.insert(t->chunk);
                expand(prefix, next);
            }
            prefix.pop_back();
        }
    }
};

}  // namespace

std::vector<std::vector<Action>> enumerate_policies(const CognitiveState& cognitive, const ExternalState& env,
                                                    std::size_t horizon, const EnumerationOptions& options) {
    if (horizon < 1) throw ValidationError("enumerate_policies: horizon must be >= 1");
    if (env.complete()) return {};
    const CandidateSpace& space = *env.space;
    Enumerator e{space.table(), space, {}, space.table().ids(), space.table().content_ids().size(), horizon, options, {}};
    std::sort(e.chunk_ids.begin(), e.chunk_ids.end());
    for (OrderingIndex k = 0; k < cognitive.belief.size(); ++k)
        if (cognitive.belief[k] > 0.0) e.live.push_back(k);

    Rollout root;
    root.read = cognitive.read_set;
    root.placed = cognitive.placed;
    for (const auto& [slot, chunk] : cognitive.placed) {
        root.occupied.insert(slot);
        root.used.insert(chunk);
    }
    for (Slot s = 1; s <= static_cast<Slot>(env.slot_count()); ++s)
        if (const auto held = env.at(s)) {
            root.occupied.insert(s);
            root.used.insert(*held);
        }
    std::vector<Action> prefix;
    e.expand(prefix, root);
    return std::move(e.out);
}

PolicyChoice select_policy(const std::vector<std::vector<Action>>& policies, const CognitiveState& cognitive,
                           const AffectiveState& affective, const GenerativeModel& model, const AgentConfig& config,
                           Rng& rng) {
    if (policies.empty()) throw ValidationError("select_policy: no admissible policies");
    PolicyChoice choice;
    choice.efes.reserve(policies.size());
    for (const auto& p : policies)
        choice.efes.push_back(expected_free_energy(cognitive.belief, p, model, config.prefs, config.weights));
    choice.posterior = policy_posterior(choice.efes, affective.gamma);
    choice.index = config.sample ? sample_index(choice.posterior.probs(), rng) : choice.posterior.argmax();
    choice.policy = policies[choice.index];

    Message m = Message::make(Layer::behavioral, Layer::cognitive, MessageKind::precision);
    m.gamma = affective.gamma;
    m.zeta = affective.zeta;
    m.entropy = shannon_entropy(choice.posterior);
    choice.messages.push_back(m);
    return choice;
}

Agent::Agent(AgentConfig cfg, std::shared_ptr<const CandidateSpace> sp, ReadingEvidenceModel rd, std::uint64_t seed)
    : config(std::move(cfg)), space(std::move(sp)), reading(std::move(rd)), rng(seed) {
    if (!space) throw ValidationError("agent: no candidate space");
    if (reading.ordering_count() != space->size())
        throw ValidationError("agent: reading model does not match the candidate space");
    config.validate();
    affect = AffectiveState::initial(config.affect);
    cognition = CognitiveState::initial(*space);
}

namespace {

bool still_valid(const Action& a, const ExternalState& env, const CognitiveState& cog) {
    if (const auto* t = std::get_if<TypeChunk>(&a))
        return !env.at(t->slot) && !env.slot_of(t->chunk) && !cog.placed.count(t->slot);
    if (const auto* d = std::get_if<Delete>(&a)) return env.at(d->slot).has_value();
    return true;
}

std::size_t unread_content(const Agent& agent) {
    std::size_t n = 0;
    for (ChunkId c : agent.space->table().content_ids())
        if (!agent.cognition.read_set.count(c)) ++n;
    return n;
}

}  // namespace

StepResult step(Agent& agent, ExternalState& env) {
    if (env.complete()) throw ValidationError("step: the target is already complete");
    const CandidateSpace& space = *agent.space;
    const ChunkTable& table = space.table();
    const AgentConfig& cfg = agent.config;
    StepResult result;
    std::vector<std::string> notes;

    {
        Message to_b = Message::make(Layer::affective, Layer::behavioral, MessageKind::precision);
        to_b.gamma = agent.affect.gamma;
        to_b.zeta = agent.affect.zeta;
        Message to_c = Message::make(Layer::affective, Layer::cognitive, MessageKind::precision);
        to_c.gamma = agent.affect.gamma;
        to_c.zeta = agent.affect.zeta;
        result.messages.push_back(to_b);
        result.messages.push_back(to_c);
    }

    // Behavioral layer: continue a committed action or select a policy.
    std::optional<Action> chosen;
    while (!agent.behavior.pending.empty() && !chosen) {
        Action a = agent.behavior.pending.front();
        agent.behavior.pending.pop_front();
        if (still_valid(a, env, agent.cognition)) chosen = a;
    }
    if (!chosen) {
        EnumerationOptions opts{cfg.read_ahead, agent.behavior.last_was_pause, cfg.branching_limit};
        const std::size_t horizon = cfg.effective_horizon(unread_content(agent));
        auto policies = enumerate_policies(agent.cognition, env, horizon, opts);
        if (policies.empty()) {
            opts.after_pause = false;
            policies = enumerate_policies(agent.cognition, env, horizon, opts);
        }
        const GenerativeModel model = agent.model();
        PolicyChoice choice = select_policy(policies, agent.cognition, agent.affect, model, cfg, agent.rng);
        result.messages.insert(result.messages.end(), choice.messages.begin(), choice.messages.end());
        agent.behavior.repertoire.clear();
        for (const auto& p : policies)
            if (p.size() == 1) agent.behavior.repertoire.push_back(p.front());
        agent.behavior.current_policy = choice.policy;
        chosen = choice.policy.front();

        const double policy_entropy = shannon_entropy(choice.posterior);
        if (std::holds_alternative<TypeChunk>(*chosen) &&
            (policy_entropy > cfg.theta_entropy || agent.affect.gamma < cfg.theta_gamma)) {
            agent.behavior.pending.push_back(*chosen);
            chosen = Pause{cfg.hesitation_pause_ms};
            notes.push_back("hesitation");
        }
    }
    const Action action = *chosen;
    if (agent.behavior.last_kind && *agent.behavior.last_kind != kind_of(action)) notes.push_back("policy_switch");

    // Environment.
    const Categorical before = agent.cognition.belief;
    const double duration = cfg.timing.duration(action, table, env);
    Transition tr = apply_action(env, action, agent.reading, agent.rng);
    env = std::move(tr.state);
    result.action = action;
    result.observation = tr.observation;

    // Cognitive layer.
    double surprisal = 0.0;
    std::vector<Slot> revise;
    if (const auto* rd = std::get_if<FixateSource>(&action)) {
        const auto cue = std::get<OrderingCue>(tr.observation).cue;
        const auto lik = agent.reading.cue_likelihoods(rd->chunk, cue);
        double predictive = 0.0;
        for (OrderingIndex k = 0; k < lik.size(); ++k) predictive += before[k] * lik[k];
        surprisal = -std::log2(std::max(predictive, kProbabilityFloor));
        for (OrderingIndex k = 0; k < lik.size(); ++k)
            agent.cognition.log_evidence[k] += agent.affect.zeta * std::log(std::max(lik[k], kProbabilityFloor));
        agent.cognition.read_set.insert(rd->chunk);
        notes.push_back("cue=" + space.ordering(cue).label);
        if (cfg.revision) {
            const auto& map = space.ordering(agent.cognition.evidence_map(space));
            for (const auto& [slot, chunk] : agent.cognition.placed)
                if (!map.places(chunk, slot)) revise.push_back(slot);
        }
    } else if (const auto* t = std::get_if<TypeChunk>(&action)) {
        double fits = 0.0;
        for (OrderingIndex k = 0; k < space.size(); ++k)
            if (space.ordering(k).places(t->chunk, t->slot)) fits += before[k];
        surprisal = -std::log2(std::max(fits, kProbabilityFloor));
        agent.cognition.placed[t->slot] = t->chunk;
        if (agent.behavior.filled_before.count(t->slot)) notes.push_back("retype");
        agent.behavior.filled_before.insert(t->slot);
    } else if (const auto* d = std::get_if<Delete>(&action)) {
        agent.cognition.placed.erase(d->slot);
    }
    try {
        agent.cognition.refresh(space);
    } catch (const ContradictionError&) {
        // Placements no longer fit any ordering: revise everything the
        // evidence MAP disagrees with.
        const auto& map = space.ordering(agent.cognition.evidence_map(space));
        for (const auto& [slot, chunk] : agent.cognition.placed)
            if (!map.places(chunk, slot) && std::find(revise.begin(), revise.end(), slot) == revise.end())
                revise.push_back(slot);
        for (Slot s : revise) agent.cognition.placed.erase(s);
        agent.cognition.refresh(space);
    }

    // Affective layer.
    // Rounding can push a certain observation a hair above probability 1.
    surprisal = std::max(0.0, surprisal);
    agent.affect = update_affect(agent.affect, surprisal, cfg.affect.beta, cfg.affect);
    {
        Message err = Message::make(Layer::cognitive, Layer::affective, MessageKind::prediction_error);
        err.prediction_error = surprisal;
        Message summary = Message::make(Layer::cognitive, Layer::behavioral, MessageKind::belief_summary);
        summary.map_ordering = agent.cognition.belief.argmax();
        summary.entropy = shannon_entropy(agent.cognition.belief);
        result.messages.push_back(err);
        result.messages.push_back(summary);
    }

    ProcessEvent ev;
    ev.t_start = agent.clock_ms;
    ev.t_end = agent.clock_ms + duration;
    ev.action = action;
    ev.belief_entropy = shannon_entropy(agent.cognition.belief);
    ev.gamma = agent.affect.gamma;
    ev.zeta = agent.affect.zeta;
    ev.annotations = std::move(notes);
    agent.clock_ms = ev.t_end;
    result.events.push_back(std::move(ev));

    // Revision: clear the offending slots right away; retyping goes through
    // ordinary selection on later steps.
    std::sort(revise.begin(), revise.end());
    for (Slot s : revise) {
        agent.cognition.placed.erase(s);
        if (!env.at(s)) continue;
        const Action del = Delete{s};
        const double d_ms = cfg.timing.duration(del, table, env);
        env = apply_action(env, del, agent.reading, agent.rng).state;
        agent.cognition.refresh(space);
        ProcessEvent dv;
        dv.t_start = agent.clock_ms;
        dv.t_end = agent.clock_ms + d_ms;
        dv.action = del;
        dv.belief_entropy = shannon_entropy(agent.cognition.belief);
        dv.gamma = agent.affect.gamma;
        dv.zeta = agent.affect.zeta;
        dv.annotations = {"revision"};
        agent.clock_ms = dv.t_end;
        result.events.push_back(std::move(dv));
    }

    agent.behavior.last_was_pause = std::holds_alternative<Pause>(action);
    agent.behavior.last_kind = kind_of(action);
    return result;
}

Trace run_episode(const AgentConfig& config, std::shared_ptr<const CandidateSpace> space,
                  const ReadingEvidenceModel& reading, const EpisodeSetup& setup, std::uint64_t seed,
                  std::size_t max_steps) {
    if (max_steps < 1) throw ValidationError("run_episode: max_steps must be >= 1");
    Agent agent(config, space, reading, seed);
    ExternalState env = ExternalState::initial(space, setup.latent, setup.cue_drivers);
    Trace trace;
    trace.initial_entropy = shannon_entropy(agent.cognition.belief);
    for (std::size_t i = 0; i < max_steps && !env.complete(); ++i) {
        StepResult r = step(agent, env);
        for (auto& e : r.events) trace.events.push_back(std::move(e));
    }
    trace.complete = env.complete();
    trace.final_target = render_target(env);
    return trace;
}

}  // namespace enact

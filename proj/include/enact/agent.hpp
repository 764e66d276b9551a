#pragma once

// The three-layer agent: an affective layer holding precisions, a cognitive
// layer holding beliefs over candidate orderings, and a behavioral layer that
// selects and executes policies. Layers exchange typed messages.

#include <cstdint>
#include <deque>
#include <map>
#include <memory>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "enact/action.hpp"
#include "enact/categorical.hpp"
#include "enact/environment.hpp"
#include "enact/inference.hpp"
#include "enact/task_model.hpp"
#include "enact/trace.hpp"

namespace enact {

enum class Mood { confident, neutral, anxious };
std::string_view mood_name(Mood m);

struct AffectParams {
    double gamma_max = 8.0;
    double gamma_min = 0.1;
    double k_gamma = 1.5;   // gamma = gamma_max * exp(-k_gamma * ema)
    double k_zeta = 0.25;   // zeta = exp(k_zeta * ema)
    double zeta_min = 0.25;
    double zeta_max = 4.0;
    double beta = 0.2;      // EMA rate
};

struct AffectiveState {
    double gamma = 8.0;
    double zeta = 1.0;
    double surprise_ema = 0.0;
    Mood mood = Mood::confident;

    static AffectiveState initial(const AffectParams& params);
};

// ema <- (1-beta) ema + beta surprisal; gamma falls and zeta rises with the
// EMA, both clamped. Mood: confident at gamma >= gamma_max/2, anxious below
// gamma_max/5. Throws ValidationError on negative surprisal or beta outside [0,1].
AffectiveState update_affect(const AffectiveState& state, double surprisal, double beta, const AffectParams& params);

struct MotorTiming {
    double fixation_ms = 200.0;
    double keystroke_ms_per_char = 120.0;
    double delete_ms_per_char = 100.0;
    double consult_ms = 1500.0;

    // Pause actions carry their own duration.
    double duration(const Action& action, const ChunkTable& table, const ExternalState& before) const;
};

// Number of Unicode code points in a UTF-8 string.
std::size_t utf8_length(std::string_view text);

enum class Strategy { head_starter, large_context_planner, custom };
std::string_view strategy_name(Strategy s);
Strategy parse_strategy(std::string_view name);  // ValidationError

struct AgentConfig {
    Strategy strategy = Strategy::custom;
    EfeWeights weights{1.0, 1.0};
    std::size_t horizon = 1;
    // Horizon tracks the number of unread content chunks (at least 1).
    bool adaptive_horizon = false;
    // Content chunks that must have been read before anything is typed.
    std::size_t read_ahead = 1;
    PreferenceVector prefs;
    AffectParams affect;
    double theta_entropy = 2.5;  // bits of policy-posterior entropy
    double theta_gamma = 1.0;
    int hesitation_pause_ms = 800;
    bool revision = true;
    bool sample = false;  // argmax when false
    std::size_t branching_limit = 4096;
    MotorTiming timing;

    static AgentConfig head_starter();
    static AgentConfig large_context_planner();
    static AgentConfig preset(Strategy s);

    std::size_t effective_horizon(std::size_t unread_content) const;
    void validate() const;  // ValidationError
};

struct CognitiveState {
    // Log-evidence per ordering accumulated from reading cues alone.
    std::vector<double> log_evidence;
    Categorical belief;               // evidence masked by placed slots
    std::map<Slot, ChunkId> placed;
    std::set<ChunkId> read_set;

    static CognitiveState initial(const CandidateSpace& space);

    // Recomputes belief from the prior, evidence and placements.
    void refresh(const CandidateSpace& space);
    // MAP ordering of the evidence alone (ties to the lowest index).
    OrderingIndex evidence_map(const CandidateSpace& space) const;
    bool consistent(const CandidateOrdering& ordering) const;
};

struct BehavioralState {
    std::vector<Action> repertoire;
    std::vector<Action> current_policy;
    std::deque<Action> pending;  // committed actions that bypass selection
    std::set<Slot> filled_before;  // slots typed into at least once
    bool last_was_pause = false;
    std::optional<ActionKind> last_kind;
};

enum class Layer { affective, cognitive, behavioral };
std::string_view layer_name(Layer l);

enum class MessageKind { precision, prediction_error, belief_summary };

struct Message {
    Layer source = Layer::affective;
    Layer target = Layer::cognitive;
    MessageKind kind = MessageKind::precision;
    double gamma = 0.0;
    double zeta = 0.0;
    double prediction_error = 0.0;
    std::optional<OrderingIndex> map_ordering;
    double entropy = 0.0;

    // Throws ValidationError unless source->target is A<->C, C<->B or A->B.
    static Message make(Layer source, Layer target, MessageKind kind);
};

bool layers_adjacent(Layer source, Layer target);

struct EnumerationOptions {
    std::size_t read_ahead = 1;
    bool after_pause = false;
    std::size_t branching_limit = 4096;
};

// Admissible action sequences up to horizon, depth-first with reads in source
// order, then typing slot-major, then a standalone pause. Typing is offered
// only where some ordering alive under the belief places the chunk; content
// chunks need to have been read, punctuation needs a content chunk placed.
// Returns [] when the target is complete.
std::vector<std::vector<Action>> enumerate_policies(const CognitiveState& cognitive, const ExternalState& env,
                                                    std::size_t horizon, const EnumerationOptions& options = {});

struct PolicyChoice {
    std::vector<Action> policy;
    std::size_t index = 0;
    Categorical posterior;
    std::vector<EFEDecomposition> efes;
    std::vector<Message> messages;
};

// Scores every policy, forms the precision-weighted posterior and takes the
// argmax (earliest on ties) or samples from it. Throws ValidationError on an
// empty policy set.
PolicyChoice select_policy(const std::vector<std::vector<Action>>& policies, const CognitiveState& cognitive,
                           const AffectiveState& affective, const GenerativeModel& model, const AgentConfig& config,
                           Rng& rng);

struct Agent {
    AgentConfig config;
    std::shared_ptr<const CandidateSpace> space;
    ReadingEvidenceModel reading;
    AffectiveState affect;
    CognitiveState cognition;
    BehavioralState behavior;
    Rng rng;
    double clock_ms = 0.0;

    Agent(AgentConfig config, std::shared_ptr<const CandidateSpace> space, ReadingEvidenceModel reading,
          std::uint64_t seed);

    GenerativeModel model() const { return {*space, reading}; }
};

struct StepResult {
    Action action;
    Observation observation;
    std::vector<ProcessEvent> events;  // the action, then any revision deletions
    std::vector<Message> messages;
};

// One perception-action cycle. Throws ValidationError when the target is
// already complete.
StepResult step(Agent& agent, ExternalState& env);

struct EpisodeSetup {
    OrderingIndex latent = 0;
    std::map<ChunkId, OrderingIndex> cue_drivers;
};

Trace run_episode(const AgentConfig& config, std::shared_ptr<const CandidateSpace> space,
                  const ReadingEvidenceModel& reading, const EpisodeSetup& setup, std::uint64_t seed,
                  std::size_t max_steps);

}  // namespace enact

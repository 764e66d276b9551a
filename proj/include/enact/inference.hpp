#pragma once

// Belief updating, expected free energy and precision-weighted policy selection
// over a candidate-ordering space.

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "enact/action.hpp"
#include "enact/categorical.hpp"
#include "enact/task_model.hpp"

namespace enact {

// The agent's generative model: candidate orderings plus the reading channel.
// Non-owning; both referents must outlive the view.
struct GenerativeModel {
    const CandidateSpace& space;
    const ReadingEvidenceModel& reading;
};

struct PreferenceVector {
    std::vector<double> log_pref;        // per ordering; empty means all zero
    double progress_bonus = 1.0;         // per slot filled consistently with the ordering
    double inconsistency_penalty = -2.0; // per slot filled against the ordering
    double read_cost = 0.05;
    double pause_cost = 0.1;
    double consult_cost = 0.2;

    double log_preference(OrderingIndex k) const { return log_pref.empty() ? 0.0 : log_pref.at(k); }
};

struct EfeWeights {
    double epistemic = 1.0;
    double pragmatic = 1.0;
};

struct EFEDecomposition {
    double epistemic = 0.0;  // expected information gain, bits
    double pragmatic = 0.0;  // expected log-preference
    double total = 0.0;      // -w_e * epistemic - w_p * pragmatic
    EfeWeights weights;
};

struct PrecisionBounds {
    double min = 0.05;
    double max = 16.0;
};

// gamma: policy precision; zeta: sensory precision (likelihood exponent).
struct Precision {
    double gamma = 1.0;
    double zeta = 1.0;

    Precision clamped(PrecisionBounds gamma_bounds, PrecisionBounds zeta_bounds) const;
};

// posterior(i) ∝ prior(i) * likelihood(i)^zeta. Throws ContradictionError when
// no option keeps mass, ValidationError on size mismatch or negative likelihoods.
Categorical bayes_update(const Categorical& prior, std::span<const double> likelihoods, double zeta = 1.0);

// One branch of an action's predicted observation.
struct PredictedOutcome {
    double probability = 0.0;
    Categorical posterior;
};

// Observation branches with non-zero predictive probability. Reading yields one
// branch per cue label; typing yields "consistent"/"inconsistent" branches of
// the placement channel; every other action leaves the belief unchanged.
std::vector<PredictedOutcome> predict_outcomes(const Categorical& belief, const Action& action,
                                               const GenerativeModel& model);

// H(belief) - E[H(posterior)] over the action's observation channel, in bits.
double expected_information_gain(const Categorical& belief, const Action& action, const GenerativeModel& model);

// Expected log-preference of the outcome the action is predicted to yield.
double pragmatic_value(const Categorical& belief, const Action& action, const GenerativeModel& model,
                       const PreferenceVector& prefs);

// Accumulates both terms over the outcome tree of the policy. Throws
// std::invalid_argument on an empty policy or one longer than max_length.
EFEDecomposition expected_free_energy(const Categorical& belief, std::span<const Action> policy,
                                      const GenerativeModel& model, const PreferenceVector& prefs,
                                      EfeWeights weights, std::size_t max_length = SIZE_MAX);

// softmax(-gamma * total), shifted by the minimum total for stability.
Categorical policy_posterior(std::span<const EFEDecomposition> efes, double gamma);

}  // namespace enact

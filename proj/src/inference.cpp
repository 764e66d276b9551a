#include "enact/inference.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "enact/error.hpp"

namespace enact {

Precision Precision::clamped(PrecisionBounds gamma_bounds, PrecisionBounds zeta_bounds) const {
    return {std::clamp(gamma, gamma_bounds.min, gamma_bounds.max), std::clamp(zeta, zeta_bounds.min, zeta_bounds.max)};
}

Categorical bayes_update(const Categorical& prior, std::span<const double> likelihoods, double zeta) {
    if (likelihoods.size() != prior.size()) throw ValidationError("bayes_update: likelihood size mismatch");
    if (!(zeta > 0.0)) throw ValidationError("bayes_update: zeta must be positive");
    std::vector<double> w(prior.size());
    double total = 0.0;
    for (std::size_t i = 0; i < w.size(); ++i) {
        const double l = likelihoods[i];
        if (!(l >= 0.0) || !std::isfinite(l)) throw ValidationError("bayes_update: likelihoods must be non-negative");
        const double tempered = (zeta == 1.0 || l == 0.0) ? l : std::pow(l, zeta);
        w[i] = prior[i] * tempered;
        total += w[i];
    }
    if (!(total > kProbabilityFloor))
        throw ContradictionError("bayes_update: observation has zero probability under the belief");
    return Categorical::from_weights(std::move(w));
}

namespace {

std::vector<double> placement_row(const CandidateSpace& space, const TypeChunk& t) {
    std::vector<double> row(space.size());
    for (OrderingIndex k = 0; k < space.size(); ++k) row[k] = placement_likelihood(space.ordering(k), t.chunk, t.slot);
    return row;
}

// Appends the branch for the given per-ordering observation likelihoods, if reachable.
void push_branch(std::vector<PredictedOutcome>& out, const Categorical& belief, std::span<const double> lik) {
    double p = 0.0;
    for (std::size_t k = 0; k < belief.size(); ++k) p += belief[k] * lik[k];
    if (p <= kProbabilityFloor) return;
    out.push_back({p, bayes_update(belief, lik)});
}

void accumulate(const Categorical& belief, std::span<const Action> policy, const GenerativeModel& model,
                const PreferenceVector& prefs, double weight, double& epistemic, double& pragmatic) {
    if (policy.empty() || weight <= 0.0) return;
    const Action& a = policy.front();
    const auto outcomes = predict_outcomes(belief, a, model);
    double expected_h = 0.0;
    for (const auto& o : outcomes) expected_h += o.probability * shannon_entropy(o.posterior);
    epistemic += weight * std::max(0.0, shannon_entropy(belief) - expected_h);
    pragmatic += weight * pragmatic_value(belief, a, model, prefs);
    for (const auto& o : outcomes)
        accumulate(o.posterior, policy.subspan(1), model, prefs, weight * o.probability, epistemic, pragmatic);
}

}  // namespace

std::vector<PredictedOutcome> predict_outcomes(const Categorical& belief, const Action& action,
                                               const GenerativeModel& model) {
    if (belief.size() != model.space.size()) throw ValidationError("belief does not match the candidate space");
    std::vector<PredictedOutcome> out;
    if (const auto* read = std::get_if<FixateSource>(&action)) {
        for (OrderingIndex cue = 0; cue < model.space.size(); ++cue) {
            const auto lik = model.reading.cue_likelihoods(read->chunk, cue);
            push_branch(out, belief, lik);
        }
    } else if (const auto* type = std::get_if<TypeChunk>(&action)) {
        auto fits = placement_row(model.space, *type);
        push_branch(out, belief, fits);
        for (double& f : fits) f = 1.0 - f;
        push_branch(out, belief, fits);
    } else {
        out.push_back({1.0, belief});
    }
    return out;
}

double expected_information_gain(const Categorical& belief, const Action& action, const GenerativeModel& model) {
    double expected_h = 0.0;
    for (const auto& o : predict_outcomes(belief, action, model)) expected_h += o.probability * shannon_entropy(o.posterior);
    // Concavity makes this non-negative up to rounding.
    return std::max(0.0, shannon_entropy(belief) - expected_h);
}

double pragmatic_value(const Categorical& belief, const Action& action, const GenerativeModel& model,
                       const PreferenceVector& prefs) {
    switch (kind_of(action)) {
        case ActionKind::type_chunk: {
            const auto& t = std::get<TypeChunk>(action);
            double v = 0.0;
            for (OrderingIndex k = 0; k < model.space.size(); ++k) {
                const bool fits = model.space.ordering(k).places(t.chunk, t.slot);
                v += belief[k] * (fits ? prefs.progress_bonus + prefs.log_preference(k) : prefs.inconsistency_penalty);
            }
            return v;
        }
        case ActionKind::fixate_source:
        case ActionKind::fixate_target: return -prefs.read_cost;
        case ActionKind::pause: return -prefs.pause_cost;
        case ActionKind::consult: return -prefs.consult_cost;
        case ActionKind::delete_slot: return 0.0;
    }
    return 0.0;
}

EFEDecomposition expected_free_energy(const Categorical& belief, std::span<const Action> policy,
                                      const GenerativeModel& model, const PreferenceVector& prefs,
                                      EfeWeights weights, std::size_t max_length) {
    if (policy.empty()) throw std::invalid_argument("expected_free_energy: empty policy");
    if (policy.size() > max_length) throw std::invalid_argument("expected_free_energy: policy longer than horizon");
    EFEDecomposition d;
    d.weights = weights;
    accumulate(belief, policy, model, prefs, 1.0, d.epistemic, d.pragmatic);
    d.total = -weights.epistemic * d.epistemic - weights.pragmatic * d.pragmatic;
    return d;
}

Categorical policy_posterior(std::span<const EFEDecomposition> efes, double gamma) {
    if (efes.empty()) throw ValidationError("policy_posterior: no policies");
    if (gamma < 0.0 || !std::isfinite(gamma)) throw ValidationError("policy_posterior: gamma must be >= 0");
    double lo = efes.front().total;
    for (const auto& e : efes) {
        if (!std::isfinite(e.total)) throw ValidationError("policy_posterior: non-finite EFE total");
        lo = std::min(lo, e.total);
    }
    std::vector<double> w(efes.size());
    for (std::size_t i = 0; i < efes.size(); ++i) w[i] = std::exp(-gamma * (efes[i].total - lo));
    return Categorical::from_weights(std::move(w));
}

}  // namespace enact

#include <doctest.h>

#include <cmath>
#include <stdexcept>

#include "enact/error.hpp"
#include "enact/inference.hpp"
#include "fixtures.hpp"
#include "oracles.hpp"

using namespace enact;

namespace {

std::vector<double> placement_row(const CandidateSpace& space, ChunkId c, Slot s) {
    std::vector<double> row;
    for (const auto& o : space.orderings()) row.push_back(placement_likelihood(o, c, s));
    return row;
}

std::vector<double> as_vector(const Categorical& c) { return {c.probs().begin(), c.probs().end()}; }

}  // namespace

TEST_CASE("placing chunk one in slot one leaves the four orderings that start with it") {
    auto space = fixtures::six_space();
    const auto post = bayes_update(space->prior(), placement_row(*space, 1, 1));
    const std::vector<double> expected = {0.25, 0, 0.25, 0.25, 0.25, 0};
    for (std::size_t k = 0; k < 6; ++k) CHECK(std::abs(post[k] - expected[k]) < 1e-12);
    CHECK(std::abs(shannon_entropy(post) - 2.0) < 1e-12);
}

TEST_CASE("placing chunk four in slot one pins the fronted ordering") {
    auto space = fixtures::six_space();
    const auto post = bayes_update(space->prior(), placement_row(*space, 4, 1));
    CHECK(std::abs(post[5] - 1.0) < 1e-12);
    CHECK(shannon_entropy(post) == 0.0);
}

TEST_CASE("uninformative likelihood leaves the prior unchanged") {
    const auto prior = Categorical::from_weights({1, 2, 3});
    const std::vector<double> ones = {1, 1, 1};
    const auto post = bayes_update(prior, ones);
    for (std::size_t k = 0; k < 3; ++k) CHECK(post[k] == doctest::Approx(prior[k]).epsilon(1e-14));
}

TEST_CASE("impossible observation is a contradiction; bad input is a validation error") {
    const auto prior = Categorical::point_mass(3, 0);
    const std::vector<double> lik = {0, 1, 1};
    CHECK_THROWS_AS(bayes_update(prior, lik), ContradictionError);
    const std::vector<double> short_lik = {1, 1};
    CHECK_THROWS_AS(bayes_update(prior, short_lik), ValidationError);
    const std::vector<double> negative = {1, -1, 1};
    CHECK_THROWS_AS(bayes_update(Categorical::uniform(3), negative), ValidationError);
}

TEST_CASE("zeta tempers the likelihood as an exponent") {
    const auto prior = Categorical::uniform(2);
    const std::vector<double> lik = {0.8, 0.2};
    const auto sharp = bayes_update(prior, lik, 2.0);
    CHECK(sharp[0] == doctest::Approx(0.64 / 0.68));
    const auto flat = bayes_update(prior, lik, 0.5);
    CHECK(flat[0] == doctest::Approx(std::sqrt(0.8) / (std::sqrt(0.8) + std::sqrt(0.2))));
}

TEST_CASE("deterministic placement from the uniform prior never increases entropy") {
    auto space = fixtures::six_space();
    // Every chain of consistent placements along every ordering.
    for (std::size_t truth = 0; truth < 6; ++truth) {
        Categorical belief = space->prior();
        for (Slot s = 1; s <= 5; ++s) {
            const double before = shannon_entropy(belief);
            belief = bayes_update(belief, placement_row(*space, space->ordering(truth).chunk_at(s), s));
            CHECK(shannon_entropy(belief) <= before + 1e-12);
        }
        CHECK(shannon_entropy(belief) == 0.0);
    }
}

TEST_CASE("deterministic placement never increases expected entropy") {
    auto space = fixtures::six_space();
    auto reading = ReadingEvidenceModel::with_defaults(*space);
    GenerativeModel model{*space, reading};
    const auto belief = Categorical::from_weights({0.7, 0.1, 0.05, 0.05, 0.05, 0.05});
    for (ChunkId c : {0, 1, 2, 3, 4})
        for (Slot s = 1; s <= 5; ++s) {
            double expected = 0.0;
            for (const auto& o : predict_outcomes(belief, TypeChunk{c, s}, model))
                expected += o.probability * shannon_entropy(o.posterior);
            CHECK(expected <= shannon_entropy(belief) + 1e-12);
        }
}

TEST_CASE("an informative read lowers expected posterior entropy below the prior") {
    auto space = fixtures::six_space();
    for (double r : {0.6, 0.8, 0.95}) {
        ReadingEvidenceModel reading(6, {{1, r}, {2, r}, {3, r}, {4, r}, {0, 0.5}});
        GenerativeModel model{*space, reading};
        for (ChunkId c : {1, 2, 3, 4}) CHECK(expected_information_gain(space->prior(), FixateSource{c}, model) > 1e-6);
        CHECK(expected_information_gain(space->prior(), FixateSource{0}, model) == doctest::Approx(0.0).epsilon(1e-12));
    }
}

TEST_CASE("expected information gain examples") {
    auto space = fixtures::six_space();
    auto reading = ReadingEvidenceModel::with_defaults(*space);
    GenerativeModel model{*space, reading};
    const auto point = Categorical::point_mass(6, 3);
    CHECK(expected_information_gain(point, FixateSource{1}, model) == 0.0);
    CHECK(expected_information_gain(point, TypeChunk{4, 3}, model) == 0.0);
    // Type four in slot four (where three of six orderings put it): a fair coin.
    CHECK(expected_information_gain(space->prior(), TypeChunk{4, 4}, model) == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(expected_information_gain(space->prior(), TypeChunk{4, 1}, model) ==
          doctest::Approx(binary_entropy(1.0 / 6.0)).epsilon(1e-12));
    ReadingEvidenceModel flat(6, {{1, 0.5}});
    GenerativeModel flat_model{*space, flat};
    CHECK(expected_information_gain(space->prior(), FixateSource{1}, flat_model) == 0.0);
    CHECK(expected_information_gain(space->prior(), Pause{}, model) == 0.0);
}

TEST_CASE("information gain is non-negative and matches the brute-force oracle for single actions") {
    auto space = fixtures::six_space();
    auto reading = ReadingEvidenceModel::with_defaults(*space);
    GenerativeModel model{*space, reading};
    oracle::Channel ch{*space, reading};
    const auto belief = Categorical::from_weights({0.4, 0.05, 0.1, 0.3, 0.05, 0.1});
    for (ChunkId c : {0, 1, 2, 3, 4}) {
        std::vector<Action> acts = {FixateSource{c}};
        for (Slot s = 1; s <= 5; ++s) acts.push_back(TypeChunk{c, s});
        for (const auto& a : acts) {
            const double eig = expected_information_gain(belief, a, model);
            CHECK(eig >= 0.0);
            const auto o = oracle::brute_force_efe(as_vector(belief), {a}, ch, 1, -2, 0.05, 0.1);
            CHECK(std::abs(eig - o.epistemic) < 1e-9);
        }
    }
}

TEST_CASE("pragmatic value examples") {
    auto space = fixtures::six_space();
    auto reading = ReadingEvidenceModel::with_defaults(*space);
    GenerativeModel model{*space, reading};
    PreferenceVector prefs;
    CHECK(pragmatic_value(Categorical::point_mass(6, 3), TypeChunk{4, 3}, model, prefs) == prefs.progress_bonus);
    CHECK(pragmatic_value(space->prior(), Pause{}, model, prefs) == -prefs.pause_cost);
    CHECK(pragmatic_value(space->prior(), FixateSource{1}, model, prefs) == -prefs.read_cost);
    const auto two = Categorical::from_probs({0.5, 0, 0, 0, 0, 0.5});
    CHECK(pragmatic_value(two, TypeChunk{1, 1}, model, prefs) ==
          doctest::Approx(0.5 * prefs.progress_bonus + 0.5 * prefs.inconsistency_penalty));
    PreferenceVector liked = prefs;
    liked.log_pref = {0, 0, 0, 2.0, 0, 0};
    CHECK(pragmatic_value(Categorical::point_mass(6, 3), TypeChunk{4, 3}, model, liked) ==
          doctest::Approx(prefs.progress_bonus + 2.0));
}

TEST_CASE("expected free energy composes the one-step terms") {
    auto space = fixtures::six_space();
    auto reading = ReadingEvidenceModel::with_defaults(*space);
    GenerativeModel model{*space, reading};
    PreferenceVector prefs;
    const EfeWeights w{2.0, 3.0};
    for (const Action& a : std::vector<Action>{FixateSource{2}, TypeChunk{1, 1}, Pause{}}) {
        const std::vector<Action> pol = {a};
        const auto d = expected_free_energy(space->prior(), pol, model, prefs, w);
        CHECK(std::abs(d.epistemic - expected_information_gain(space->prior(), a, model)) < 1e-12);
        CHECK(std::abs(d.pragmatic - pragmatic_value(space->prior(), a, model, prefs)) < 1e-12);
        CHECK(std::abs(d.total - (-w.epistemic * d.epistemic - w.pragmatic * d.pragmatic)) < 1e-12);
        CHECK(d.weights.epistemic == 2.0);
    }
}

TEST_CASE("two-step read-then-type matches exhaustive enumeration") {
    auto space = fixtures::six_space();
    auto reading = ReadingEvidenceModel::with_defaults(*space);
    GenerativeModel model{*space, reading};
    oracle::Channel ch{*space, reading};
    PreferenceVector prefs;
    const std::vector<Action> pol = {FixateSource{4}, TypeChunk{4, 4}};
    const auto d = expected_free_energy(space->prior(), pol, model, prefs, {1.0, 1.0});
    const auto o = oracle::brute_force_efe(as_vector(space->prior()), pol, ch, prefs.progress_bonus,
                                           prefs.inconsistency_penalty, prefs.read_cost, prefs.pause_cost);
    CHECK(std::abs(d.epistemic - o.epistemic) < 1e-9);
    CHECK(std::abs(d.pragmatic - o.pragmatic) < 1e-9);
}

TEST_CASE("zero epistemic weight leaves only the pragmatic term") {
    auto space = fixtures::six_space();
    auto reading = ReadingEvidenceModel::with_defaults(*space);
    GenerativeModel model{*space, reading};
    const std::vector<Action> pol = {FixateSource{1}, TypeChunk{1, 1}};
    const auto d = expected_free_energy(space->prior(), pol, model, {}, {0.0, 1.0});
    CHECK(d.total == doctest::Approx(-d.pragmatic).epsilon(1e-14));
}

TEST_CASE("empty or over-long policies are rejected") {
    auto space = fixtures::six_space();
    auto reading = ReadingEvidenceModel::with_defaults(*space);
    GenerativeModel model{*space, reading};
    CHECK_THROWS_AS(expected_free_energy(space->prior(), std::vector<Action>{}, model, {}, {}), std::invalid_argument);
    const std::vector<Action> pol = {Pause{}, Pause{}};
    CHECK_THROWS_AS(expected_free_energy(space->prior(), pol, model, {}, {}, 1), std::invalid_argument);
}

TEST_CASE("policy posterior examples") {
    auto make = [](std::vector<double> totals) {
        std::vector<EFEDecomposition> v;
        for (double t : totals) v.push_back({0, 0, t, {}});
        return v;
    };
    const auto q = policy_posterior(make({1.0, 2.0}), 1.0);
    const auto o = oracle::softmax_neg({1.0, 2.0}, 1.0);
    CHECK(std::abs(q[0] - 0.731059) < 1e-6);
    CHECK(std::abs(q[1] - 0.268941) < 1e-6);
    CHECK(std::abs(q[0] - o[0]) < 1e-12);
    const auto zero = policy_posterior(make({1.0, 5.0, -3.0}), 0.0);
    for (std::size_t i = 0; i < 3; ++i) CHECK(zero[i] == doctest::Approx(1.0 / 3.0));
    const auto equal = policy_posterior(make({4.0, 4.0}), 50.0);
    CHECK(equal[0] == doctest::Approx(0.5));
    CHECK_THROWS_AS(policy_posterior(make({}), 1.0), ValidationError);
    CHECK_THROWS_AS(policy_posterior(make({1.0}), -1.0), ValidationError);
}

TEST_CASE("policy posterior is invariant to a common shift and stable for huge gamma") {
    auto make = [](std::vector<double> totals) {
        std::vector<EFEDecomposition> v;
        for (double t : totals) v.push_back({0, 0, t, {}});
        return v;
    };
    const auto a = policy_posterior(make({0.3, -1.2, 2.5}), 3.0);
    const auto b = policy_posterior(make({1000.3, 998.8, 1002.5}), 3.0);
    for (std::size_t i = 0; i < 3; ++i) CHECK(std::abs(a[i] - b[i]) < 1e-9);
    const auto sharp = policy_posterior(make({0.0, 1.0}), 1e6);
    CHECK(sharp[0] == 1.0);
}

TEST_CASE("precision clamps to its bounds") {
    const Precision p{100.0, 0.001};
    const auto c = p.clamped({0.1, 8.0}, {0.25, 4.0});
    CHECK(c.gamma == 8.0);
    CHECK(c.zeta == 0.25);
}

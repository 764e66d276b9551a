#include <doctest.h>

#include <set>

#include "enact/environment.hpp"
#include "enact/error.hpp"
#include "fixtures.hpp"

using namespace enact;

namespace {

bool permutation_invariant(const ExternalState& s) {
    std::set<ChunkId> seen;
    for (const auto& c : s.buffer)
        if (c && !seen.insert(*c).second) return false;
    return true;
}

}  // namespace

TEST_CASE("typing fills a slot and deleting clears it") {
    auto space = fixtures::six_space();
    auto reading = ReadingEvidenceModel::with_defaults(*space);
    Rng rng(1);
    auto s0 = ExternalState::initial(space, 0);
    auto t1 = apply_action(s0, TypeChunk{1, 1}, reading, rng);
    CHECK(t1.state.at(1) == 1);
    CHECK(std::get<PlacementFeedback>(t1.observation) == PlacementFeedback{1, 1});
    CHECK_FALSE(s0.at(1).has_value());  // input untouched
    auto t2 = apply_action(t1.state, Delete{1}, reading, rng);
    CHECK_FALSE(t2.state.at(1).has_value());
    CHECK(std::get<PlacementFeedback>(t2.observation) == PlacementFeedback{1, std::nullopt});
}

TEST_CASE("occupied slots and placed chunks are rejected") {
    auto space = fixtures::six_space();
    auto reading = ReadingEvidenceModel::with_defaults(*space);
    Rng rng(1);
    auto s = apply_action(ExternalState::initial(space, 0), TypeChunk{1, 1}, reading, rng).state;
    CHECK_THROWS_AS(apply_action(s, TypeChunk{2, 1}, reading, rng), OccupancyError);
    CHECK_THROWS_AS(apply_action(s, TypeChunk{1, 2}, reading, rng), OccupancyError);
    CHECK_THROWS_AS(apply_action(s, TypeChunk{9, 2}, reading, rng), LookupError);
    CHECK_THROWS_AS(apply_action(s, Delete{7}, reading, rng), LookupError);
}

TEST_CASE("a noiseless read reveals the latent ordering") {
    auto space = fixtures::six_space();
    ReadingEvidenceModel reading(6, {{1, 1.0}, {2, 1.0}, {3, 1.0}, {4, 1.0}, {0, 0.5}});
    Rng rng(42);
    const auto s = ExternalState::initial(space, 3);
    for (int i = 0; i < 20; ++i) {
        const auto t = apply_action(s, FixateSource{3}, reading, rng);
        CHECK(std::get<OrderingCue>(t.observation) == OrderingCue{3, 3});
    }
}

TEST_CASE("cue drivers override the latent ordering per chunk") {
    auto space = fixtures::six_space();
    ReadingEvidenceModel reading(6, {{1, 1.0}, {2, 1.0}, {3, 1.0}, {4, 1.0}, {0, 0.5}});
    Rng rng(5);
    const auto s = ExternalState::initial(space, 0, {{4, 5}});
    CHECK(std::get<OrderingCue>(apply_action(s, FixateSource{4}, reading, rng).observation).cue == 5);
    CHECK(std::get<OrderingCue>(apply_action(s, FixateSource{1}, reading, rng).observation).cue == 0);
    CHECK_THROWS_AS(ExternalState::initial(space, 0, {{4, 9}}), LookupError);
    CHECK_THROWS_AS(ExternalState::initial(space, 6), LookupError);
}

TEST_CASE("noisy cues follow the channel frequencies") {
    auto space = fixtures::six_space();
    auto reading = ReadingEvidenceModel::with_defaults(*space);
    Rng rng(11);
    const auto s = ExternalState::initial(space, 2);
    int hits = 0;
    const int n = 20000;
    for (int i = 0; i < n; ++i) hits += std::get<OrderingCue>(apply_action(s, FixateSource{1}, reading, rng).observation).cue == 2;
    CHECK(static_cast<double>(hits) / n == doctest::Approx(0.8).epsilon(0.02));
}

TEST_CASE("pause, consult and target glimpses leave the buffer alone") {
    auto space = fixtures::six_space();
    auto reading = ReadingEvidenceModel::with_defaults(*space);
    Rng rng(1);
    auto s = apply_action(ExternalState::initial(space, 0), TypeChunk{4, 3}, reading, rng).state;
    CHECK(std::holds_alternative<NullObservation>(apply_action(s, Pause{}, reading, rng).observation));
    CHECK(std::holds_alternative<NullObservation>(apply_action(s, Consult{2}, reading, rng).observation));
    const auto g = apply_action(s, FixateTarget{3}, reading, rng);
    CHECK(std::get<TargetGlimpse>(g.observation) == TargetGlimpse{3, 4});
    CHECK(g.state.buffer == s.buffer);
    CHECK(g.state.latent == s.latent);
}

TEST_CASE("completion and rendering") {
    auto space = fixtures::six_space();
    auto reading = ReadingEvidenceModel::with_defaults(*space);
    Rng rng(1);
    auto s = ExternalState::initial(space, 0);
    CHECK_FALSE(is_complete(s));
    CHECK(render_target(s) == "□□□□□");
    s = apply_action(s, TypeChunk{1, 1}, reading, rng).state;
    CHECK(render_target(s) == "その結果□□□□");
    const auto& row = space->ordering(0).slots;
    for (Slot slot = 2; slot <= 4; ++slot) s = apply_action(s, TypeChunk{row[slot - 1], slot}, reading, rng).state;
    CHECK_FALSE(is_complete(s));
    s = apply_action(s, TypeChunk{row[4], 5}, reading, rng).state;
    CHECK(is_complete(s));
    CHECK(render_target(s) == fixtures::kLinearRendering);
    CHECK(compose_ordering(*space, 0) == fixtures::kLinearRendering);
    CHECK(compose_ordering(*space, 3) == fixtures::kReverseRendering);
}

TEST_CASE("buffer stays a partial permutation through random delete/retype sequences") {
    auto space = fixtures::six_space();
    auto reading = ReadingEvidenceModel::with_defaults(*space);
    Rng rng(99);
    auto s = ExternalState::initial(space, 1);
    for (int i = 0; i < 2000; ++i) {
        const Slot slot = static_cast<Slot>(rng() % 5) + 1;
        const ChunkId chunk = static_cast<ChunkId>(rng() % 5);
        Action a = (rng() % 3 == 0) ? Action{Delete{slot}} : Action{TypeChunk{chunk, slot}};
        try {
            s = apply_action(s, a, reading, rng).state;
        } catch (const OccupancyError&) {
        }
        REQUIRE(permutation_invariant(s));
        CHECK(s.latent == 1);
        CHECK(s.table().size() == 5);
    }
}

TEST_CASE("sampling helpers are deterministic per seed") {
    Rng a(7), b(7);
    for (int i = 0; i < 100; ++i) CHECK(uniform01(a) == uniform01(b));
    Rng c(3);
    for (int i = 0; i < 1000; ++i) {
        const double u = uniform01(c);
        CHECK(u >= 0.0);
        CHECK(u < 1.0);
    }
    const std::vector<double> p = {0.0, 1.0, 0.0};
    for (int i = 0; i < 50; ++i) CHECK(sample_index(p, c) == 1);
}

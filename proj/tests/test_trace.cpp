#include <doctest.h>

#include <algorithm>

#include "enact/agent.hpp"
#include "enact/error.hpp"
#include "enact/trace.hpp"
#include "fixtures.hpp"

using namespace enact;

namespace {

Trace make_trace(const std::vector<Action>& actions, double step_ms = 100.0) {
    Trace t;
    double clock = 0.0;
    for (const auto& a : actions) {
        ProcessEvent e;
        e.t_start = clock;
        e.t_end = clock + step_ms;
        e.action = a;
        clock = e.t_end;
        t.events.push_back(e);
    }
    return t;
}

std::string letters(const std::vector<Segment>& segs) {
    std::string s;
    for (const auto& g : segs) s += state_letter(g.state);
    return s;
}

std::vector<std::string> labels(const std::vector<PolicyCycle>& cycles) {
    std::vector<std::string> out;
    for (const auto& c : cycles) out.push_back(c.label);
    return out;
}

std::vector<OhrfState> states(const std::string& s) {
    std::vector<OhrfState> out;
    for (char c : s) out.push_back(state_from_letter(c));
    return out;
}

std::size_t count(const std::string& hay, const std::string& needle) {
    std::size_t n = 0;
    for (auto pos = hay.find(needle); pos != std::string::npos; pos = hay.find(needle, pos + 1)) ++n;
    return n;
}

}  // namespace

TEST_CASE("segmentation of simple traces") {
    CHECK(segment_ohrf(Trace{}).empty());
    CHECK(letters(segment_ohrf(make_trace({FixateSource{1}, FixateSource{2}, FixateSource{3}}))) == "O");
    const auto of = segment_ohrf(make_trace({FixateSource{1}, FixateSource{2}, FixateSource{3}, FixateSource{4},
                                             TypeChunk{1, 1}, TypeChunk{0, 2}, TypeChunk{2, 3}, TypeChunk{4, 4},
                                             TypeChunk{3, 5}}));
    CHECK(letters(of) == "OF");
    CHECK(of[0].members == std::vector<std::size_t>{0, 1, 2, 3});
    CHECK(of[1].t_start == 400.0);
    CHECK(of[1].t_end == 900.0);
}

TEST_CASE("pauses are hesitation, deletions and retyping are revision") {
    const auto segs = segment_ohrf(make_trace({FixateSource{1}, TypeChunk{1, 1}, Pause{}, TypeChunk{0, 2},
                                               Delete{1}, TypeChunk{4, 1}, FixateSource{2}, TypeChunk{2, 3}}));
    CHECK(letters(segs) == "OFHFROF");
}

TEST_CASE("target fixations: long keystroke gap is hesitation, next to a deletion is revision") {
    Trace t = make_trace({FixateSource{1}, TypeChunk{1, 1}, FixateTarget{1}, TypeChunk{0, 2}});
    t.events[3].t_start += 2000.0;
    t.events[3].t_end += 2000.0;
    CHECK(letters(segment_ohrf(t)) == "OFHF");
    CHECK(letters(segment_ohrf(t, {5000.0})) == "OF");
    const auto near_delete = make_trace({FixateSource{1}, TypeChunk{1, 1}, FixateTarget{1}, Delete{1}});
    CHECK(letters(segment_ohrf(near_delete)) == "OFR");
    const auto in_flow = make_trace({FixateSource{1}, TypeChunk{1, 1}, FixateTarget{1}, TypeChunk{0, 2}});
    CHECK(letters(segment_ohrf(in_flow)) == "OF");
}

TEST_CASE("policy grouping reproduces the published cycle captions") {
    CHECK(labels(group_states(states("OFOFOFOFROFR"))) == std::vector<std::string>{"OF", "OF", "OF", "OFR", "OFR"});
    CHECK(labels(group_states(states("OFOFHFOF"))) == std::vector<std::string>{"OF", "OFHF", "OF"});
    CHECK(labels(group_states(states("O"))) == std::vector<std::string>{"O"});
    CHECK(group_states({}).empty());
}

TEST_CASE("a sequence without a leading orientation gets an implicit one") {
    const auto cycles = group_states(states("FROF"));
    REQUIRE(cycles.size() == 2);
    CHECK(cycles[0].label == "OFR");
    CHECK(cycles[0].implicit_orientation);
    CHECK_FALSE(cycles[1].implicit_orientation);
    CHECK(cycles[0].segments == std::vector<std::size_t>{0, 1});
}

TEST_CASE("segments partition simulated traces and cycles are well formed") {
    auto space = fixtures::six_space();
    auto reading = ReadingEvidenceModel::with_defaults(*space);
    for (auto cfg : {AgentConfig::head_starter(), AgentConfig::large_context_planner()})
        for (std::uint64_t seed = 0; seed < 20; ++seed) {
            const auto trace = run_episode(cfg, space, reading, {seed % 6, {{1, (seed + 1) % 6}}}, seed, 60);
            const auto segs = segment_ohrf(trace);
            std::size_t next = 0;
            for (const auto& s : segs)
                for (std::size_t m : s.members) CHECK(m == next++);
            CHECK(next == trace.events.size());
            for (std::size_t i = 1; i < segs.size(); ++i) CHECK(segs[i].state != segs[i - 1].state);
            const auto cycles = group_policies(segs);
            std::size_t seg_next = 0;
            for (const auto& c : cycles) {
                CHECK(c.label.front() == 'O');
                for (std::size_t i = 1; i < c.label.size(); ++i) CHECK(c.label[i] != c.label[i - 1]);
                for (std::size_t s : c.segments) CHECK(s == seg_next++);
            }
            CHECK(seg_next == segs.size());
            CHECK(labels(group_policies(segment_ohrf(trace))) == labels(cycles));
        }
}

TEST_CASE("a head starter misled by early cues shows a revision segment") {
    auto space = fixtures::six_space();
    ReadingEvidenceModel reading(6, {{1, 0.95}, {2, 0.95}, {3, 0.95}, {4, 0.95}, {0, 0.5}});
    const auto trace = run_episode(AgentConfig::head_starter(), space, reading, {5, {{1, 0}}}, 7, 60);
    const auto segs = segment_ohrf(trace);
    CHECK(std::any_of(segs.begin(), segs.end(), [](const Segment& s) { return s.state == OhrfState::R; }));
}

TEST_CASE("entropy trajectories") {
    auto space = fixtures::six_space();
    ReadingEvidenceModel exact(6, {{1, 1.0}, {2, 1.0}, {3, 1.0}, {4, 1.0}, {0, 0.5}});
    for (OrderingIndex latent = 0; latent < 6; ++latent) {
        const auto trace = run_episode(AgentConfig::large_context_planner(), space, exact, {latent, {}}, latent, 60);
        const auto traj = entropy_trajectory(trace);
        REQUIRE(traj.size() == trace.events.size() + 1);
        for (std::size_t i = 1; i < traj.size(); ++i) CHECK(traj[i].second <= traj[i - 1].second + 1e-12);
        CHECK(traj.back().second == 0.0);
        CHECK(trace.final_target == compose_ordering(*space, latent));
    }

    ReadingEvidenceModel flat(6, {{1, 0.5}, {2, 0.5}, {3, 0.5}, {4, 0.5}, {0, 0.5}});
    const auto one = run_episode(AgentConfig::large_context_planner(), space, flat, {0, {}}, 1, 1);
    REQUIRE(std::holds_alternative<FixateSource>(one.events.front().action));
    const auto traj = entropy_trajectory(one);
    for (const auto& [t, h] : traj) CHECK(h == doctest::Approx(traj.front().second).epsilon(1e-12));

    CHECK_THROWS_AS(entropy_trajectory(make_trace({FixateSource{1}})), UnsupportedFieldError);
}

TEST_CASE("summary metrics") {
    const auto empty = summarize(Trace{}, {}, {});
    CHECK(empty.first_keystroke_latency_ms == 0.0);
    CHECK(empty.total_time_ms == 0.0);
    CHECK(empty.revision_count == 0);
    CHECK(empty.state_counts.at('O') == 0);

    const auto t = make_trace({FixateSource{1}, FixateSource{2}, TypeChunk{1, 1}, Pause{}, TypeChunk{0, 2}, Delete{2},
                               TypeChunk{2, 2}});
    const auto segs = segment_ohrf(t);
    const auto s = summarize(t, segs, group_policies(segs));
    CHECK(s.first_keystroke_latency_ms == 200.0);
    CHECK(s.initial_orientation_ms == 200.0);
    CHECK(s.total_time_ms == 700.0);
    CHECK(s.revision_count == 1);
    CHECK(s.hesitation_count == 1);
    CHECK(s.epistemic_action_count == 3);
    CHECK(s.cycle_labels.at("OFHFR") == 1);
}

TEST_CASE("the planner starts typing later than the head starter on paired seeds") {
    auto space = fixtures::six_space();
    auto reading = ReadingEvidenceModel::with_defaults(*space);
    for (std::uint64_t seed = 0; seed < 10; ++seed) {
        const EpisodeSetup setup{seed % 6, {}};
        const auto hs = run_episode(AgentConfig::head_starter(), space, reading, setup, seed, 60);
        const auto pl = run_episode(AgentConfig::large_context_planner(), space, reading, setup, seed, 60);
        const auto a = summarize(hs, segment_ohrf(hs), {});
        const auto b = summarize(pl, segment_ohrf(pl), {});
        CHECK(b.first_keystroke_latency_ms > a.first_keystroke_latency_ms);
    }
}

TEST_CASE("tsv export layout") {
    auto space = fixtures::six_space();
    auto reading = ReadingEvidenceModel::with_defaults(*space);
    const auto trace = run_episode(AgentConfig::head_starter(), space, reading, {0, {}}, 7, 60);
    const auto segs = segment_ohrf(trace);
    const auto cycles = group_policies(segs);
    const auto tsv = export_progression(trace, segs, cycles, ExportFormat::tsv);
    CHECK(tsv.substr(0, tsv.find('\n')) == "time_ms\tevent_kind\tchunk_or_slot\tohrf_state\tcycle_index\tentropy_bits\tgamma");
    CHECK(count(tsv, "\n") == trace.events.size() + 1);
    const auto first_type = tsv.find("\ttype\t");
    const auto last_read = tsv.rfind("\tfixate_source\t");
    REQUIRE(first_type != std::string::npos);
    REQUIRE(last_read != std::string::npos);
    CHECK(first_type < last_read);
    CHECK_THROWS_AS(parse_export_format("png"), ValidationError);
}

TEST_CASE("svg export is structurally sound") {
    auto space = fixtures::six_space();
    auto reading = ReadingEvidenceModel::with_defaults(*space);
    const auto trace = run_episode(AgentConfig::head_starter(), space, reading, {5, {{1, 0}}}, 3, 60);
    const auto segs = segment_ohrf(trace);
    const auto svg = export_progression(trace, segs, group_policies(segs), ExportFormat::svg);
    CHECK(svg.rfind("<?xml", 0) == 0);
    CHECK(svg.find("<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\"") != std::string::npos);
    CHECK(svg.substr(svg.size() - 7) == "</svg>\n");
    CHECK(count(svg, "class=\"segment-band ") == segs.size());
    CHECK(count(svg, "<g ") == count(svg, "</g>"));
    CHECK(count(svg, "<rect") == count(svg, "</rect>") + count(svg, "/>") - count(svg, "<circle") -
                                      count(svg, "<line"));
}

TEST_CASE("target encoding round-trips every action kind") {
    const std::vector<Action> all = {FixateSource{3}, FixateTarget{2}, TypeChunk{4, 1}, Delete{5}, Pause{1200}, Consult{7}};
    for (const auto& a : all) CHECK(decode_action(kind_name(kind_of(a)), encode_target(a)) == a);
    CHECK(decode_action("pause", "") == Action{Pause{}});
    CHECK_THROWS_AS(decode_action("type", "4"), ValidationError);
    CHECK_THROWS_AS(decode_action("jump", "4"), ValidationError);
}

TEST_CASE("ingestion round-trips exported traces") {
    auto space = fixtures::six_space();
    auto reading = ReadingEvidenceModel::with_defaults(*space);
    const auto trace = run_episode(AgentConfig::head_starter(), space, reading, {5, {{1, 0}}}, 4, 60);
    const auto segs = segment_ohrf(trace);
    const auto tsv = export_progression(trace, segs, group_policies(segs), ExportFormat::tsv);
    const auto back = ingest_tsv(tsv);
    REQUIRE(back.events.size() == trace.events.size());
    for (std::size_t i = 0; i < back.events.size(); ++i) {
        CHECK(back.events[i].action == trace.events[i].action);
        CHECK(back.events[i].t_start == trace.events[i].t_start);
        CHECK_FALSE(back.events[i].belief_entropy.has_value());
    }
    const auto back_segs = segment_ohrf(back);
    REQUIRE(back_segs.size() == segs.size());
    for (std::size_t i = 0; i < segs.size(); ++i) {
        CHECK(back_segs[i].state == segs[i].state);
        CHECK(back_segs[i].members == segs[i].members);
        CHECK(back_segs[i].t_start == segs[i].t_start);
    }
}

TEST_CASE("ingestion edge cases and errors") {
    CHECK(ingest_tsv(std::string(kTsvHeader) + "\n").events.empty());
    CHECK_THROWS_AS(ingest_tsv(""), IngestionError);
    try {
        ingest_tsv("time_ms\tevent_kind\n0\tpause\n");
        FAIL("expected an ingestion error");
    } catch (const IngestionError& e) {
        CHECK(e.row() == 0);
    }
    try {
        ingest_tsv("t\tkind\ttarget\n0\tfixate_source\t1\nabc\ttype\t1@1\n", {"t", "kind", "target"});
        FAIL("expected an ingestion error");
    } catch (const IngestionError& e) {
        CHECK(e.row() == 2);
        CHECK(std::string(e.what()).find("unparseable time") != std::string::npos);
    }
    CHECK_THROWS_AS(ingest_tsv("time_ms\tevent_kind\tchunk_or_slot\n5\ttype\t1@1\n3\ttype\t2@2\n"), IngestionError);
    CHECK_THROWS_AS(ingest_tsv("time_ms\tevent_kind\tchunk_or_slot\n5\tsneeze\t1\n"), IngestionError);
}

TEST_CASE("a hand-written log with one deletion yields a revision segment") {
    const std::string log =
        "ts\taction\twhat\r\n"
        "0\tfixate_source\t1\r\n"
        "200\ttype\t1@1\r\n"
        "700\ttype\t0@2\r\n"
        "900\tdelete\t@2\r\n"
        "1000\ttype\t2@2\r\n"
        "2500\tfixate_source\t4\r\n";
    const auto trace = ingest_tsv(log, {"ts", "action", "what"});
    REQUIRE(trace.events.size() == 6);
    const auto segs = segment_ohrf(trace);
    CHECK(letters(segs) == "OFRO");
    CHECK(labels(group_policies(segs)) == std::vector<std::string>{"OFR", "O"});
}

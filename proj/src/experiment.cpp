#include "enact/experiment.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <numeric>

#include "enact/error.hpp"

namespace enact {

EpisodeResult run_analyzed(const AgentConfig& config, const Task& task, const EpisodeSetup& setup,
                           std::uint64_t seed, std::size_t max_steps, SegmentationThresholds thresholds) {
    EpisodeResult r;
    r.seed = seed;
    r.trace = run_episode(config, task.space, task.reading, setup, seed, max_steps);
    r.segments = segment_ohrf(r.trace, thresholds);
    r.cycles = group_policies(r.segments);
    r.summary = summarize(r.trace, r.segments, r.cycles);
    return r;
}

EpisodeSetup setup_for_seed(const Task& task, std::uint64_t seed, bool rotate_latent) {
    EpisodeSetup s = task.setup;
    if (rotate_latent) s.latent = static_cast<OrderingIndex>(seed % task.space->size());
    return s;
}

const MetricComparison& ComparisonReport::metric(const std::string& name) const {
    for (const auto& m : metrics)
        if (m.name == name) return m;
    throw LookupError("no metric named " + name);
}

ComparisonReport compare_configs(const AgentConfig& a, const AgentConfig& b, const Task& task,
                                 const std::vector<std::uint64_t>& seeds, std::size_t max_steps,
                                 bool rotate_latent) {
    if (seeds.size() < 2) throw ValidationError("compare: at least two seeds required");
    using Getter = std::function<double(const TraceSummary&)>;
    const std::vector<std::pair<std::string, Getter>> getters = {
        {"first_keystroke_latency_ms", [](const TraceSummary& s) { return s.first_keystroke_latency_ms; }},
        {"initial_orientation_ms", [](const TraceSummary& s) { return s.initial_orientation_ms; }},
        {"total_time_ms", [](const TraceSummary& s) { return s.total_time_ms; }},
        {"O_segments", [](const TraceSummary& s) { return static_cast<double>(s.state_counts.at('O')); }},
        {"H_segments", [](const TraceSummary& s) { return static_cast<double>(s.state_counts.at('H')); }},
        {"R_segments", [](const TraceSummary& s) { return static_cast<double>(s.state_counts.at('R')); }},
        {"F_segments", [](const TraceSummary& s) { return static_cast<double>(s.state_counts.at('F')); }},
        {"revisions", [](const TraceSummary& s) { return static_cast<double>(s.revision_count); }},
        {"hesitations", [](const TraceSummary& s) { return static_cast<double>(s.hesitation_count); }},
        {"epistemic_actions", [](const TraceSummary& s) { return static_cast<double>(s.epistemic_action_count); }},
    };

    ComparisonReport report;
    report.pairs = seeds.size();
    for (const auto& [name, _] : getters) report.metrics.push_back({name});
    const double n = static_cast<double>(seeds.size());
    for (std::uint64_t seed : seeds) {
        const EpisodeSetup setup = setup_for_seed(task, seed, rotate_latent);
        const auto ra = run_analyzed(a, task, setup, seed, max_steps);
        const auto rb = run_analyzed(b, task, setup, seed, max_steps);
        report.complete_a += ra.trace.complete ? 1 : 0;
        report.complete_b += rb.trace.complete ? 1 : 0;
        for (std::size_t i = 0; i < getters.size(); ++i) {
            const double va = getters[i].second(ra.summary);
            const double vb = getters[i].second(rb.summary);
            auto& m = report.metrics[i];
            m.mean_a += va / n;
            m.mean_b += vb / n;
            if (va < vb)
                m.a_lower += 1.0 / n;
            else if (vb < va)
                m.b_lower += 1.0 / n;
            else
                m.ties += 1.0 / n;
        }
    }
    return report;
}

std::vector<SweepPoint> gamma_sweep(const AgentConfig& base, const Task& task, const std::vector<double>& gammas,
                                    const std::vector<std::uint64_t>& seeds, std::size_t max_steps,
                                    bool rotate_latent) {
    if (seeds.empty()) throw ValidationError("gamma sweep: at least one seed required");
    std::vector<SweepPoint> out;
    for (double g : gammas) {
        AgentConfig c = base;
        c.affect.gamma_max = g;
        c.sample = true;
        c.validate();
        SweepPoint p{g};
        for (std::uint64_t seed : seeds) {
            const Trace t = run_episode(c, task.space, task.reading, setup_for_seed(task, seed, rotate_latent), seed,
                                        max_steps);
            p.mean_epistemic_actions += static_cast<double>(summarize(t, {}, {}).epistemic_action_count);
            p.complete += t.complete ? 1 : 0;
        }
        p.mean_epistemic_actions /= static_cast<double>(seeds.size());
        out.push_back(p);
    }
    return out;
}

namespace {

std::vector<double> ranks(const std::vector<double>& v) {
    std::vector<std::size_t> idx(v.size());
    std::iota(idx.begin(), idx.end(), 0);
    std::stable_sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) { return v[a] < v[b]; });
    std::vector<double> r(v.size());
    for (std::size_t i = 0; i < idx.size();) {
        std::size_t j = i;
        while (j + 1 < idx.size() && v[idx[j + 1]] == v[idx[i]]) ++j;
        const double avg = (static_cast<double>(i) + static_cast<double>(j)) / 2.0 + 1.0;
        for (std::size_t k = i; k <= j; ++k) r[idx[k]] = avg;
        i = j + 1;
    }
    return r;
}

}  // namespace

double spearman(const std::vector<double>& x, const std::vector<double>& y) {
    if (x.size() != y.size() || x.size() < 2) throw ValidationError("spearman: need two equal-length samples");
    const auto rx = ranks(x);
    const auto ry = ranks(y);
    const double n = static_cast<double>(x.size());
    const double mx = std::accumulate(rx.begin(), rx.end(), 0.0) / n;
    const double my = std::accumulate(ry.begin(), ry.end(), 0.0) / n;
    double sxy = 0.0, sxx = 0.0, syy = 0.0;
    for (std::size_t i = 0; i < rx.size(); ++i) {
        sxy += (rx[i] - mx) * (ry[i] - my);
        sxx += (rx[i] - mx) * (rx[i] - mx);
        syy += (ry[i] - my) * (ry[i] - my);
    }
    if (sxx == 0.0 || syy == 0.0) return 0.0;
    return sxy / std::sqrt(sxx * syy);
}

}  // namespace enact

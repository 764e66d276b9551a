#pragma once

// Seeded batches: single analysed episodes, paired strategy comparisons and
// precision sweeps. Every result is a pure function of its inputs and seeds.

#include <cstdint>
#include <string>
#include <vector>

#include "enact/agent.hpp"
#include "enact/config.hpp"
#include "enact/trace.hpp"

namespace enact {

struct EpisodeResult {
    std::uint64_t seed = 0;
    Trace trace;
    std::vector<Segment> segments;
    std::vector<PolicyCycle> cycles;
    TraceSummary summary;
};

EpisodeResult run_analyzed(const AgentConfig& config, const Task& task, const EpisodeSetup& setup,
                           std::uint64_t seed, std::size_t max_steps, SegmentationThresholds thresholds = {});

// The episode setup used for a seed: the task's own, or with the latent
// ordering rotated through the candidates by seed.
EpisodeSetup setup_for_seed(const Task& task, std::uint64_t seed, bool rotate_latent);

struct MetricComparison {
    std::string name;
    double mean_a = 0.0;
    double mean_b = 0.0;
    double a_lower = 0.0;  // fraction of pairs with a < b
    double b_lower = 0.0;  // fraction of pairs with b < a
    double ties = 0.0;

    // Share of pairs with a < b, counting ties as half; 0.5 for identical sides.
    double a_lower_rate() const { return a_lower + ties / 2.0; }
};

struct ComparisonReport {
    std::size_t pairs = 0;
    std::size_t complete_a = 0;
    std::size_t complete_b = 0;
    std::vector<MetricComparison> metrics;

    const MetricComparison& metric(const std::string& name) const;  // LookupError
};

// Runs both configs on the same seeds and setups. Throws ValidationError for
// fewer than two seeds.
ComparisonReport compare_configs(const AgentConfig& a, const AgentConfig& b, const Task& task,
                                 const std::vector<std::uint64_t>& seeds, std::size_t max_steps,
                                 bool rotate_latent);

struct SweepPoint {
    double gamma_max = 0.0;
    double mean_epistemic_actions = 0.0;
    std::size_t complete = 0;
};

// Mean epistemic-action count per gamma_max. Policies are sampled from the
// posterior so that precision acts on choice rather than only on its argmax.
std::vector<SweepPoint> gamma_sweep(const AgentConfig& base, const Task& task, const std::vector<double>& gammas,
                                    const std::vector<std::uint64_t>& seeds, std::size_t max_steps,
                                    bool rotate_latent);

// Spearman rank correlation with average ranks for ties; 0 when either side
// is constant.
double spearman(const std::vector<double>& x, const std::vector<double>& y);

}  // namespace enact

#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "enact/config.hpp"
#include "enact/error.hpp"
#include "enact/experiment.hpp"
#include "enact/trace.hpp"

namespace {

using namespace enact;
namespace fs = std::filesystem;

constexpr int kExitOk = 0;
constexpr int kExitValidation = 2;
constexpr int kExitIncomplete = 3;
constexpr int kExitIngestion = 4;

std::string fixed(double v, int digits = 6) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.*f", digits, v);
    return buf;
}

void write_file(const fs::path& path, const std::string& content) {
    if (path.has_parent_path()) fs::create_directories(path.parent_path());
    std::ofstream out(path, std::ios::binary);
    if (!out) throw ValidationError("cannot write " + path.string());
    out << content;
}

// "7", "0-99", "1,4,9" or any comma-separated mix of those.
std::vector<std::uint64_t> parse_seeds(const std::string& text) {
    std::vector<std::uint64_t> seeds;
    std::stringstream ss(text);
    std::string item;
    auto number = [&](const std::string& s) -> std::uint64_t {
        try {
            std::size_t used = 0;
            const auto v = std::stoull(s, &used);
            if (used != s.size() || s.front() == '-') throw std::invalid_argument(s);
            return v;
        } catch (const std::exception&) {
            throw ValidationError("bad seed '" + s + "' in '" + text + "'");
        }
    };
    while (std::getline(ss, item, ',')) {
        if (item.empty()) throw ValidationError("empty seed in '" + text + "'");
        const auto dash = item.find('-', 1);
        if (dash == std::string::npos) {
            seeds.push_back(number(item));
            continue;
        }
        const auto lo = number(item.substr(0, dash));
        const auto hi = number(item.substr(dash + 1));
        if (hi < lo) throw ValidationError("descending seed range '" + item + "'");
        for (auto s = lo; s <= hi; ++s) seeds.push_back(s);
    }
    if (seeds.empty()) throw ValidationError("no seeds given");
    return seeds;
}

std::vector<double> parse_numbers(const std::string& text) {
    std::vector<double> out;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) {
        try {
            std::size_t used = 0;
            out.push_back(std::stod(item, &used));
            if (used != item.size()) throw std::invalid_argument(item);
        } catch (const std::exception&) {
            throw ValidationError("bad number '" + item + "' in '" + text + "'");
        }
    }
    if (out.empty()) throw ValidationError("empty number list");
    return out;
}

std::vector<ExportFormat> parse_formats(const std::string& text) {
    std::vector<ExportFormat> out;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) out.push_back(parse_export_format(item));
    return out;
}

OrderingIndex ordering_ref(const CandidateSpace& space, const std::string& ref) {
    if (auto found = space.find(ref)) return *found;
    try {
        std::size_t used = 0;
        const auto v = std::stoul(ref, &used);
        if (used == ref.size() && v < space.size()) return v;
    } catch (const std::exception&) {
    }
    throw ValidationError("unknown ordering '" + ref + "'");
}

// Episode flags shared by simulate and compare.
struct ScenarioFlags {
    std::string task_file;
    std::string latent;
    std::vector<std::string> drivers;  // "chunk=ordering"
    bool rotate_latent = false;
    std::size_t max_steps = 100;

    void add(CLI::App& cmd) {
        cmd.add_option("--task", task_file, "Task file (JSON)")->required();
        cmd.add_option("--latent", latent, "Override the latent ordering (label or index)");
        cmd.add_option("--cue-driver", drivers, "Make a chunk's cues follow an ordering, e.g. 1=TT0 (repeatable)");
        cmd.add_flag("--rotate-latent", rotate_latent, "Use ordering (seed mod N) as the latent for each seed");
        cmd.add_option("--max-steps", max_steps, "Step budget per episode")->check(CLI::PositiveNumber);
    }

    Task load() const {
        Task task = load_task(task_file);
        if (!latent.empty()) task.setup.latent = ordering_ref(*task.space, latent);
        for (const auto& d : drivers) {
            const auto eq = d.find('=');
            if (eq == std::string::npos) throw ValidationError("--cue-driver expects chunk=ordering, got '" + d + "'");
            int chunk = 0;
            try {
                chunk = std::stoi(d.substr(0, eq));
            } catch (const std::exception&) {
                throw ValidationError("--cue-driver: bad chunk in '" + d + "'");
            }
            if (!task.space->table().contains(chunk)) throw ValidationError("--cue-driver: unknown chunk in '" + d + "'");
            task.setup.cue_drivers[chunk] = ordering_ref(*task.space, d.substr(eq + 1));
        }
        return task;
    }
};

AgentConfig agent_from(const std::string& preset, const std::string& agent_file) {
    if (!agent_file.empty()) return load_agent_config(agent_file);
    return AgentConfig::preset(parse_strategy(preset));
}

int cmd_entropy(const std::string& task_file, const std::string& tsv_out) {
    const Task task = load_task(task_file);
    const auto& space = *task.space;
    std::cout << "chunk\tpositional_bits\tlexical_bits\n";
    std::string tsv = "chunk\tpositional_bits\tlexical_bits\n";
    for (ChunkId id : space.table().ids()) {
        const double pos = positional_entropy(space, id);
        const double lex = lexical_entropy(space, id);
        std::cout << id << '\t' << fixed(pos) << '\t' << fixed(lex) << '\n';
        tsv += std::to_string(id) + '\t' + format_number(pos) + '\t' + format_number(lex) + '\n';
    }
    const double prior = ordering_entropy(space);
    std::cout << "prior\t" << fixed(prior) << '\n';
    tsv += "prior\t" + format_number(prior) + "\t\n";
    if (!tsv_out.empty()) write_file(tsv_out, tsv);
    return kExitOk;
}

nlohmann::ordered_json summary_json(const EpisodeResult& r, const std::string& latent_label) {
    const auto& s = r.summary;
    nlohmann::ordered_json j;
    j["seed"] = r.seed;
    j["latent"] = latent_label;
    j["complete"] = s.complete;
    j["final_target"] = s.final_target;
    j["first_keystroke_latency_ms"] = s.first_keystroke_latency_ms;
    j["initial_orientation_ms"] = s.initial_orientation_ms;
    j["total_time_ms"] = s.total_time_ms;
    j["revisions"] = s.revision_count;
    j["hesitations"] = s.hesitation_count;
    j["epistemic_actions"] = s.epistemic_action_count;
    nlohmann::ordered_json counts;
    for (char c : {'O', 'H', 'R', 'F'}) counts[std::string(1, c)] = s.state_counts.at(c);
    j["segments"] = counts;
    std::vector<std::string> labels;
    for (const auto& c : r.cycles) labels.push_back(c.label);
    j["cycles"] = labels;
    return j;
}

std::string cycle_line(const std::vector<PolicyCycle>& cycles) {
    std::string out;
    for (const auto& c : cycles) out += (out.empty() ? "" : " ") + c.label;
    return out;
}

int cmd_simulate(const ScenarioFlags& scenario, const std::string& preset, const std::string& agent_file,
                 const std::string& seeds_text, const std::string& out_dir, const std::string& formats_text,
                 double pause_ms) {
    RunConfig run;
    run.task_file = scenario.task_file;
    run.agent = agent_from(preset, agent_file);
    run.seeds = parse_seeds(seeds_text);
    run.output_dir = out_dir;
    run.formats = parse_formats(formats_text);
    run.max_steps = scenario.max_steps;
    run.validate();
    const Task task = scenario.load();

    nlohmann::ordered_json episodes = nlohmann::ordered_json::array();
    bool all_complete = true;
    for (std::uint64_t seed : run.seeds) {
        const EpisodeSetup setup = setup_for_seed(task, seed, scenario.rotate_latent);
        const auto r = run_analyzed(run.agent, task, setup, seed, run.max_steps, {pause_ms});
        const std::string stem = "trace_seed" + std::to_string(seed);
        for (ExportFormat f : run.formats) {
            const char* ext = f == ExportFormat::tsv ? ".tsv" : ".svg";
            write_file(run.output_dir / (stem + ext), export_progression(r.trace, r.segments, r.cycles, f));
        }
        const std::string latent_label = task.space->ordering(setup.latent).label;
        episodes.push_back(summary_json(r, latent_label));
        all_complete = all_complete && r.trace.complete;
        std::cout << "seed " << seed << "\tlatent " << latent_label << '\t'
                  << (r.trace.complete ? "complete" : "incomplete") << "\tfirst_keystroke_ms "
                  << format_number(r.summary.first_keystroke_latency_ms) << "\trevisions "
                  << r.summary.revision_count << "\thesitations " << r.summary.hesitation_count << "\tcycles "
                  << cycle_line(r.cycles) << "\n  target " << r.summary.final_target << '\n';
    }
    nlohmann::ordered_json summary;
    summary["strategy"] = std::string(strategy_name(run.agent.strategy));
    summary["task"] = run.task_file.string();
    summary["max_steps"] = run.max_steps;
    summary["episodes"] = episodes;
    write_file(run.output_dir / "summary.json", summary.dump(2) + "\n");
    if (!all_complete) {
        std::cerr << "enact: at least one episode did not complete within " << run.max_steps << " steps\n";
        return kExitIncomplete;
    }
    return kExitOk;
}

int cmd_compare(const ScenarioFlags& scenario, const std::string& preset_a, const std::string& agent_a,
                const std::string& preset_b, const std::string& agent_b, std::size_t n, std::uint64_t first_seed,
                const std::string& sweep_text) {
    if (n < 2) throw ValidationError("--n must be at least 2");
    const Task task = scenario.load();
    std::vector<std::uint64_t> seeds;
    for (std::size_t i = 0; i < n; ++i) seeds.push_back(first_seed + i);
    const AgentConfig a = agent_from(preset_a, agent_a);

    if (!sweep_text.empty()) {
        const auto gammas = parse_numbers(sweep_text);
        const auto points = gamma_sweep(a, task, gammas, seeds, scenario.max_steps, scenario.rotate_latent);
        std::cout << "gamma_max\tmean_epistemic_actions\tcomplete\n";
        std::vector<double> xs, ys;
        for (const auto& p : points) {
            std::cout << format_number(p.gamma_max) << '\t' << fixed(p.mean_epistemic_actions, 3) << '\t' << p.complete
                      << '/' << n << '\n';
            xs.push_back(p.gamma_max);
            ys.push_back(p.mean_epistemic_actions);
        }
        if (xs.size() >= 2) std::cout << "spearman\t" << fixed(spearman(xs, ys), 3) << '\n';
        return kExitOk;
    }

    const AgentConfig b = agent_from(preset_b, agent_b);
    const auto report = compare_configs(a, b, task, seeds, scenario.max_steps, scenario.rotate_latent);
    std::cout << "pairs " << report.pairs << "\tcomplete_a " << report.complete_a << "\tcomplete_b "
              << report.complete_b << '\n';
    std::cout << "metric\tmean_a\tmean_b\ta_lower\tb_lower\tties\ta_lower_rate\n";
    for (const auto& m : report.metrics)
        std::cout << m.name << '\t' << fixed(m.mean_a, 3) << '\t' << fixed(m.mean_b, 3) << '\t' << fixed(m.a_lower, 2)
                  << '\t' << fixed(m.b_lower, 2) << '\t' << fixed(m.ties, 2) << '\t' << fixed(m.a_lower_rate(), 2)
                  << '\n';
    return kExitOk;
}

int cmd_segment(const std::string& file, const ColumnMap& columns, double pause_ms, const std::string& svg_out) {
    const std::string text = read_text_file(file);
    const Trace trace = ingest_tsv(text, columns);
    const auto segments = segment_ohrf(trace, {pause_ms});
    const auto cycles = group_policies(segments);
    std::cout << "segment\tstate\tt_start_ms\tt_end_ms\tevents\n";
    for (std::size_t i = 0; i < segments.size(); ++i) {
        const auto& s = segments[i];
        std::cout << i << '\t' << state_letter(s.state) << '\t' << format_number(s.t_start) << '\t'
                  << format_number(s.t_end) << '\t' << s.members.size() << '\n';
    }
    std::cout << "cycles\t" << cycle_line(cycles) << '\n';
    if (!svg_out.empty()) write_file(svg_out, export_progression(trace, segments, cycles, ExportFormat::svg));
    return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Simulate and analyse translation processes as enactive inference"};
    app.require_subcommand(1);

    std::string task_file, tsv_out;
    auto* entropy = app.add_subcommand("entropy", "Positional, lexical and prior entropies of a task");
    entropy->add_option("task", task_file, "Task file (JSON)")->required();
    entropy->add_option("--tsv", tsv_out, "Also write the table as TSV");

    ScenarioFlags sim_flags;
    std::string preset = "head_starter", agent_file, seeds_text = "0", out_dir = "out", formats_text = "tsv,svg";
    double pause_ms = 1000.0;
    auto* simulate = app.add_subcommand("simulate", "Run seeded episodes and export traces");
    sim_flags.add(*simulate);
    auto* preset_opt = simulate->add_option("--preset", preset, "head_starter | large_context_planner (alias planner)");
    simulate->add_option("--agent", agent_file, "Agent config file (JSON)")->excludes(preset_opt);
    simulate->add_option("--seeds", seeds_text, "Seeds: 7, 0-99 or 1,4,9");
    simulate->add_option("--out", out_dir, "Output directory");
    simulate->add_option("--formats", formats_text, "Comma-separated export formats: tsv, svg");
    simulate->add_option("--pause-ms", pause_ms, "Keystroke gap counted as hesitation")->check(CLI::PositiveNumber);

    ScenarioFlags cmp_flags;
    std::string preset_a = "head_starter", preset_b = "large_context_planner", agent_a, agent_b, sweep_text;
    std::size_t n = 100;
    std::uint64_t first_seed = 0;
    auto* compare = app.add_subcommand("compare", "Paired comparison of two agents, or a precision sweep");
    cmp_flags.add(*compare);
    auto* pa = compare->add_option("--preset-a", preset_a, "Preset for side A");
    compare->add_option("--agent-a", agent_a, "Agent config file for side A")->excludes(pa);
    auto* pb = compare->add_option("--preset-b", preset_b, "Preset for side B");
    compare->add_option("--agent-b", agent_b, "Agent config file for side B")->excludes(pb);
    compare->add_option("--n", n, "Number of paired seeds");
    compare->add_option("--first-seed", first_seed, "First seed of the batch");
    compare->add_option("--gamma-sweep", sweep_text, "Sweep gamma_max over side A, e.g. 1,2,4,8,16");

    std::string log_file, svg_out;
    ColumnMap columns;
    double seg_pause_ms = 1000.0;
    auto* segment = app.add_subcommand("segment", "Segment an event log into OHRF states and policy cycles");
    segment->add_option("log", log_file, "Tab-separated event log")->required();
    segment->add_option("--time-col", columns.time, "Time column (ms)");
    segment->add_option("--kind-col", columns.kind, "Event-kind column");
    segment->add_option("--target-col", columns.target, "Target column");
    segment->add_option("--pause-ms", seg_pause_ms, "Keystroke gap counted as hesitation")->check(CLI::PositiveNumber);
    segment->add_option("--svg", svg_out, "Write an SVG timeline");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kExitValidation;
    }

    try {
        if (entropy->parsed()) return cmd_entropy(task_file, tsv_out);
        if (simulate->parsed())
            return cmd_simulate(sim_flags, preset, agent_file, seeds_text, out_dir, formats_text, pause_ms);
        if (compare->parsed())
            return cmd_compare(cmp_flags, preset_a, agent_a, preset_b, agent_b, n, first_seed, sweep_text);
        if (segment->parsed()) return cmd_segment(log_file, columns, seg_pause_ms, svg_out);
    } catch (const IngestionError& e) {
        std::cerr << "enact: ingestion error: " << e.what() << '\n';
        return kExitIngestion;
    } catch (const ValidationError& e) {
        std::cerr << "enact: invalid input: " << e.what() << '\n';
        return kExitValidation;
    } catch (const LookupError& e) {
        std::cerr << "enact: invalid input: " << e.what() << '\n';
        return kExitValidation;
    } catch (const std::exception& e) {
        std::cerr << "enact: " << e.what() << '\n';
        return 1;
    }
    return kExitOk;
}

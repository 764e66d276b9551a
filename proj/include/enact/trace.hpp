#pragma once

// Process traces and their analytics: OHRF segmentation (Orientation,
// Hesitation, Revision, Flow), policy-cycle grouping, entropy trajectories,
// summary metrics, progression-graph export and tabular log ingestion.

#include <cstddef>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "enact/action.hpp"

namespace enact {

struct ProcessEvent {
    double t_start = 0.0;  // ms
    double t_end = 0.0;    // ms
    Action action;
    std::optional<double> belief_entropy;  // bits; absent for ingested logs
    std::optional<double> gamma;           // absent for ingested logs
    std::optional<double> zeta;
    std::vector<std::string> annotations;

    bool has_annotation(std::string_view label) const;
};

struct Trace {
    std::vector<ProcessEvent> events;
    bool complete = false;
    std::string final_target;
    // Belief entropy before the first event, when known.
    std::optional<double> initial_entropy;

    bool has_beliefs() const;
};

enum class OhrfState { O, H, R, F };

char state_letter(OhrfState s);
OhrfState state_from_letter(char c);  // ValidationError outside O/H/R/F

struct Segment {
    OhrfState state = OhrfState::O;
    double t_start = 0.0;
    double t_end = 0.0;
    std::vector<std::size_t> members;  // event indices, contiguous

    bool operator==(const Segment&) const = default;
};

struct PolicyCycle {
    std::string label;                        // e.g. "OF", "OFR", "OFHF"
    std::vector<std::size_t> segments;        // indices into the segment list
    bool implicit_orientation = false;        // leading O was inserted

    bool operator==(const PolicyCycle&) const = default;
};

struct SegmentationThresholds {
    double pause_ms = 1000.0;  // inter-keystroke gap above which target fixations count as hesitation
};

// Per-event OHRF labels before merging.
std::vector<OhrfState> label_events(const Trace& trace, SegmentationThresholds thresholds = {});

// Labels every event, then merges adjacent equal labels into segments.
std::vector<Segment> segment_ohrf(const Trace& trace, SegmentationThresholds thresholds = {});

// Cuts before every O. The label keeps each segment's letter and collapses
// only immediately repeated letters. A sequence not starting with O gets an
// implicit zero-length leading O, flagged on the first cycle.
std::vector<PolicyCycle> group_policies(const std::vector<Segment>& segments);
std::vector<PolicyCycle> group_states(const std::vector<OhrfState>& states);

// (t, bits) at every event boundary, starting with the initial entropy when
// known. Throws UnsupportedFieldError when the trace carries no beliefs.
std::vector<std::pair<double, double>> entropy_trajectory(const Trace& trace);

struct TraceSummary {
    double first_keystroke_latency_ms = 0.0;
    double initial_orientation_ms = 0.0;
    std::map<char, std::size_t> state_counts;    // segments per OHRF letter
    std::map<std::string, std::size_t> cycle_labels;
    double total_time_ms = 0.0;
    std::size_t revision_count = 0;             // deletions
    std::size_t hesitation_count = 0;           // H segments
    std::size_t epistemic_action_count = 0;     // reads, target looks, pauses, consults
    std::string final_target;
    bool complete = false;
};

TraceSummary summarize(const Trace& trace, const std::vector<Segment>& segments,
                       const std::vector<PolicyCycle>& cycles);

enum class ExportFormat { tsv, svg };
ExportFormat parse_export_format(std::string_view name);  // ValidationError on unknown names

inline constexpr std::string_view kTsvHeader =
    "time_ms\tevent_kind\tchunk_or_slot\tohrf_state\tcycle_index\tentropy_bits\tgamma";

// chunk_or_slot encodes the action target: "4" reads chunk 4, "4@3" types
// chunk 4 into slot 3, "@3" deletes or looks at slot 3, "r2" consults
// resource 2, "800ms" pauses for 800 ms.
std::string encode_target(const Action& action);
// Shortest decimal form that reads back to the same double.
std::string format_number(double v);
Action decode_action(std::string_view kind, std::string_view target);

std::string export_progression(const Trace& trace, const std::vector<Segment>& segments,
                               const std::vector<PolicyCycle>& cycles, ExportFormat format);

struct ColumnMap {
    std::string time = "time_ms";
    std::string kind = "event_kind";
    std::string target = "chunk_or_slot";
};

// Tab-separated log to a point-event trace without belief fields. Throws
// IngestionError (1-based data row; 0 for the header) on missing columns,
// unparseable times, unknown event kinds or bad targets.
Trace ingest_tsv(std::string_view text, const ColumnMap& columns = {});

}  // namespace enact

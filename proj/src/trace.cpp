#include "enact/trace.hpp"

#include <algorithm>
#include <array>
#include <charconv>
#include <set>
#include <sstream>

#include "enact/error.hpp"

namespace enact {

bool ProcessEvent::has_annotation(std::string_view label) const {
    return std::find(annotations.begin(), annotations.end(), label) != annotations.end();
}

bool Trace::has_beliefs() const {
    return !events.empty() &&
           std::all_of(events.begin(), events.end(), [](const ProcessEvent& e) { return e.belief_entropy.has_value(); });
}

char state_letter(OhrfState s) {
    switch (s) {
        case OhrfState::O: return 'O';
        case OhrfState::H: return 'H';
        case OhrfState::R: return 'R';
        case OhrfState::F: return 'F';
    }
    return '?';
}

OhrfState state_from_letter(char c) {
    switch (c) {
        case 'O': return OhrfState::O;
        case 'H': return OhrfState::H;
        case 'R': return OhrfState::R;
        case 'F': return OhrfState::F;
        default: throw ValidationError(std::string("unknown OHRF state '") + c + "'");
    }
}

std::string format_number(double v) {
    std::array<char, 64> buf{};
    auto res = std::to_chars(buf.data(), buf.data() + buf.size(), v);
    return std::string(buf.data(), res.ptr);
}

namespace {

bool is_keystroke(const Action& a) {
    const auto k = kind_of(a);
    return k == ActionKind::type_chunk || k == ActionKind::delete_slot;
}

std::optional<double> parse_number(std::string_view s) {
    double v = 0.0;
    if (s.empty()) return std::nullopt;
    auto res = std::from_chars(s.data(), s.data() + s.size(), v);
    if (res.ec != std::errc() || res.ptr != s.data() + s.size()) return std::nullopt;
    return v;
}

std::optional<int> parse_int(std::string_view s) {
    int v = 0;
    if (s.empty()) return std::nullopt;
    auto res = std::from_chars(s.data(), s.data() + s.size(), v);
    if (res.ec != std::errc() || res.ptr != s.data() + s.size()) return std::nullopt;
    return v;
}

std::vector<std::string_view> split(std::string_view line, char sep) {
    std::vector<std::string_view> out;
    std::size_t start = 0;
    while (true) {
        const auto pos = line.find(sep, start);
        if (pos == std::string_view::npos) {
            out.push_back(line.substr(start));
            return out;
        }
        out.push_back(line.substr(start, pos - start));
        start = pos + 1;
    }
}

std::string xml_escape(std::string_view s) {
    std::string out;
    for (char c : s) {
        switch (c) {
            case '&': out += "&amp;"; break;
            case '<': out += "&lt;"; break;
            case '>': out += "&gt;"; break;
            case '"': out += "&quot;"; break;
            default: out += c;
        }
    }
    return out;
}

}  // namespace

std::vector<OhrfState> label_events(const Trace& trace, SegmentationThresholds thresholds) {
    const auto& ev = trace.events;
    std::vector<std::optional<OhrfState>> base(ev.size());
    std::set<Slot> filled;
    for (std::size_t i = 0; i < ev.size(); ++i) {
        switch (kind_of(ev[i].action)) {
            case ActionKind::fixate_source:
            case ActionKind::consult: base[i] = OhrfState::O; break;
            case ActionKind::pause: base[i] = OhrfState::H; break;
            case ActionKind::delete_slot: base[i] = OhrfState::R; break;
            case ActionKind::type_chunk: {
                const Slot s = std::get<TypeChunk>(ev[i].action).slot;
                base[i] = filled.count(s) ? OhrfState::R : OhrfState::F;
                filled.insert(s);
                break;
            }
            case ActionKind::fixate_target: break;  // resolved below
        }
    }

    std::vector<OhrfState> labels(ev.size(), OhrfState::O);
    for (std::size_t i = 0; i < ev.size(); ++i) {
        if (base[i]) {
            labels[i] = *base[i];
            continue;
        }
        // Target fixation: hesitation inside a long keystroke gap free of
        // deletions, revision next to a revision, otherwise part of the run.
        std::optional<std::size_t> prev_key;
        std::optional<std::size_t> next_key;
        for (std::size_t j = i; j-- > 0;)
            if (is_keystroke(ev[j].action)) {
                prev_key = j;
                break;
            }
        for (std::size_t j = i + 1; j < ev.size(); ++j)
            if (is_keystroke(ev[j].action)) {
                next_key = j;
                break;
            }
        const bool prev_r = i > 0 && labels[i - 1] == OhrfState::R;
        const bool next_r = i + 1 < ev.size() && base[i + 1] == OhrfState::R;
        bool long_gap = false;
        if (prev_key && next_key) {
            const double gap = ev[*next_key].t_start - ev[*prev_key].t_end;
            bool deletion = false;
            for (std::size_t j = *prev_key; j <= *next_key; ++j)
                deletion = deletion || kind_of(ev[j].action) == ActionKind::delete_slot;
            long_gap = gap > thresholds.pause_ms && !deletion;
        }
        if (long_gap)
            labels[i] = OhrfState::H;
        else if (prev_r || next_r)
            labels[i] = OhrfState::R;
        else
            labels[i] = i > 0 ? labels[i - 1] : OhrfState::O;
    }
    return labels;
}

std::vector<Segment> segment_ohrf(const Trace& trace, SegmentationThresholds thresholds) {
    const auto labels = label_events(trace, thresholds);
    std::vector<Segment> out;
    for (std::size_t i = 0; i < labels.size(); ++i) {
        const auto& e = trace.events[i];
        if (out.empty() || out.back().state != labels[i]) {
            out.push_back({labels[i], e.t_start, e.t_end, {i}});
        } else {
            out.back().t_end = std::max(out.back().t_end, e.t_end);
            out.back().members.push_back(i);
        }
    }
    return out;
}

std::vector<PolicyCycle> group_states(const std::vector<OhrfState>& states) {
    std::vector<PolicyCycle> out;
    for (std::size_t i = 0; i < states.size(); ++i) {
        const char letter = state_letter(states[i]);
        if (states[i] == OhrfState::O || out.empty()) {
            PolicyCycle c;
            if (states[i] != OhrfState::O) {
                c.label = "O";
                c.implicit_orientation = true;
            }
            out.push_back(std::move(c));
        }
        auto& cur = out.back();
        if (cur.label.empty() || cur.label.back() != letter) cur.label += letter;
        cur.segments.push_back(i);
    }
    return out;
}

std::vector<PolicyCycle> group_policies(const std::vector<Segment>& segments) {
    std::vector<OhrfState> states;
    states.reserve(segments.size());
    for (const auto& s : segments) states.push_back(s.state);
    return group_states(states);
}

std::vector<std::pair<double, double>> entropy_trajectory(const Trace& trace) {
    if (trace.events.empty()) {
        if (trace.initial_entropy) return {{0.0, *trace.initial_entropy}};
        throw UnsupportedFieldError("entropy_trajectory: trace carries no belief entropies");
    }
    if (!trace.has_beliefs()) throw UnsupportedFieldError("entropy_trajectory: trace carries no belief entropies");
    std::vector<std::pair<double, double>> out;
    if (trace.initial_entropy) out.emplace_back(trace.events.front().t_start, *trace.initial_entropy);
    for (const auto& e : trace.events) out.emplace_back(e.t_end, *e.belief_entropy);
    return out;
}

TraceSummary summarize(const Trace& trace, const std::vector<Segment>& segments,
                       const std::vector<PolicyCycle>& cycles) {
    TraceSummary s;
    s.final_target = trace.final_target;
    s.complete = trace.complete;
    for (char c : {'O', 'H', 'R', 'F'}) s.state_counts[c] = 0;
    if (trace.events.empty()) return s;

    const double origin = trace.events.front().t_start;
    double end = origin;
    for (const auto& e : trace.events) {
        end = std::max(end, e.t_end);
        const auto k = kind_of(e.action);
        if (k == ActionKind::type_chunk && s.first_keystroke_latency_ms == 0.0 &&
            !std::any_of(trace.events.begin(), trace.events.begin() + (&e - trace.events.data()),
                         [](const ProcessEvent& p) { return kind_of(p.action) == ActionKind::type_chunk; }))
            s.first_keystroke_latency_ms = e.t_start - origin;
        if (k == ActionKind::delete_slot) ++s.revision_count;
        if (is_epistemic(e.action)) ++s.epistemic_action_count;
    }
    s.total_time_ms = end - origin;

    for (const auto& seg : segments) ++s.state_counts[state_letter(seg.state)];
    s.hesitation_count = s.state_counts['H'];
    for (const auto& c : cycles) ++s.cycle_labels[c.label];
    if (!segments.empty() && segments.front().state == OhrfState::O) {
        const double stop = segments.size() > 1 ? segments[1].t_start : segments.front().t_end;
        s.initial_orientation_ms = stop - segments.front().t_start;
    }
    return s;
}

ExportFormat parse_export_format(std::string_view name) {
    if (name == "tsv") return ExportFormat::tsv;
    if (name == "svg") return ExportFormat::svg;
    throw ValidationError("unknown export format '" + std::string(name) + "'");
}

std::string encode_target(const Action& action) {
    switch (kind_of(action)) {
        case ActionKind::fixate_source: return std::to_string(std::get<FixateSource>(action).chunk);
        case ActionKind::fixate_target: return "@" + std::to_string(std::get<FixateTarget>(action).slot);
        case ActionKind::type_chunk: {
            const auto& t = std::get<TypeChunk>(action);
            return std::to_string(t.chunk) + "@" + std::to_string(t.slot);
        }
        case ActionKind::delete_slot: return "@" + std::to_string(std::get<Delete>(action).slot);
        case ActionKind::pause: return std::to_string(std::get<Pause>(action).duration_ms) + "ms";
        case ActionKind::consult: return "r" + std::to_string(std::get<Consult>(action).resource);
    }
    return {};
}

Action decode_action(std::string_view kind, std::string_view target) {
    auto bad = [&]() {
        return ValidationError("bad target '" + std::string(target) + "' for event kind '" + std::string(kind) + "'");
    };
    auto slot_only = [&]() -> Slot {
        if (target.empty() || target.front() != '@') throw bad();
        auto v = parse_int(target.substr(1));
        if (!v) throw bad();
        return *v;
    };
    if (kind == "fixate_source") {
        auto v = parse_int(target);
        if (!v) throw bad();
        return FixateSource{*v};
    }
    if (kind == "fixate_target") return FixateTarget{slot_only()};
    if (kind == "delete") return Delete{slot_only()};
    if (kind == "type") {
        const auto at = target.find('@');
        if (at == std::string_view::npos) throw bad();
        auto c = parse_int(target.substr(0, at));
        auto s = parse_int(target.substr(at + 1));
        if (!c || !s) throw bad();
        return TypeChunk{*c, *s};
    }
    if (kind == "pause") {
        if (target.empty()) return Pause{};
        if (target.size() < 3 || target.substr(target.size() - 2) != "ms") throw bad();
        auto v = parse_int(target.substr(0, target.size() - 2));
        if (!v || *v < 0) throw bad();
        return Pause{*v};
    }
    if (kind == "consult") {
        if (target.empty()) return Consult{};
        if (target.front() != 'r') throw bad();
        auto v = parse_int(target.substr(1));
        if (!v) throw bad();
        return Consult{*v};
    }
    throw ValidationError("unknown event kind '" + std::string(kind) + "'");
}

namespace {

std::vector<std::size_t> segment_of_event(const Trace& trace, const std::vector<Segment>& segments) {
    std::vector<std::size_t> out(trace.events.size(), 0);
    for (std::size_t s = 0; s < segments.size(); ++s)
        for (std::size_t m : segments[s].members)
            if (m < out.size()) out[m] = s;
    return out;
}

std::vector<std::size_t> cycle_of_segment(const std::vector<Segment>& segments, const std::vector<PolicyCycle>& cycles) {
    std::vector<std::size_t> out(segments.size(), 0);
    for (std::size_t c = 0; c < cycles.size(); ++c)
        for (std::size_t s : cycles[c].segments)
            if (s < out.size()) out[s] = c;
    return out;
}

std::string export_tsv(const Trace& trace, const std::vector<Segment>& segments, const std::vector<PolicyCycle>& cycles) {
    const auto seg_of = segment_of_event(trace, segments);
    const auto cyc_of = cycle_of_segment(segments, cycles);
    std::ostringstream out;
    out << kTsvHeader << '\n';
    for (std::size_t i = 0; i < trace.events.size(); ++i) {
        const auto& e = trace.events[i];
        const bool segmented = seg_of[i] < segments.size();
        out << format_number(e.t_start) << '\t' << kind_name(kind_of(e.action)) << '\t' << encode_target(e.action)
            << '\t';
        if (segmented) out << state_letter(segments[seg_of[i]].state);
        out << '\t';
        if (segmented && !cycles.empty()) out << cyc_of[seg_of[i]];
        out << '\t';
        if (e.belief_entropy) out << format_number(*e.belief_entropy);
        out << '\t';
        if (e.gamma) out << format_number(*e.gamma);
        out << '\n';
    }
    return out.str();
}

std::string export_svg(const Trace& trace, const std::vector<Segment>& segments, const std::vector<PolicyCycle>& cycles) {
    constexpr double kWidth = 960.0;
    constexpr double kLeft = 60.0;
    constexpr double kRowHeight = 28.0;
    constexpr double kBandTop = 24.0;
    constexpr double kBandHeight = 14.0;
    constexpr double kRowsTop = kBandTop + 2 * kBandHeight + 16.0;

    std::set<int> rows;
    for (const auto& e : trace.events) {
        if (const auto* r = std::get_if<FixateSource>(&e.action)) rows.insert(r->chunk);
        if (const auto* t = std::get_if<TypeChunk>(&e.action)) rows.insert(t->chunk);
    }
    std::vector<int> row_ids(rows.begin(), rows.end());
    auto row_y = [&](int chunk) {
        const auto it = std::find(row_ids.begin(), row_ids.end(), chunk);
        return kRowsTop + kRowHeight * (static_cast<double>(it - row_ids.begin()) + 0.5);
    };
    const double target_row = kRowsTop + kRowHeight * (static_cast<double>(row_ids.size()) + 0.5);
    const double height = target_row + kRowHeight;

    double t0 = 0.0;
    double t1 = 1.0;
    if (!trace.events.empty()) {
        t0 = trace.events.front().t_start;
        for (const auto& e : trace.events) t1 = std::max(t1, e.t_end);
        if (t1 <= t0) t1 = t0 + 1.0;
    }
    auto x = [&](double t) { return kLeft + (kWidth - kLeft - 10.0) * (t - t0) / (t1 - t0); };
    auto fmt = [](double v) {
        std::ostringstream s;
        s.setf(std::ios::fixed);
        s.precision(2);
        s << v;
        return s.str();
    };

    std::ostringstream out;
    out << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
    out << "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" width=\"" << fmt(kWidth) << "\" height=\""
        << fmt(height) << "\">\n";
    out << "<style>.O{fill:#9ecae1}.H{fill:#fdae6b}.R{fill:#fc9272}.F{fill:#a1d99b}"
           ".cycle{fill:none;stroke:#555}.fix{fill:#3182bd}.key{stroke:#31a354;stroke-width:2}"
           ".del{stroke:#de2d26;stroke-width:2}text{font:10px sans-serif}</style>\n";
    out << "<g class=\"segments\">\n";
    for (const auto& s : segments) {
        const double w = std::max(1.0, x(s.t_end) - x(s.t_start));
        out << "<rect class=\"segment-band " << state_letter(s.state) << "\" x=\"" << fmt(x(s.t_start)) << "\" y=\""
            << fmt(kBandTop) << "\" width=\"" << fmt(w) << "\" height=\"" << fmt(kBandHeight) << "\"><title>"
            << state_letter(s.state) << ' ' << fmt(s.t_start) << "-" << fmt(s.t_end) << " ms</title></rect>\n";
    }
    out << "</g>\n<g class=\"cycles\">\n";
    for (std::size_t c = 0; c < cycles.size(); ++c) {
        const auto& cyc = cycles[c];
        if (cyc.segments.empty()) continue;
        const double a = segments.at(cyc.segments.front()).t_start;
        const double b = segments.at(cyc.segments.back()).t_end;
        out << "<rect class=\"cycle\" x=\"" << fmt(x(a)) << "\" y=\"" << fmt(kBandTop + kBandHeight + 2) << "\" width=\""
            << fmt(std::max(1.0, x(b) - x(a))) << "\" height=\"" << fmt(kBandHeight) << "\"/>\n";
        out << "<text x=\"" << fmt(x(a) + 2) << "\" y=\"" << fmt(kBandTop + 2 * kBandHeight) << "\">"
            << xml_escape(cyc.label) << "</text>\n";
    }
    out << "</g>\n<g class=\"rows\">\n";
    for (int id : row_ids)
        out << "<text x=\"4\" y=\"" << fmt(row_y(id) + 3) << "\">chunk " << id << "</text>\n";
    out << "<text x=\"4\" y=\"" << fmt(target_row + 3) << "\">target</text>\n";
    out << "</g>\n<g class=\"events\">\n";
    for (const auto& e : trace.events) {
        switch (kind_of(e.action)) {
            case ActionKind::fixate_source:
                out << "<circle class=\"fix\" cx=\"" << fmt(x(e.t_start)) << "\" cy=\""
                    << fmt(row_y(std::get<FixateSource>(e.action).chunk)) << "\" r=\"3\"/>\n";
                break;
            case ActionKind::type_chunk: {
                const double y = row_y(std::get<TypeChunk>(e.action).chunk);
                out << "<line class=\"key\" x1=\"" << fmt(x(e.t_start)) << "\" y1=\"" << fmt(y) << "\" x2=\""
                    << fmt(std::max(x(e.t_end), x(e.t_start) + 1)) << "\" y2=\"" << fmt(y) << "\"/>\n";
                break;
            }
            case ActionKind::delete_slot:
                out << "<line class=\"del\" x1=\"" << fmt(x(e.t_start)) << "\" y1=\"" << fmt(target_row - 6)
                    << "\" x2=\"" << fmt(x(e.t_start)) << "\" y2=\"" << fmt(target_row + 6) << "\"/>\n";
                break;
            case ActionKind::fixate_target:
                out << "<circle class=\"fix\" cx=\"" << fmt(x(e.t_start)) << "\" cy=\"" << fmt(target_row)
                    << "\" r=\"3\"/>\n";
                break;
            case ActionKind::pause:
            case ActionKind::consult: break;
        }
    }
    out << "</g>\n</svg>\n";
    return out.str();
}

}  // namespace

std::string export_progression(const Trace& trace, const std::vector<Segment>& segments,
                               const std::vector<PolicyCycle>& cycles, ExportFormat format) {
    switch (format) {
        case ExportFormat::tsv: return export_tsv(trace, segments, cycles);
        case ExportFormat::svg: return export_svg(trace, segments, cycles);
    }
    throw ValidationError("unknown export format");
}

Trace ingest_tsv(std::string_view text, const ColumnMap& columns) {
    auto lines = split(text, '\n');
    auto strip = [](std::string_view s) {
        if (!s.empty() && s.back() == '\r') s.remove_suffix(1);
        return s;
    };
    if (lines.empty() || strip(lines.front()).empty()) throw IngestionError("missing header", 0);

    const auto header = split(strip(lines.front()), '\t');
    auto column = [&](const std::string& name) {
        const auto it = std::find(header.begin(), header.end(), name);
        if (it == header.end()) throw IngestionError("missing column '" + name + "'", 0);
        return static_cast<std::size_t>(it - header.begin());
    };
    const std::size_t t_col = column(columns.time);
    const std::size_t k_col = column(columns.kind);
    const std::size_t x_col = column(columns.target);
    const std::size_t needed = std::max({t_col, k_col, x_col}) + 1;

    Trace trace;
    for (std::size_t i = 1; i < lines.size(); ++i) {
        const auto line = strip(lines[i]);
        if (line.empty()) continue;
        const std::size_t row = i;
        const auto fields = split(line, '\t');
        if (fields.size() < needed) throw IngestionError("expected at least " + std::to_string(needed) + " fields", row);
        const auto t = parse_number(fields[t_col]);
        if (!t) throw IngestionError("unparseable time '" + std::string(fields[t_col]) + "'", row);
        if (!trace.events.empty() && *t < trace.events.back().t_start)
            throw IngestionError("events out of time order", row);
        ProcessEvent e;
        e.t_start = *t;
        e.t_end = *t;
        try {
            e.action = decode_action(fields[k_col], fields[x_col]);
        } catch (const ValidationError& err) {
            throw IngestionError(err.what(), row);
        }
        trace.events.push_back(std::move(e));
    }
    return trace;
}

}  // namespace enact

#include "enact/config.hpp"

#include <fstream>
#include <limits>
#include <set>
#include <sstream>

#include <json.hpp>

#include "enact/error.hpp"

namespace enact {

using nlohmann::json;

namespace {

json parse_json(std::string_view text) {
    try {
        return json::parse(text.begin(), text.end());
    } catch (const json::parse_error& e) {
        throw ValidationError(std::string("malformed JSON: ") + e.what());
    }
}

void reject_unknown(const json& obj, const std::string& where, std::initializer_list<std::string_view> allowed) {
    if (!obj.is_object()) throw ValidationError(where + ": expected an object");
    const std::set<std::string_view> ok(allowed);
    for (const auto& item : obj.items())
        if (!ok.count(item.key())) throw ValidationError(where + ": unknown field '" + item.key() + "'");
}

void check_version(const json& obj, const std::string& where) {
    if (!obj.contains("schema_version")) throw ValidationError(where + ": missing field 'schema_version'");
    const auto& v = obj.at("schema_version");
    if (!v.is_number_integer() || v.get<int>() != kSchemaVersion)
        throw ValidationError(where + ": schema_version must be " + std::to_string(kSchemaVersion));
}

template <class T>
T get_field(const json& obj, const std::string& key, const std::string& where) {
    if (!obj.contains(key)) throw ValidationError(where + ": missing field '" + key + "'");
    try {
        return obj.at(key).get<T>();
    } catch (const json::exception&) {
        throw ValidationError(where + "." + key + ": wrong type");
    }
}

template <class T>
void maybe(const json& obj, const std::string& key, const std::string& where, T& out) {
    if (obj.contains(key)) out = get_field<T>(obj, key, where);
}

ChunkId parse_chunk_key(const std::string& key, const std::string& where) {
    try {
        std::size_t used = 0;
        const int v = std::stoi(key, &used);
        if (used != key.size()) throw std::invalid_argument(key);
        return v;
    } catch (const std::exception&) {
        throw ValidationError(where + ": '" + key + "' is not a chunk id");
    }
}

}  // namespace

Task parse_task(std::string_view json_text) {
    const json doc = parse_json(json_text);
    const std::string where = "task";
    reject_unknown(doc, where,
                   {"schema_version", "chunks", "source_order", "orderings", "prior", "reliability", "latent",
                    "cue_drivers", "description"});
    check_version(doc, where);

    const json& chunks_json = doc.contains("chunks") ? doc.at("chunks") : json();
    if (!chunks_json.is_array() || chunks_json.empty()) throw ValidationError("task.chunks: expected a non-empty array");
    std::vector<Chunk> chunks;
    for (std::size_t i = 0; i < chunks_json.size(); ++i) {
        const std::string w = "task.chunks[" + std::to_string(i) + "]";
        const json& c = chunks_json[i];
        reject_unknown(c, w, {"id", "source", "target", "kind"});
        Chunk chunk;
        chunk.id = get_field<int>(c, "id", w);
        chunk.source_text = c.contains("source") ? get_field<std::string>(c, "source", w) : std::string();
        chunk.target_text = get_field<std::string>(c, "target", w);
        const std::string kind = c.contains("kind") ? get_field<std::string>(c, "kind", w) : "content";
        if (kind == "content")
            chunk.kind = ChunkKind::content;
        else if (kind == "punctuation")
            chunk.kind = ChunkKind::punctuation;
        else
            throw ValidationError(w + ".kind: expected 'content' or 'punctuation'");
        chunks.push_back(std::move(chunk));
    }
    std::vector<ChunkId> source_order;
    if (doc.contains("source_order")) {
        source_order = get_field<std::vector<ChunkId>>(doc, "source_order", where);
    } else {
        for (const auto& c : chunks)
            if (c.kind == ChunkKind::content) source_order.push_back(c.id);
    }
    ChunkTable table(std::move(chunks), std::move(source_order));

    const json& ord_json = doc.contains("orderings") ? doc.at("orderings") : json();
    if (!ord_json.is_array() || ord_json.empty()) throw ValidationError("task.orderings: expected a non-empty array");
    std::vector<LabeledSlots> orderings;
    for (std::size_t i = 0; i < ord_json.size(); ++i) {
        const std::string w = "task.orderings[" + std::to_string(i) + "]";
        const json& o = ord_json[i];
        LabeledSlots ls;
        if (o.is_array()) {
            ls.label = "TT" + std::to_string(i);
            ls.slots = get_field<std::vector<ChunkId>>(json{{"slots", o}}, "slots", w);
        } else {
            reject_unknown(o, w, {"label", "slots"});
            ls.label = o.contains("label") ? get_field<std::string>(o, "label", w) : "TT" + std::to_string(i);
            ls.slots = get_field<std::vector<ChunkId>>(o, "slots", w);
        }
        orderings.push_back(std::move(ls));
    }
    CandidateSpace space = build_candidate_space(table, orderings);
    if (doc.contains("prior")) {
        auto w = get_field<std::vector<double>>(doc, "prior", where);
        if (w.size() != space.size()) throw ValidationError("task.prior: needs one weight per ordering");
        space = space.with_prior(Categorical::from_weights(std::move(w)));
    }
    auto shared = std::make_shared<const CandidateSpace>(std::move(space));

    std::map<ChunkId, double> reliability;
    for (const auto& c : shared->table().chunks())
        reliability[c.id] = c.kind == ChunkKind::content ? ReadingEvidenceModel::kDefaultContentReliability
                                                         : ReadingEvidenceModel::kDefaultPunctuationReliability;
    if (doc.contains("reliability")) {
        const json& r = doc.at("reliability");
        if (r.is_number()) {
            const double v = r.get<double>();
            for (const auto& c : shared->table().chunks())
                if (c.kind == ChunkKind::content) reliability[c.id] = v;
        } else if (r.is_object()) {
            for (const auto& item : r.items()) {
                const ChunkId id = parse_chunk_key(item.key(), "task.reliability");
                if (!shared->table().contains(id))
                    throw ValidationError("task.reliability: unknown chunk " + item.key());
                if (!item.value().is_number()) throw ValidationError("task.reliability." + item.key() + ": wrong type");
                reliability[id] = item.value().get<double>();
            }
        } else {
            throw ValidationError("task.reliability: expected a number or an object");
        }
    }
    ReadingEvidenceModel reading(shared->size(), reliability);

    auto ordering_ref = [&](const json& v, const std::string& w) -> OrderingIndex {
        if (v.is_string()) {
            const auto found = shared->find(v.get<std::string>());
            if (!found) throw ValidationError(w + ": unknown ordering '" + v.get<std::string>() + "'");
            return *found;
        }
        if (v.is_number_unsigned() && v.get<std::size_t>() < shared->size()) return v.get<std::size_t>();
        throw ValidationError(w + ": expected an ordering label or index");
    };
    EpisodeSetup setup;
    if (doc.contains("latent")) setup.latent = ordering_ref(doc.at("latent"), "task.latent");
    if (doc.contains("cue_drivers")) {
        const json& d = doc.at("cue_drivers");
        if (!d.is_object()) throw ValidationError("task.cue_drivers: expected an object");
        for (const auto& item : d.items()) {
            const ChunkId id = parse_chunk_key(item.key(), "task.cue_drivers");
            if (!shared->table().contains(id)) throw ValidationError("task.cue_drivers: unknown chunk " + item.key());
            setup.cue_drivers[id] = ordering_ref(item.value(), "task.cue_drivers." + item.key());
        }
    }
    return {shared, std::move(reading), std::move(setup)};
}

std::string read_text_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ValidationError("cannot read " + path.string());
    std::ostringstream s;
    s << in.rdbuf();
    return s.str();
}

Task load_task(const std::filesystem::path& path) {
    try {
        return parse_task(read_text_file(path));
    } catch (const ValidationError& e) {
        throw ValidationError(path.string() + ": " + e.what());
    }
}

AgentConfig parse_agent_config(std::string_view json_text) {
    const json doc = parse_json(json_text);
    const std::string w = "agent";
    reject_unknown(doc, w,
                   {"schema_version", "preset", "w_e", "w_p", "horizon", "adaptive_horizon", "read_ahead",
                    "gamma_max", "gamma_min", "k_gamma", "k_zeta", "zeta_min", "zeta_max", "beta", "theta_entropy",
                    "theta_gamma", "hesitation_pause_ms", "revision", "sample", "branching_limit", "log_pref",
                    "progress_bonus", "inconsistency_penalty", "read_cost", "pause_cost", "consult_cost", "timing"});
    check_version(doc, w);
    AgentConfig c = AgentConfig::preset(
        parse_strategy(doc.contains("preset") ? get_field<std::string>(doc, "preset", w) : std::string("custom")));
    maybe(doc, "w_e", w, c.weights.epistemic);
    maybe(doc, "w_p", w, c.weights.pragmatic);
    maybe(doc, "horizon", w, c.horizon);
    maybe(doc, "adaptive_horizon", w, c.adaptive_horizon);
    if (doc.contains("read_ahead")) {
        const json& r = doc.at("read_ahead");
        if (r.is_string() && r.get<std::string>() == "all")
            c.read_ahead = std::numeric_limits<std::size_t>::max();
        else
            c.read_ahead = get_field<std::size_t>(doc, "read_ahead", w);
    }
    maybe(doc, "gamma_max", w, c.affect.gamma_max);
    maybe(doc, "gamma_min", w, c.affect.gamma_min);
    maybe(doc, "k_gamma", w, c.affect.k_gamma);
    maybe(doc, "k_zeta", w, c.affect.k_zeta);
    maybe(doc, "zeta_min", w, c.affect.zeta_min);
    maybe(doc, "zeta_max", w, c.affect.zeta_max);
    maybe(doc, "beta", w, c.affect.beta);
    maybe(doc, "theta_entropy", w, c.theta_entropy);
    maybe(doc, "theta_gamma", w, c.theta_gamma);
    maybe(doc, "hesitation_pause_ms", w, c.hesitation_pause_ms);
    maybe(doc, "revision", w, c.revision);
    maybe(doc, "sample", w, c.sample);
    maybe(doc, "branching_limit", w, c.branching_limit);
    maybe(doc, "log_pref", w, c.prefs.log_pref);
    maybe(doc, "progress_bonus", w, c.prefs.progress_bonus);
    maybe(doc, "inconsistency_penalty", w, c.prefs.inconsistency_penalty);
    maybe(doc, "read_cost", w, c.prefs.read_cost);
    maybe(doc, "pause_cost", w, c.prefs.pause_cost);
    maybe(doc, "consult_cost", w, c.prefs.consult_cost);
    if (doc.contains("timing")) {
        const json& t = doc.at("timing");
        const std::string tw = "agent.timing";
        reject_unknown(t, tw, {"fixation_ms", "keystroke_ms_per_char", "delete_ms_per_char", "consult_ms"});
        maybe(t, "fixation_ms", tw, c.timing.fixation_ms);
        maybe(t, "keystroke_ms_per_char", tw, c.timing.keystroke_ms_per_char);
        maybe(t, "delete_ms_per_char", tw, c.timing.delete_ms_per_char);
        maybe(t, "consult_ms", tw, c.timing.consult_ms);
    }
    c.validate();
    return c;
}

AgentConfig load_agent_config(const std::filesystem::path& path) {
    try {
        return parse_agent_config(read_text_file(path));
    } catch (const ValidationError& e) {
        throw ValidationError(path.string() + ": " + e.what());
    }
}

void RunConfig::validate() const {
    if (task_file.empty()) throw ValidationError("run: task file required");
    if (seeds.empty()) throw ValidationError("run: at least one seed required");
    if (max_steps < 1) throw ValidationError("run: max_steps must be >= 1");
    agent.validate();
}

}  // namespace enact

#include "enact/task_model.hpp"

#include <algorithm>
#include <cmath>
#include <set>

#include "enact/error.hpp"

namespace enact {

namespace {

std::string chunk_name(ChunkId id) { return "chunk " + std::to_string(id); }

// Validates that slots places every table chunk exactly once.
void check_permutation(const ChunkTable& table, const LabeledSlots& o) {
    const std::string where = "ordering " + o.label + ": ";
    std::set<ChunkId> seen;
    for (ChunkId c : o.slots) {
        if (!table.contains(c)) throw ValidationError(where + "unknown " + chunk_name(c));
        if (!seen.insert(c).second) throw ValidationError(where + chunk_name(c) + " placed twice");
    }
    for (ChunkId c : table.ids()) {
        if (!seen.count(c)) throw ValidationError(where + chunk_name(c) + " missing");
    }
}

}  // namespace

ChunkTable::ChunkTable(std::vector<Chunk> chunks, std::vector<ChunkId> source_order)
    : chunks_(std::move(chunks)), source_order_(std::move(source_order)) {
    std::set<ChunkId> ids;
    for (const auto& c : chunks_) {
        if (!ids.insert(c.id).second) throw ValidationError("chunk table: duplicate id " + std::to_string(c.id));
        if (c.kind == ChunkKind::content && (c.source_text.empty() || c.target_text.empty()))
            throw ValidationError("chunk table: content " + chunk_name(c.id) + " needs source and target text");
    }
    auto content = content_ids();
    std::vector<ChunkId> order = source_order_;
    std::sort(order.begin(), order.end());
    std::sort(content.begin(), content.end());
    if (order != content)
        throw ValidationError("chunk table: source_order must be a permutation of the content chunk ids");
}

bool ChunkTable::contains(ChunkId id) const {
    return std::any_of(chunks_.begin(), chunks_.end(), [id](const Chunk& c) { return c.id == id; });
}

const Chunk& ChunkTable::at(ChunkId id) const {
    for (const auto& c : chunks_)
        if (c.id == id) return c;
    throw LookupError("unknown " + chunk_name(id));
}

std::vector<ChunkId> ChunkTable::ids() const {
    std::vector<ChunkId> out;
    out.reserve(chunks_.size());
    for (const auto& c : chunks_) out.push_back(c.id);
    return out;
}

std::vector<ChunkId> ChunkTable::content_ids() const {
    std::vector<ChunkId> out;
    for (const auto& c : chunks_)
        if (c.kind == ChunkKind::content) out.push_back(c.id);
    return out;
}

ChunkId CandidateOrdering::chunk_at(Slot slot) const {
    if (slot < 1 || static_cast<std::size_t>(slot) > slots.size())
        throw LookupError("slot " + std::to_string(slot) + " out of range");
    return slots[static_cast<std::size_t>(slot - 1)];
}

Slot CandidateOrdering::position_of(ChunkId chunk) const {
    auto it = std::find(slots.begin(), slots.end(), chunk);
    if (it == slots.end()) throw LookupError(chunk_name(chunk) + " not placed by " + label);
    return static_cast<Slot>(std::distance(slots.begin(), it)) + 1;
}

bool CandidateOrdering::places(ChunkId chunk, Slot slot) const {
    return slot >= 1 && static_cast<std::size_t>(slot) <= slots.size() &&
           slots[static_cast<std::size_t>(slot - 1)] == chunk;
}

CandidateSpace::CandidateSpace(ChunkTable table, std::vector<CandidateOrdering> orderings, Categorical prior)
    : table_(std::move(table)), orderings_(std::move(orderings)), prior_(std::move(prior)) {
    if (orderings_.empty()) throw ValidationError("candidate space: no orderings");
    if (prior_.size() != orderings_.size())
        throw ValidationError("candidate space: prior size does not match ordering count");
    for (const auto& o : orderings_) check_permutation(table_, {o.label, o.slots});
}

std::optional<OrderingIndex> CandidateSpace::find(const std::string& label) const {
    for (OrderingIndex i = 0; i < orderings_.size(); ++i)
        if (orderings_[i].label == label) return i;
    return std::nullopt;
}

OrderingIndex CandidateSpace::index_of(const std::string& label) const {
    if (auto i = find(label)) return *i;
    throw LookupError("unknown ordering " + label);
}

CandidateSpace CandidateSpace::with_prior(Categorical prior) const {
    return CandidateSpace(table_, orderings_, std::move(prior));
}

CandidateSpace build_candidate_space(const ChunkTable& table,
                                     const std::vector<std::vector<ChunkId>>& orderings) {
    std::vector<LabeledSlots> labeled;
    labeled.reserve(orderings.size());
    for (std::size_t i = 0; i < orderings.size(); ++i)
        labeled.push_back({"TT" + std::to_string(i), orderings[i]});
    return build_candidate_space(table, labeled);
}

CandidateSpace build_candidate_space(const ChunkTable& table, const std::vector<LabeledSlots>& orderings) {
    if (orderings.empty()) throw ValidationError("candidate space: no orderings");
    std::vector<CandidateOrdering> out;
    std::set<std::string> labels;
    for (const auto& o : orderings) {
        check_permutation(table, o);
        for (const auto& prev : out) {
            if (prev.slots == o.slots)
                throw DuplicationError("ordering " + o.label + " duplicates " + prev.label);
        }
        if (!labels.insert(o.label).second) throw DuplicationError("duplicate ordering label " + o.label);
        out.push_back({o.label, o.slots});
    }
    auto prior = Categorical::uniform(out.size());
    return CandidateSpace(table, std::move(out), std::move(prior));
}

double positional_entropy(const CandidateSpace& space, ChunkId chunk) {
    if (!space.table().contains(chunk)) throw LookupError("unknown " + chunk_name(chunk));
    std::vector<double> by_slot(space.slot_count(), 0.0);
    for (OrderingIndex k = 0; k < space.size(); ++k) {
        const Slot s = space.ordering(k).position_of(chunk);
        by_slot[static_cast<std::size_t>(s - 1)] += space.prior()[k];
    }
    return shannon_entropy(Categorical::from_weights(std::move(by_slot)));
}

double lexical_entropy(const CandidateSpace& space, ChunkId chunk) {
    const auto& text = space.table().at(chunk).target_text;
    // One realization per chunk table; histogram kept general for clarity.
    std::map<std::string, double> mass;
    for (OrderingIndex k = 0; k < space.size(); ++k) mass[text] += space.prior()[k];
    std::vector<double> p;
    for (const auto& [_, m] : mass) p.push_back(m);
    return shannon_entropy(Categorical::from_weights(std::move(p)));
}

double ordering_entropy(const CandidateSpace& space) { return shannon_entropy(space.prior()); }

double placement_likelihood(const CandidateOrdering& ordering, ChunkId chunk, Slot slot) {
    if (slot < 1 || static_cast<std::size_t>(slot) > ordering.slot_count())
        throw LookupError("slot " + std::to_string(slot) + " out of range");
    return ordering.places(chunk, slot) ? 1.0 : 0.0;
}

ReadingEvidenceModel::ReadingEvidenceModel(std::size_t ordering_count, std::map<ChunkId, double> reliability)
    : ordering_count_(ordering_count), reliability_(std::move(reliability)) {
    if (ordering_count_ == 0) throw ValidationError("reading model: no orderings");
    for (const auto& [c, r] : reliability_) {
        if (!(r >= 0.0 && r <= 1.0))
            throw ValidationError("reading model: reliability of " + chunk_name(c) + " outside [0,1]");
    }
}

ReadingEvidenceModel ReadingEvidenceModel::with_defaults(const CandidateSpace& space) {
    std::map<ChunkId, double> r;
    for (const auto& c : space.table().chunks())
        r[c.id] = c.kind == ChunkKind::content ? kDefaultContentReliability : kDefaultPunctuationReliability;
    return ReadingEvidenceModel(space.size(), std::move(r));
}

double ReadingEvidenceModel::reliability(ChunkId chunk) const {
    auto it = reliability_.find(chunk);
    if (it == reliability_.end()) throw LookupError("no reading reliability for " + chunk_name(chunk));
    return it->second;
}

double ReadingEvidenceModel::likelihood(ChunkId chunk, OrderingIndex cue, OrderingIndex ordering) const {
    if (cue >= ordering_count_ || ordering >= ordering_count_) throw LookupError("cue or ordering out of range");
    const double n = static_cast<double>(ordering_count_);
    const double r = reliability(chunk);
    if (r <= 0.5 || ordering_count_ == 1) return 1.0 / n;
    return cue == ordering ? r : (1.0 - r) / (n - 1.0);
}

std::vector<double> ReadingEvidenceModel::cue_likelihoods(ChunkId chunk, OrderingIndex cue) const {
    std::vector<double> out(ordering_count_);
    for (OrderingIndex k = 0; k < ordering_count_; ++k) out[k] = likelihood(chunk, cue, k);
    return out;
}

double reading_likelihood(const ReadingEvidenceModel& model, ChunkId chunk, OrderingIndex cue,
                          OrderingIndex ordering) {
    return model.likelihood(chunk, cue, ordering);
}

}  // namespace enact

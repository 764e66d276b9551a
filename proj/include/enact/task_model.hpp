#pragma once

// Translation task model: chunks, candidate target orderings and the cue
// channel that reading a source chunk opens onto those orderings.

#include <cstddef>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "enact/categorical.hpp"

namespace enact {

using ChunkId = int;
// Target positions are 1-based throughout, matching how orderings are written.
using Slot = int;
using OrderingIndex = std::size_t;

enum class ChunkKind { content, punctuation };

struct Chunk {
    ChunkId id = 0;
    std::string source_text;
    std::string target_text;
    ChunkKind kind = ChunkKind::content;
};

class ChunkTable {
public:
    ChunkTable() = default;
    // Validates: unique ids, non-empty texts on content chunks, source_order a
    // permutation of the content ids.
    ChunkTable(std::vector<Chunk> chunks, std::vector<ChunkId> source_order);

    const std::vector<Chunk>& chunks() const noexcept { return chunks_; }
    const std::vector<ChunkId>& source_order() const noexcept { return source_order_; }

    bool contains(ChunkId id) const;
    const Chunk& at(ChunkId id) const;  // LookupError when absent
    std::vector<ChunkId> ids() const;   // table order
    std::vector<ChunkId> content_ids() const;
    std::size_t size() const noexcept { return chunks_.size(); }

private:
    std::vector<Chunk> chunks_;
    std::vector<ChunkId> source_order_;
};

struct CandidateOrdering {
    std::string label;
    std::vector<ChunkId> slots;  // slots[0] is target position 1

    std::size_t slot_count() const noexcept { return slots.size(); }
    ChunkId chunk_at(Slot slot) const;
    // 1-based position of the chunk; LookupError when the chunk is not placed.
    Slot position_of(ChunkId chunk) const;
    bool places(ChunkId chunk, Slot slot) const;
};

struct LabeledSlots {
    std::string label;
    std::vector<ChunkId> slots;
};

class CandidateSpace {
public:
    CandidateSpace(ChunkTable table, std::vector<CandidateOrdering> orderings, Categorical prior);

    const ChunkTable& table() const noexcept { return table_; }
    const std::vector<CandidateOrdering>& orderings() const noexcept { return orderings_; }
    const CandidateOrdering& ordering(OrderingIndex i) const { return orderings_.at(i); }
    const Categorical& prior() const noexcept { return prior_; }
    std::size_t size() const noexcept { return orderings_.size(); }
    std::size_t slot_count() const noexcept { return table_.size(); }

    std::optional<OrderingIndex> find(const std::string& label) const;
    OrderingIndex index_of(const std::string& label) const;  // LookupError

    CandidateSpace with_prior(Categorical prior) const;

private:
    ChunkTable table_;
    std::vector<CandidateOrdering> orderings_;
    Categorical prior_;
};

// Uniform prior. Labels default to TT0, TT1, ... when built from bare slot lists.
// Throws ValidationError naming the ordering on a non-permutation and
// DuplicationError on a repeated slot list.
CandidateSpace build_candidate_space(const ChunkTable& table,
                                     const std::vector<std::vector<ChunkId>>& orderings);
CandidateSpace build_candidate_space(const ChunkTable& table, const std::vector<LabeledSlots>& orderings);

// Entropy (bits) of the chunk's target position under the space's prior.
double positional_entropy(const CandidateSpace& space, ChunkId chunk);

// Entropy (bits) of the chunk's target realization across orderings. Every
// ordering draws its text from the shared chunk table, so this is 0 unless
// the table itself changes between candidates.
double lexical_entropy(const CandidateSpace& space, ChunkId chunk);

// Entropy (bits) of the space's prior over orderings.
double ordering_entropy(const CandidateSpace& space);

// 1 if the ordering places chunk at slot, else 0.
double placement_likelihood(const CandidateOrdering& ordering, ChunkId chunk, Slot slot);

// Symmetric noisy cue channel. Reading a chunk with reliability r > 0.5 emits
// the label of the ordering that drives it with probability r and one of the
// other labels uniformly otherwise. r <= 0.5 is at or below chance and the cue
// is uniform over all labels.
class ReadingEvidenceModel {
public:
    static constexpr double kDefaultContentReliability = 0.8;
    static constexpr double kDefaultPunctuationReliability = 0.5;

    ReadingEvidenceModel(std::size_t ordering_count, std::map<ChunkId, double> reliability);
    // Defaults per chunk kind.
    static ReadingEvidenceModel with_defaults(const CandidateSpace& space);

    std::size_t ordering_count() const noexcept { return ordering_count_; }
    double reliability(ChunkId chunk) const;  // LookupError
    bool informative(ChunkId chunk) const { return reliability(chunk) > 0.5; }
    const std::map<ChunkId, double>& reliabilities() const noexcept { return reliability_; }

    // P(cue | ordering) after reading chunk.
    double likelihood(ChunkId chunk, OrderingIndex cue, OrderingIndex ordering) const;
    // Likelihood of a fixed cue across all orderings.
    std::vector<double> cue_likelihoods(ChunkId chunk, OrderingIndex cue) const;

private:
    std::size_t ordering_count_;
    std::map<ChunkId, double> reliability_;
};

double reading_likelihood(const ReadingEvidenceModel& model, ChunkId chunk, OrderingIndex cue,
                          OrderingIndex ordering);

}  // namespace enact

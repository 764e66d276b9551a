#pragma once

// The generative process: source chunks, the target buffer being produced and
// the latent ordering that drives what reading reveals.

#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <random>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "enact/action.hpp"
#include "enact/task_model.hpp"

namespace enact {

// mt19937_64 output is fixed by the standard; sampling below avoids the
// implementation-defined standard distributions so traces replay bit-exactly.
using Rng = std::mt19937_64;

double uniform01(Rng& rng);
std::size_t sample_index(std::span<const double> probs, Rng& rng);

inline constexpr std::string_view kGapMarker = "□";

struct ExternalState {
    std::shared_ptr<const CandidateSpace> space;
    std::vector<std::optional<ChunkId>> buffer;  // buffer[0] is slot 1
    OrderingIndex latent = 0;
    // Per-chunk override of the ordering that drives that chunk's cues.
    std::map<ChunkId, OrderingIndex> cue_drivers;

    static ExternalState initial(std::shared_ptr<const CandidateSpace> space, OrderingIndex latent,
                                 std::map<ChunkId, OrderingIndex> cue_drivers = {});

    const ChunkTable& table() const { return space->table(); }
    std::size_t slot_count() const noexcept { return buffer.size(); }
    std::optional<ChunkId> at(Slot slot) const;
    std::optional<Slot> slot_of(ChunkId chunk) const;
    OrderingIndex cue_driver(ChunkId chunk) const;
    bool complete() const;
};

struct Transition {
    ExternalState state;
    Observation observation;
};

// Pure: the input state is never modified. TypeChunk into an occupied slot or
// of a chunk already in the buffer throws OccupancyError; references to
// unknown chunks or slots throw LookupError.
Transition apply_action(const ExternalState& state, const Action& action, const ReadingEvidenceModel& reading,
                        Rng& rng);

bool is_complete(const ExternalState& state);

// Placed target texts in slot order; empty slots render as kGapMarker.
std::string render_target(const ExternalState& state);

// Target text of a full ordering, as render_target would show it once complete.
std::string compose_ordering(const CandidateSpace& space, OrderingIndex ordering);

}  // namespace enact

#include "enact/environment.hpp"

#include <algorithm>

#include "enact/error.hpp"

namespace enact {

double uniform01(Rng& rng) { return static_cast<double>(rng() >> 11) * 0x1.0p-53; }

std::size_t sample_index(std::span<const double> probs, Rng& rng) {
    const double u = uniform01(rng);
    double acc = 0.0;
    std::size_t last_positive = 0;
    for (std::size_t i = 0; i < probs.size(); ++i) {
        if (probs[i] <= 0.0) continue;
        acc += probs[i];
        last_positive = i;
        if (u < acc) return i;
    }
    return last_positive;
}

ExternalState ExternalState::initial(std::shared_ptr<const CandidateSpace> space, OrderingIndex latent,
                                     std::map<ChunkId, OrderingIndex> cue_drivers) {
    if (!space) throw ValidationError("environment: no candidate space");
    if (latent >= space->size()) throw LookupError("environment: latent ordering out of range");
    for (const auto& [chunk, driver] : cue_drivers) {
        if (!space->table().contains(chunk)) throw LookupError("environment: cue driver for unknown chunk");
        if (driver >= space->size()) throw LookupError("environment: cue driver ordering out of range");
    }
    ExternalState s;
    s.buffer.assign(space->slot_count(), std::nullopt);
    s.space = std::move(space);
    s.latent = latent;
    s.cue_drivers = std::move(cue_drivers);
    return s;
}

std::optional<ChunkId> ExternalState::at(Slot slot) const {
    if (slot < 1 || static_cast<std::size_t>(slot) > buffer.size())
        throw LookupError("slot " + std::to_string(slot) + " out of range");
    return buffer[static_cast<std::size_t>(slot - 1)];
}

std::optional<Slot> ExternalState::slot_of(ChunkId chunk) const {
    for (std::size_t i = 0; i < buffer.size(); ++i)
        if (buffer[i] == chunk) return static_cast<Slot>(i + 1);
    return std::nullopt;
}

OrderingIndex ExternalState::cue_driver(ChunkId chunk) const {
    auto it = cue_drivers.find(chunk);
    return it == cue_drivers.end() ? latent : it->second;
}

bool ExternalState::complete() const {
    return std::all_of(buffer.begin(), buffer.end(), [](const auto& c) { return c.has_value(); });
}

Transition apply_action(const ExternalState& state, const Action& action, const ReadingEvidenceModel& reading,
                        Rng& rng) {
    ExternalState next = state;
    switch (kind_of(action)) {
        case ActionKind::fixate_source: {
            const ChunkId c = std::get<FixateSource>(action).chunk;
            state.table().at(c);
            const OrderingIndex driver = state.cue_driver(c);
            std::vector<double> cue_probs(reading.ordering_count());
            for (OrderingIndex cue = 0; cue < cue_probs.size(); ++cue) cue_probs[cue] = reading.likelihood(c, cue, driver);
            return {std::move(next), OrderingCue{c, sample_index(cue_probs, rng)}};
        }
        case ActionKind::type_chunk: {
            const auto& t = std::get<TypeChunk>(action);
            state.table().at(t.chunk);
            if (state.at(t.slot)) throw OccupancyError("slot " + std::to_string(t.slot) + " is occupied");
            if (state.slot_of(t.chunk)) throw OccupancyError("chunk " + std::to_string(t.chunk) + " already placed");
            next.buffer[static_cast<std::size_t>(t.slot - 1)] = t.chunk;
            return {std::move(next), PlacementFeedback{t.slot, t.chunk}};
        }
        case ActionKind::delete_slot: {
            const Slot s = std::get<Delete>(action).slot;
            state.at(s);
            next.buffer[static_cast<std::size_t>(s - 1)].reset();
            return {std::move(next), PlacementFeedback{s, std::nullopt}};
        }
        case ActionKind::fixate_target: {
            const Slot s = std::get<FixateTarget>(action).slot;
            return {std::move(next), TargetGlimpse{s, state.at(s)}};
        }
        case ActionKind::pause:
        case ActionKind::consult: break;
    }
    return {std::move(next), NullObservation{}};
}

bool is_complete(const ExternalState& state) { return state.complete(); }

std::string render_target(const ExternalState& state) {
    std::string out;
    for (const auto& c : state.buffer) out += c ? state.table().at(*c).target_text : std::string(kGapMarker);
    return out;
}

std::string compose_ordering(const CandidateSpace& space, OrderingIndex ordering) {
    std::string out;
    for (ChunkId c : space.ordering(ordering).slots) out += space.table().at(c).target_text;
    return out;
}

}  // namespace enact

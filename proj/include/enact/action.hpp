#pragma once

// Active and sensory states crossing the agent/environment boundary.

#include <optional>
#include <string>
#include <string_view>
#include <variant>

#include "enact/task_model.hpp"

namespace enact {

struct FixateSource {
    ChunkId chunk = 0;
    bool operator==(const FixateSource&) const = default;
};

struct FixateTarget {
    Slot slot = 1;
    bool operator==(const FixateTarget&) const = default;
};

struct TypeChunk {
    ChunkId chunk = 0;
    Slot slot = 1;
    bool operator==(const TypeChunk&) const = default;
};

struct Delete {
    Slot slot = 1;
    bool operator==(const Delete&) const = default;
};

struct Pause {
    int duration_ms = 800;
    bool operator==(const Pause&) const = default;
};

// Reserved for dictionary/reference lookups; the environment answers with Null.
struct Consult {
    int resource = 0;
    bool operator==(const Consult&) const = default;
};

using Action = std::variant<FixateSource, FixateTarget, TypeChunk, Delete, Pause, Consult>;

enum class ActionKind { fixate_source, fixate_target, type_chunk, delete_slot, pause, consult };

ActionKind kind_of(const Action& a);
std::string_view kind_name(ActionKind k);
// Compact label, e.g. "read 2", "type 4@3", "delete @1", "pause".
std::string describe(const Action& a);
// Reading, target fixation, pausing and consulting gather or wait for evidence.
bool is_epistemic(const Action& a);

struct OrderingCue {
    ChunkId chunk = 0;
    OrderingIndex cue = 0;
    bool operator==(const OrderingCue&) const = default;
};

struct PlacementFeedback {
    Slot slot = 1;
    std::optional<ChunkId> chunk;  // empty after a deletion
    bool operator==(const PlacementFeedback&) const = default;
};

struct TargetGlimpse {
    Slot slot = 1;
    std::optional<ChunkId> chunk;
    bool operator==(const TargetGlimpse&) const = default;
};

struct NullObservation {
    bool operator==(const NullObservation&) const = default;
};

using Observation = std::variant<OrderingCue, PlacementFeedback, TargetGlimpse, NullObservation>;

std::string describe(const Observation& o);

}  // namespace enact

#include "enact/action.hpp"

namespace enact {

namespace {
template <class... Ts>
struct overloaded : Ts... {
    using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

std::string opt_chunk(const std::optional<ChunkId>& c) { return c ? std::to_string(*c) : std::string("empty"); }
}  // namespace

ActionKind kind_of(const Action& a) {
    return std::visit(overloaded{
                          [](const FixateSource&) { return ActionKind::fixate_source; },
                          [](const FixateTarget&) { return ActionKind::fixate_target; },
                          [](const TypeChunk&) { return ActionKind::type_chunk; },
                          [](const Delete&) { return ActionKind::delete_slot; },
                          [](const Pause&) { return ActionKind::pause; },
                          [](const Consult&) { return ActionKind::consult; },
                      },
                      a);
}

std::string_view kind_name(ActionKind k) {
    switch (k) {
        case ActionKind::fixate_source: return "fixate_source";
        case ActionKind::fixate_target: return "fixate_target";
        case ActionKind::type_chunk: return "type";
        case ActionKind::delete_slot: return "delete";
        case ActionKind::pause: return "pause";
        case ActionKind::consult: return "consult";
    }
    return "unknown";
}

std::string describe(const Action& a) {
    return std::visit(overloaded{
                          [](const FixateSource& x) { return "read " + std::to_string(x.chunk); },
                          [](const FixateTarget& x) { return "look @" + std::to_string(x.slot); },
                          [](const TypeChunk& x) {
                              return "type " + std::to_string(x.chunk) + "@" + std::to_string(x.slot);
                          },
                          [](const Delete& x) { return "delete @" + std::to_string(x.slot); },
                          [](const Pause&) { return std::string("pause"); },
                          [](const Consult& x) { return "consult " + std::to_string(x.resource); },
                      },
                      a);
}

bool is_epistemic(const Action& a) {
    switch (kind_of(a)) {
        case ActionKind::fixate_source:
        case ActionKind::fixate_target:
        case ActionKind::pause:
        case ActionKind::consult: return true;
        default: return false;
    }
}

std::string describe(const Observation& o) {
    return std::visit(overloaded{
                          [](const OrderingCue& x) {
                              return "cue " + std::to_string(x.chunk) + "->" + std::to_string(x.cue);
                          },
                          [](const PlacementFeedback& x) {
                              return "placed @" + std::to_string(x.slot) + "=" + opt_chunk(x.chunk);
                          },
                          [](const TargetGlimpse& x) {
                              return "glimpse @" + std::to_string(x.slot) + "=" + opt_chunk(x.chunk);
                          },
                          [](const NullObservation&) { return std::string("null"); },
                      },
                      o);
}

}  // namespace enact

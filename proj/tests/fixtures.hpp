#pragma once

#include <memory>
#include <vector>

#include "enact/task_model.hpp"

namespace fixtures {

inline enact::ChunkTable sentence_table() {
    using enact::ChunkKind;
    return enact::ChunkTable(
        {
            {1, "As a result,", "その結果", ChunkKind::content},
            {2, "full-time leaders, bureaucrats, or artisans", "絶対的リーダーや官僚、職人が", ChunkKind::content},
            {3, "are rarely supported", "支持されることは、めったにありませんでした", ChunkKind::content},
            {4, "by hunter-gatherer societies", "狩猟採集民族社会から", ChunkKind::content},
            {0, "", "、", ChunkKind::punctuation},
        },
        {1, 2, 3, 4});
}

inline const std::vector<std::vector<enact::ChunkId>>& six_orderings() {
    static const std::vector<std::vector<enact::ChunkId>> rows = {
        {1, 0, 2, 4, 3}, {2, 1, 0, 4, 3}, {1, 2, 0, 4, 3}, {1, 0, 4, 2, 3}, {1, 4, 0, 2, 3}, {4, 1, 0, 2, 3},
    };
    return rows;
}

inline std::shared_ptr<const enact::CandidateSpace> six_space() {
    return std::make_shared<const enact::CandidateSpace>(enact::build_candidate_space(sentence_table(), six_orderings()));
}

inline constexpr const char* kLinearRendering =
    "その結果、絶対的リーダーや官僚、職人が狩猟採集民族社会から支持されることは、めったにありませんでした";
inline constexpr const char* kReverseRendering =
    "その結果、狩猟採集民族社会から絶対的リーダーや官僚、職人が支持されることは、めったにありませんでした";

}  // namespace fixtures

#pragma once

// Task and agent configuration files (JSON with a schema_version field;
// unknown fields are rejected).

#include <cstdint>
#include <filesystem>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "enact/agent.hpp"
#include "enact/task_model.hpp"

namespace enact {

inline constexpr int kSchemaVersion = 1;

struct Task {
    std::shared_ptr<const CandidateSpace> space;
    ReadingEvidenceModel reading;
    EpisodeSetup setup;
};

// Throws ValidationError naming the offending field (JSON syntax errors carry
// the line and column).
Task parse_task(std::string_view json_text);
Task load_task(const std::filesystem::path& path);

// A preset name plus optional overrides, e.g.
// {"schema_version": 1, "preset": "head_starter", "beta": 0}.
AgentConfig parse_agent_config(std::string_view json_text);
AgentConfig load_agent_config(const std::filesystem::path& path);

struct RunConfig {
    std::filesystem::path task_file;
    AgentConfig agent;
    std::vector<std::uint64_t> seeds;
    std::filesystem::path output_dir;
    std::vector<ExportFormat> formats;
    std::size_t max_steps = 100;

    void validate() const;  // ValidationError
};

std::string read_text_file(const std::filesystem::path& path);  // ValidationError when unreadable

}  // namespace enact

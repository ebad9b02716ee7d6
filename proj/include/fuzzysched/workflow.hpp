#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace fuzzysched {

struct Task {
    std::string id;
    std::size_t index = 0;
    /// Runtime in seconds on the reference (fastest) server.
    double reference_runtime = 0.0;
};

/// Dataset d(from, to). Size 0 still encodes a control dependency.
struct DataDependency {
    std::size_t from = 0;
    std::size_t to = 0;
    std::uint64_t size_bytes = 0;
};

/// DAG workflow. Parallel dependencies between the same ordered pair are
/// merged by summing sizes at construction; the object is immutable afterwards.
class Workflow {
public:
    Workflow() = default;
    Workflow(std::string name, std::vector<Task> tasks, std::vector<DataDependency> edges);

    const std::string& name() const noexcept { return name_; }
    std::size_t size() const noexcept { return tasks_.size(); }
    bool empty() const noexcept { return tasks_.empty(); }

    const std::vector<Task>& tasks() const noexcept { return tasks_; }
    const Task& task(std::size_t i) const { return tasks_.at(i); }
    const std::vector<DataDependency>& edges() const noexcept { return edges_; }

    /// Edge indices entering / leaving task v (only in-range edges).
    std::span<const std::size_t> in_edges(std::size_t v) const { return in_.at(v); }
    std::span<const std::size_t> out_edges(std::size_t v) const { return out_.at(v); }

    bool is_entry(std::size_t v) const { return in_.at(v).empty(); }

private:
    std::string name_;
    std::vector<Task> tasks_;
    std::vector<DataDependency> edges_;
    std::vector<std::vector<std::size_t>> in_;
    std::vector<std::vector<std::size_t>> out_;
};

/// Throws Error(CycleDetected | IndexOutOfRange | NonPositiveRuntime). The
/// cycle message lists a witness cycle by task id.
void validate(const Workflow& w);

/// Kahn order, ties broken by ascending task index. Throws CycleDetected.
std::vector<std::size_t> topological_order(const Workflow& w);

/// Pegasus DAX v3 subset: <job id runtime> with <uses file|name size link>
/// children and <child ref><parent ref/></child> dependencies.
Workflow parse_dax(std::string_view document, std::string fallback_name = "workflow");
Workflow load_dax(const std::filesystem::path& path);

/// Writes a DAX document with one file per dependency; parse_dax inverts it.
std::string write_dax(const Workflow& w);

/// Line-oriented test fixture: `task <id> <runtime>` and `edge <from-id> <to-id> <bytes>`.
/// Blank lines and `#` comments are ignored. An optional `name <name>` line sets the name.
Workflow parse_fixture(std::string_view text);
std::string write_fixture(const Workflow& w);

/// Loads DAX or fixture text depending on the file contents.
Workflow load_workflow(const std::filesystem::path& path);

}  // namespace fuzzysched

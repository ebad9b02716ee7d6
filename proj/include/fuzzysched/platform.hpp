#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "fuzzysched/tfn.hpp"
#include "fuzzysched/workflow.hpp"

namespace fuzzysched {

enum class Tier : int { Cloud = 0, Edge = 1 };

inline constexpr double kBytesPerMb = 1e6;
inline constexpr double kBytesPerGb = 1e9;

struct Server {
    std::size_t index = 0;
    std::string id;
    double capacity_ratio = 1.0;  // relative to the reference server
    double cost_per_hour = 0.0;   // $/h
    double billing_quantum = 60.0;  // seconds
    Tier tier = Tier::Cloud;
};

struct BandwidthClass {
    Tier a = Tier::Cloud;
    Tier b = Tier::Cloud;
    double mb_per_sec = 1.0;
    double dollars_per_gb = 0.0;
};

/// Unordered tier pair -> dense slot in [0, 3): cloud-cloud, cloud-edge, edge-edge.
constexpr std::size_t tier_pair_slot(Tier a, Tier b) noexcept {
    return static_cast<std::size_t>(a) + static_cast<std::size_t>(b);
}
inline constexpr std::size_t kTierPairs = 3;

struct Platform {
    std::vector<Server> servers;
    std::array<BandwidthClass, kTierPairs> classes{};

    std::size_t size() const noexcept { return servers.size(); }
    const BandwidthClass& link(Tier a, Tier b) const noexcept { return classes[tier_pair_slot(a, b)]; }
    const BandwidthClass& link(std::size_t r, std::size_t t) const {
        return link(servers.at(r).tier, servers.at(t).tier);
    }

    /// Throws ConfigInvalid on non-positive ratios/quanta/rates, negative costs,
    /// or a missing bandwidth class.
    void validate() const;
};

/// Everything the platform config file carries.
struct PlatformConfig {
    Platform platform;
    FuzzificationParams fuzz;
    double quantum = 60.0;
};

/// Crisp transfer time in seconds: (bytes / 1e6) / rate.
double transfer_time_crisp(std::uint64_t size_bytes, const BandwidthClass& link);

/// Crisp transfer cost in dollars: dollars_per_gb * bytes / 1e9.
double transfer_cost_crisp(std::uint64_t size_bytes, const BandwidthClass& link);

/// Three cloud servers (ratios 1/2, 1/4, 1) and two edge servers (1/8, 1/10),
/// cost proportional to capacity with the reference at 15.5 $/h, and the
/// tier-pair bandwidth table (2.5 MB/s 0.4 $/GB, 1.0 MB/s 0.16 $/GB, 12.5 MB/s 0.8 $/GB).
Platform build_reference_platform(double quantum = 60.0);
PlatformConfig reference_platform_config();

PlatformConfig parse_platform_config(const std::string& json_text);
PlatformConfig load_platform_config(const std::filesystem::path& path);
std::string platform_config_to_json(const PlatformConfig& cfg);

/// Crisp (modal) view of a workflow on a platform, used by HEFT.
struct CrispInstance {
    Workflow workflow;
    Platform platform;
    /// processing[v * |S| + s] seconds
    std::vector<double> processing;
    /// transfer[e * kTierPairs + tier pair slot] seconds between distinct servers
    std::vector<double> transfer;

    double processing_time(std::size_t v, std::size_t s) const {
        return processing[v * platform.size() + s];
    }
    /// Zero on the same server.
    double transfer_time(std::size_t edge, std::size_t from_server, std::size_t to_server) const;
};

CrispInstance build_crisp_instance(const Workflow& w, const Platform& p);

/// Fuzzified problem instance. All tables are drawn once at construction and
/// the object is immutable afterwards, so fitness is a pure function of the particle.
class ProblemInstance {
public:
    ProblemInstance() = default;

    const Workflow& workflow() const noexcept { return workflow_; }
    const Platform& platform() const noexcept { return platform_; }
    std::size_t num_tasks() const noexcept { return workflow_.size(); }
    std::size_t num_servers() const noexcept { return platform_.size(); }

    const Tfn& processing(std::size_t v, std::size_t s) const {
        return processing_[v * num_servers() + s];
    }
    /// (0,0,0) when from == to.
    const Tfn& transfer_time(std::size_t edge, std::size_t from, std::size_t to) const {
        return transfer_time_[(edge * num_servers() + from) * num_servers() + to];
    }
    /// Zero when from == to.
    Tfn transfer_cost(std::size_t edge, std::size_t from, std::size_t to) const;

    double deadline() const noexcept { return deadline_; }
    const FuzzificationParams& fuzz() const noexcept { return fuzz_; }
    double eta() const noexcept { return fuzz_.eta; }
    std::uint64_t seed() const noexcept { return seed_; }
    bool crisp_transfer_cost() const noexcept { return crisp_transfer_cost_; }

    /// Copy with a different deadline (seconds).
    ProblemInstance with_deadline(double deadline) const;
    /// Copy with every server cost and transfer price multiplied by k > 0.
    ProblemInstance with_scaled_costs(double k) const;

    friend ProblemInstance build_problem_instance(const Workflow&, const Platform&,
                                                  const FuzzificationParams&, double, std::uint64_t,
                                                  bool);

private:
    Workflow workflow_;
    Platform platform_;
    std::vector<Tfn> processing_;
    std::vector<Tfn> transfer_time_;
    std::vector<Tfn> transfer_cost_;  // per edge * kTierPairs
    double deadline_ = 0.0;
    FuzzificationParams fuzz_;
    std::uint64_t seed_ = 0;
    bool crisp_transfer_cost_ = false;
};

/// Processing time of v on s is reference_runtime / capacity_ratio; transfer
/// times come from the tier-pair class; all are fuzzified once with a stream
/// derived from `seed`. Every server's quantum is set to `quantum`. The
/// deadline is left at 0 (see derive_deadline).
ProblemInstance build_problem_instance(const Workflow& w, const Platform& p,
                                       const FuzzificationParams& fuzz, double quantum,
                                       std::uint64_t seed, bool crisp_transfer_cost = false);

}  // namespace fuzzysched

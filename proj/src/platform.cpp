#include "fuzzysched/platform.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

#include <nlohmann/json.hpp>

#include "fuzzysched/error.hpp"

namespace fuzzysched {

using nlohmann::json;

namespace {

enum StreamTag : std::uint64_t { kProcessingStream = 1, kTransferTimeStream = 2, kTransferCostStream = 3 };

Tier parse_tier(const json& j) {
    if (j.is_number_integer()) {
        const int v = j.get<int>();
        if (v == 0) return Tier::Cloud;
        if (v == 1) return Tier::Edge;
    } else if (j.is_string()) {
        const auto s = j.get<std::string>();
        if (s == "cloud" || s == "Cloud") return Tier::Cloud;
        if (s == "edge" || s == "Edge") return Tier::Edge;
    }
    throw Error(ErrorKind::ConfigInvalid, "tier must be cloud|edge|0|1, got " + j.dump());
}

const char* tier_name(Tier t) { return t == Tier::Cloud ? "cloud" : "edge"; }

}  // namespace

void Platform::validate() const {
    if (servers.empty()) {
        throw Error(ErrorKind::ConfigInvalid, "platform has no servers");
    }
    for (const auto& s : servers) {
        if (!(s.capacity_ratio > 0.0) || !(s.cost_per_hour >= 0.0) || !(s.billing_quantum > 0.0)) {
            throw Error(ErrorKind::ConfigInvalid, "server " + s.id + " has invalid ratio/cost/quantum");
        }
    }
    for (const auto& c : classes) {
        if (!(c.mb_per_sec > 0.0) || !(c.dollars_per_gb >= 0.0)) {
            throw Error(ErrorKind::ConfigInvalid, "bandwidth class needs rate > 0 and cost >= 0");
        }
    }
}

double transfer_time_crisp(std::uint64_t size_bytes, const BandwidthClass& link) {
    if (size_bytes == 0) return 0.0;
    return (static_cast<double>(size_bytes) / kBytesPerMb) / link.mb_per_sec;
}

double transfer_cost_crisp(std::uint64_t size_bytes, const BandwidthClass& link) {
    return link.dollars_per_gb * (static_cast<double>(size_bytes) / kBytesPerGb);
}

Platform build_reference_platform(double quantum) {
    constexpr double kReferenceCost = 15.5;
    struct Spec {
        const char* id;
        double ratio;
        Tier tier;
    };
    constexpr Spec specs[] = {
        {"s1", 1.0 / 2.0, Tier::Cloud}, {"s2", 1.0 / 4.0, Tier::Cloud}, {"s3", 1.0, Tier::Cloud},
        {"s4", 1.0 / 8.0, Tier::Edge},  {"s5", 1.0 / 10.0, Tier::Edge},
    };
    Platform p;
    for (const auto& s : specs) {
        p.servers.push_back({p.servers.size(), s.id, s.ratio, kReferenceCost * s.ratio, quantum, s.tier});
    }
    p.classes[tier_pair_slot(Tier::Cloud, Tier::Cloud)] = {Tier::Cloud, Tier::Cloud, 2.5, 0.4};
    p.classes[tier_pair_slot(Tier::Cloud, Tier::Edge)] = {Tier::Cloud, Tier::Edge, 1.0, 0.16};
    p.classes[tier_pair_slot(Tier::Edge, Tier::Edge)] = {Tier::Edge, Tier::Edge, 12.5, 0.8};
    return p;
}

PlatformConfig reference_platform_config() {
    PlatformConfig cfg;
    cfg.platform = build_reference_platform(cfg.quantum);
    return cfg;
}

PlatformConfig parse_platform_config(const std::string& json_text) {
    PlatformConfig cfg = reference_platform_config();
    json j;
    try {
        j = json::parse(json_text);
    } catch (const json::exception& e) {
        throw Error(ErrorKind::ConfigInvalid, e.what());
    }
    try {
        cfg.quantum = j.value("quantum", cfg.quantum);
        if (j.contains("fuzzification")) {
            const auto& f = j.at("fuzzification");
            cfg.fuzz.delta1 = f.value("delta1", cfg.fuzz.delta1);
            cfg.fuzz.delta2 = f.value("delta2", cfg.fuzz.delta2);
            cfg.fuzz.eta = f.value("eta", cfg.fuzz.eta);
        }
        if (j.contains("servers")) {
            cfg.platform.servers.clear();
            for (const auto& s : j.at("servers")) {
                Server srv;
                srv.index = cfg.platform.servers.size();
                srv.id = s.value("id", "s" + std::to_string(srv.index + 1));
                srv.tier = parse_tier(s.at("tier"));
                srv.capacity_ratio = s.at("capacityRatio").get<double>();
                srv.cost_per_hour = s.at("costPerHour").get<double>();
                cfg.platform.servers.push_back(srv);
            }
        }
        if (j.contains("bandwidth")) {
            std::array<bool, kTierPairs> seen{};
            for (const auto& b : j.at("bandwidth")) {
                const auto& tiers = b.at("tiers");
                if (!tiers.is_array() || tiers.size() != 2) {
                    throw Error(ErrorKind::ConfigInvalid, "bandwidth.tiers must hold two tiers");
                }
                BandwidthClass c{parse_tier(tiers[0]), parse_tier(tiers[1]), b.at("mbPerSec").get<double>(),
                                 b.at("dollarsPerGB").get<double>()};
                const auto slot = tier_pair_slot(c.a, c.b);
                cfg.platform.classes[slot] = c;
                seen[slot] = true;
            }
            for (bool s : seen) {
                if (!s) throw Error(ErrorKind::ConfigInvalid, "bandwidth table must cover all tier pairs");
            }
        }
    } catch (const json::exception& e) {
        throw Error(ErrorKind::ConfigInvalid, e.what());
    }
    if (!(cfg.quantum > 0.0)) {
        throw Error(ErrorKind::ConfigInvalid, "quantum must be > 0");
    }
    for (auto& s : cfg.platform.servers) s.billing_quantum = cfg.quantum;
    cfg.platform.validate();
    try {
        cfg.fuzz.validate();
    } catch (const Error& e) {
        throw Error(ErrorKind::ConfigInvalid, e.what());
    }
    return cfg;
}

PlatformConfig load_platform_config(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) {
        throw Error(ErrorKind::FileNotFound, path.string());
    }
    std::ostringstream ss;
    ss << in.rdbuf();
    return parse_platform_config(ss.str());
}

std::string platform_config_to_json(const PlatformConfig& cfg) {
    json j;
    j["quantum"] = cfg.quantum;
    j["fuzzification"] = {{"delta1", cfg.fuzz.delta1}, {"delta2", cfg.fuzz.delta2}, {"eta", cfg.fuzz.eta}};
    j["servers"] = json::array();
    for (const auto& s : cfg.platform.servers) {
        j["servers"].push_back({{"id", s.id},
                                {"tier", tier_name(s.tier)},
                                {"capacityRatio", s.capacity_ratio},
                                {"costPerHour", s.cost_per_hour}});
    }
    j["bandwidth"] = json::array();
    for (const auto& c : cfg.platform.classes) {
        j["bandwidth"].push_back({{"tiers", {tier_name(c.a), tier_name(c.b)}},
                                  {"mbPerSec", c.mb_per_sec},
                                  {"dollarsPerGB", c.dollars_per_gb}});
    }
    return j.dump(2);
}

double CrispInstance::transfer_time(std::size_t edge, std::size_t from_server, std::size_t to_server) const {
    if (from_server == to_server) return 0.0;
    const auto slot = tier_pair_slot(platform.servers[from_server].tier, platform.servers[to_server].tier);
    return transfer[edge * kTierPairs + slot];
}

CrispInstance build_crisp_instance(const Workflow& w, const Platform& p) {
    validate(w);
    p.validate();
    CrispInstance ci{w, p, {}, {}};
    ci.processing.resize(w.size() * p.size());
    for (std::size_t v = 0; v < w.size(); ++v) {
        for (std::size_t s = 0; s < p.size(); ++s) {
            ci.processing[v * p.size() + s] = w.task(v).reference_runtime / p.servers[s].capacity_ratio;
        }
    }
    ci.transfer.resize(w.edges().size() * kTierPairs);
    for (std::size_t e = 0; e < w.edges().size(); ++e) {
        for (std::size_t slot = 0; slot < kTierPairs; ++slot) {
            ci.transfer[e * kTierPairs + slot] = transfer_time_crisp(w.edges()[e].size_bytes, p.classes[slot]);
        }
    }
    return ci;
}

Tfn ProblemInstance::transfer_cost(std::size_t edge, std::size_t from, std::size_t to) const {
    if (from == to) return {};
    const auto slot = tier_pair_slot(platform_.servers[from].tier, platform_.servers[to].tier);
    return transfer_cost_[edge * kTierPairs + slot];
}

ProblemInstance ProblemInstance::with_deadline(double deadline) const {
    ProblemInstance copy = *this;
    copy.deadline_ = deadline;
    return copy;
}

ProblemInstance ProblemInstance::with_scaled_costs(double k) const {
    if (!(k > 0.0)) {
        throw Error(ErrorKind::NegativeScalar, "cost scale must be > 0");
    }
    ProblemInstance copy = *this;
    for (auto& s : copy.platform_.servers) s.cost_per_hour *= k;
    for (auto& c : copy.platform_.classes) c.dollars_per_gb *= k;
    for (auto& c : copy.transfer_cost_) c = scale(c, k);
    return copy;
}

ProblemInstance build_problem_instance(const Workflow& w, const Platform& p, const FuzzificationParams& fuzz,
                                       double quantum, std::uint64_t seed, bool crisp_transfer_cost) {
    validate(w);
    fuzz.validate();
    if (!(quantum > 0.0)) {
        throw Error(ErrorKind::NonPositiveQuantum, "billing quantum must be > 0");
    }
    ProblemInstance inst;
    inst.workflow_ = w;
    inst.platform_ = p;
    for (auto& s : inst.platform_.servers) s.billing_quantum = quantum;
    inst.platform_.validate();
    inst.fuzz_ = fuzz;
    inst.seed_ = seed;
    inst.crisp_transfer_cost_ = crisp_transfer_cost;

    const std::size_t n = w.size();
    const std::size_t m = p.size();

    Rng proc_rng = Rng::derive(seed, {kProcessingStream});
    inst.processing_.resize(n * m);
    for (std::size_t v = 0; v < n; ++v) {
        for (std::size_t s = 0; s < m; ++s) {
            const double crisp = w.task(v).reference_runtime / p.servers[s].capacity_ratio;
            inst.processing_[v * m + s] = fuzzify(crisp, fuzz, proc_rng);
        }
    }

    Rng time_rng = Rng::derive(seed, {kTransferTimeStream});
    inst.transfer_time_.assign(w.edges().size() * m * m, Tfn{});
    for (std::size_t e = 0; e < w.edges().size(); ++e) {
        for (std::size_t r = 0; r < m; ++r) {
            for (std::size_t t = 0; t < m; ++t) {
                if (r == t) continue;
                const double crisp = transfer_time_crisp(w.edges()[e].size_bytes, p.link(r, t));
                inst.transfer_time_[(e * m + r) * m + t] = fuzzify(crisp, fuzz, time_rng);
            }
        }
    }

    Rng cost_rng = Rng::derive(seed, {kTransferCostStream});
    inst.transfer_cost_.assign(w.edges().size() * kTierPairs, Tfn{});
    for (std::size_t e = 0; e < w.edges().size(); ++e) {
        for (std::size_t slot = 0; slot < kTierPairs; ++slot) {
            const double crisp = transfer_cost_crisp(w.edges()[e].size_bytes, p.classes[slot]);
            inst.transfer_cost_[e * kTierPairs + slot] =
                crisp_transfer_cost ? Tfn::crisp(crisp) : fuzzify(crisp, fuzz, cost_rng);
        }
    }
    return inst;
}

}  // namespace fuzzysched

#pragma once

#include <cstdint>
#include <filesystem>
#include <random>
#include <string>
#include <vector>

#include <json.hpp>

#include "prophet/valuation.hpp"

namespace prophet {

enum class ValuationClass { Xos, Mph };

struct SupportPoint {
    double probability;  // > 0
    Valuation valuation;
};

// Discrete prior over valuations for one agent.
class AgentPrior {
public:
    explicit AgentPrior(std::vector<SupportPoint> support);

    const std::vector<SupportPoint>& support() const { return support_; }
    std::size_t size() const { return support_.size(); }
    int num_items() const { return prophet::num_items(support_.front().valuation); }

private:
    std::vector<SupportPoint> support_;  // non-empty, probabilities sum to 1 (1e-12)
};

// A stochastic combinatorial auction: m items and n agents with independent
// discrete priors. Agent order is the arrival order. Immutable after
// construction.
class Instance {
public:
    Instance(int num_items, ValuationClass cls, int k, std::vector<AgentPrior> agents);

    int num_items() const { return num_items_; }
    int num_agents() const { return static_cast<int>(agents_.size()); }
    ValuationClass valuation_class() const { return class_; }
    // rank bound; 1 when the declared class is XOS
    int k() const { return k_; }
    const std::vector<AgentPrior>& agents() const { return agents_; }
    const AgentPrior& agent(std::size_t i) const { return agents_.at(i); }

    // product of support sizes (saturates at 2^64-1)
    std::uint64_t profile_count() const;

private:
    int num_items_;
    ValuationClass class_;
    int k_;
    std::vector<AgentPrior> agents_;
};

// One valuation per agent, drawn from the instance's priors. Holds views into
// the instance, which must outlive the profile.
struct ValuationProfile {
    std::vector<const Valuation*> valuations;
    double probability = 1.0;

    std::size_t num_agents() const { return valuations.size(); }
    const Valuation& v(std::size_t agent) const { return *valuations.at(agent); }
    int num_items() const { return prophet::num_items(*valuations.front()); }
};

inline constexpr std::uint64_t kDefaultProfileCap = 1'000'000;

// Full support of the product distribution, in lexicographic order of the
// per-agent support indices (agent 0 most significant). Probabilities are the
// per-agent products. Throws if the profile count exceeds `cap`.
std::vector<ValuationProfile> enumerate_profiles(const Instance& inst,
                                                 std::uint64_t cap = kDefaultProfileCap);

// Independent draw per agent. Reproducible for a given rng state.
ValuationProfile sample_profile(const Instance& inst, std::mt19937_64& rng);

// Random test instance of the requested class; deterministic given the rng
// state. XOS valuations get 1-3 clauses with weights uniform on [0,1]; MPH-k
// valuations get 1-3 PH-k clauses with random hyperedges of size <= k.
Instance generate_random_instance(ValuationClass cls, int num_items, int num_agents,
                                  int support_size, int k, std::mt19937_64& rng);

// JSON (de)serialization. The parser rejects probabilities that do not sum to
// 1 (tolerance 1e-9), negative weights, hyperedges larger than k, and item
// indices outside the universe.
nlohmann::json valuation_to_json(const Valuation& v);
Valuation valuation_from_json(const nlohmann::json& j, int num_items);
nlohmann::json instance_to_json(const Instance& inst);
Instance instance_from_json(const nlohmann::json& j);
Instance load_instance(const std::filesystem::path& path);
void save_instance(const Instance& inst, const std::filesystem::path& path);

// FNV-1a hash of the canonical JSON encoding, as 16 hex digits.
std::string instance_digest(const Instance& inst);

}  // namespace prophet

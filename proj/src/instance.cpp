#include "prophet/instance.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <stdexcept>

namespace prophet {

namespace {

constexpr double kPriorSumTol = 1e-12;
constexpr double kParseSumTol = 1e-9;

void check_class_consistency(ValuationClass cls, int k, const Valuation& v)
{
    if (cls == ValuationClass::Xos) {
        const bool ok = std::holds_alternative<AdditiveFunction>(v) ||
                        std::holds_alternative<XOSFunction>(v);
        if (!ok)
            throw std::invalid_argument("Instance: class xos requires additive or xos valuations");
    } else {
        if (valuation_rank(v) > k)
            throw std::invalid_argument("Instance: valuation rank exceeds the declared k");
    }
}

}  // namespace

AgentPrior::AgentPrior(std::vector<SupportPoint> support) : support_(std::move(support))
{
    if (support_.empty())
        throw std::invalid_argument("AgentPrior: support must be non-empty");
    const int m = prophet::num_items(support_.front().valuation);
    double total = 0.0;
    for (const auto& point : support_) {
        if (!(point.probability > 0.0) || !std::isfinite(point.probability))
            throw std::invalid_argument("AgentPrior: probabilities must be finite and positive");
        if (prophet::num_items(point.valuation) != m)
            throw std::invalid_argument("AgentPrior: support valuations disagree on the universe");
        total += point.probability;
    }
    if (std::abs(total - 1.0) > kPriorSumTol)
        throw std::invalid_argument("AgentPrior: probabilities must sum to 1");
}

Instance::Instance(int num_items, ValuationClass cls, int k, std::vector<AgentPrior> agents)
    : num_items_(num_items), class_(cls), k_(k), agents_(std::move(agents))
{
    if (num_items_ < 1 || num_items_ > Bundle::kMaxItems)
        throw std::invalid_argument("Instance: item count out of range");
    if (agents_.empty())
        throw std::invalid_argument("Instance: at least one agent required");
    if (class_ == ValuationClass::Xos)
        k_ = 1;
    else if (k_ < 1)
        throw std::invalid_argument("Instance: k must be positive for class mph");
    for (const auto& prior : agents_) {
        if (prior.num_items() != num_items_)
            throw std::invalid_argument("Instance: agent universe does not match item count");
        for (const auto& point : prior.support())
            check_class_consistency(class_, k_, point.valuation);
    }
}

std::uint64_t Instance::profile_count() const
{
    std::uint64_t count = 1;
    for (const auto& prior : agents_) {
        const std::uint64_t s = prior.size();
        if (count > std::numeric_limits<std::uint64_t>::max() / s)
            return std::numeric_limits<std::uint64_t>::max();
        count *= s;
    }
    return count;
}

std::vector<ValuationProfile> enumerate_profiles(const Instance& inst, std::uint64_t cap)
{
    const std::uint64_t count = inst.profile_count();
    if (count > cap)
        throw std::runtime_error("enumerate_profiles: " + std::to_string(count) +
                                 " profiles exceed the cap of " + std::to_string(cap) +
                                 "; use sample_profile instead");

    const std::size_t n = static_cast<std::size_t>(inst.num_agents());
    std::vector<ValuationProfile> out;
    out.reserve(static_cast<std::size_t>(count));
    std::vector<std::size_t> index(n, 0);
    while (true) {
        ValuationProfile profile;
        profile.valuations.reserve(n);
        profile.probability = 1.0;
        for (std::size_t i = 0; i < n; ++i) {
            const SupportPoint& point = inst.agent(i).support()[index[i]];
            profile.valuations.push_back(&point.valuation);
            profile.probability *= point.probability;
        }
        out.push_back(std::move(profile));

        // odometer increment, last agent fastest
        std::size_t pos = n;
        while (pos > 0) {
            --pos;
            if (++index[pos] < inst.agent(pos).size()) break;
            index[pos] = 0;
            if (pos == 0) return out;
        }
    }
}

ValuationProfile sample_profile(const Instance& inst, std::mt19937_64& rng)
{
    ValuationProfile profile;
    profile.valuations.reserve(static_cast<std::size_t>(inst.num_agents()));
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    for (const auto& prior : inst.agents()) {
        const double u = unit(rng);
        double cumulative = 0.0;
        const SupportPoint* chosen = &prior.support().back();
        for (const auto& point : prior.support()) {
            cumulative += point.probability;
            if (u < cumulative) {
                chosen = &point;
                break;
            }
        }
        profile.valuations.push_back(&chosen->valuation);
        profile.probability *= chosen->probability;
    }
    return profile;
}

namespace {

double positive_unit(std::mt19937_64& rng)
{
    // uniform on (0, 1]
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    return 1.0 - unit(rng);
}

std::vector<double> random_probabilities(int count, std::mt19937_64& rng)
{
    std::vector<double> probs(static_cast<std::size_t>(count));
    double total = 0.0;
    for (double& p : probs) {
        p = positive_unit(rng);
        total += p;
    }
    double partial = 0.0;
    for (std::size_t i = 0; i + 1 < probs.size(); ++i) {
        probs[i] /= total;
        partial += probs[i];
    }
    probs.back() = 1.0 - partial;  // exact unit sum
    return probs;
}

Valuation random_xos(int m, std::mt19937_64& rng)
{
    std::uniform_int_distribution<int> clause_count(1, 3);
    std::uniform_real_distribution<double> weight(0.0, 1.0);
    std::vector<AdditiveFunction> clauses;
    const int t = clause_count(rng);
    clauses.reserve(static_cast<std::size_t>(t));
    for (int c = 0; c < t; ++c) {
        std::vector<double> w(static_cast<std::size_t>(m));
        for (double& x : w) x = weight(rng);
        clauses.emplace_back(std::move(w));
    }
    return XOSFunction(std::move(clauses));
}

Valuation random_mphk(int m, int k, std::mt19937_64& rng)
{
    std::uniform_int_distribution<int> clause_count(1, 3);
    std::uniform_int_distribution<int> edge_count(1, std::min(6, 2 * m));
    std::uniform_int_distribution<int> edge_size(1, std::min(k, m));
    std::uniform_int_distribution<int> item(0, m - 1);

    const int t = clause_count(rng);
    std::vector<PHkFunction> clauses;
    clauses.reserve(static_cast<std::size_t>(t));
    for (int c = 0; c < t; ++c) {
        std::vector<Hyperedge> edges;
        const int e = edge_count(rng);
        for (int i = 0; i < e; ++i) {
            const int size = edge_size(rng);
            Bundle members;
            while (members.size() < size) members = members.with(item(rng));
            const bool duplicate =
                std::any_of(edges.begin(), edges.end(),
                            [&](const Hyperedge& h) { return h.items == members; });
            if (!duplicate) edges.push_back({members, positive_unit(rng)});
        }
        clauses.emplace_back(m, k, std::move(edges));
    }
    return MPHkFunction(k, std::move(clauses));
}

}  // namespace

Instance generate_random_instance(ValuationClass cls, int num_items, int num_agents,
                                  int support_size, int k, std::mt19937_64& rng)
{
    if (num_items < 1 || num_agents < 1 || support_size < 1)
        throw std::invalid_argument("generate_random_instance: parameters must be positive");
    if (cls == ValuationClass::Mph && k < 1)
        throw std::invalid_argument("generate_random_instance: k must be >= 1 for class mph");

    std::vector<AgentPrior> agents;
    agents.reserve(static_cast<std::size_t>(num_agents));
    for (int i = 0; i < num_agents; ++i) {
        const std::vector<double> probs = random_probabilities(support_size, rng);
        std::vector<SupportPoint> support;
        support.reserve(static_cast<std::size_t>(support_size));
        for (int s = 0; s < support_size; ++s) {
            Valuation v = cls == ValuationClass::Xos ? random_xos(num_items, rng)
                                                     : random_mphk(num_items, k, rng);
            support.push_back({probs[static_cast<std::size_t>(s)], std::move(v)});
        }
        agents.emplace_back(std::move(support));
    }
    return Instance(num_items, cls, cls == ValuationClass::Xos ? 1 : k, std::move(agents));
}

// ---------------------------------------------------------------------------
// JSON encoding

namespace {

using nlohmann::json;

std::vector<double> parse_weights(const json& j, int m, const char* where)
{
    if (!j.is_array() || static_cast<int>(j.size()) != m)
        throw std::invalid_argument(std::string(where) + ": expected " + std::to_string(m) +
                                    " weights");
    std::vector<double> w;
    w.reserve(j.size());
    for (const auto& x : j) {
        const double value = x.get<double>();
        if (value < 0.0)
            throw std::invalid_argument(std::string(where) + ": negative weight");
        w.push_back(value);
    }
    return w;
}

PHkFunction phk_from_json(const json& j, int m)
{
    if (j.at("type").get<std::string>() != "phk")
        throw std::invalid_argument("valuation: expected type \"phk\"");
    const int k = j.at("k").get<int>();
    std::vector<Hyperedge> edges;
    for (const auto& edge : j.at("edges")) {
        const auto& items = edge.at("items");
        Bundle members;
        for (const auto& item : items) {
            const int idx = item.get<int>();
            if (idx < 0 || idx >= m)
                throw std::invalid_argument("phk edge: item index outside the universe");
            if (members.contains(idx))
                throw std::invalid_argument("phk edge: repeated item index");
            members = members.with(idx);
        }
        if (members.size() > k)
            throw std::invalid_argument("phk edge: hyperedge exceeds k");
        const double weight = edge.at("weight").get<double>();
        if (weight < 0.0)
            throw std::invalid_argument("phk edge: negative weight");
        edges.push_back({members, weight});
    }
    return PHkFunction(m, k, std::move(edges));
}

}  // namespace

Valuation valuation_from_json(const json& j, int num_items)
{
    const std::string type = j.at("type").get<std::string>();
    if (type == "additive")
        return AdditiveFunction(parse_weights(j.at("weights"), num_items, "additive"));
    if (type == "xos") {
        std::vector<AdditiveFunction> clauses;
        for (const auto& clause : j.at("clauses"))
            clauses.emplace_back(parse_weights(clause, num_items, "xos clause"));
        return XOSFunction(std::move(clauses));
    }
    if (type == "phk") return phk_from_json(j, num_items);
    if (type == "mphk") {
        const int k = j.at("k").get<int>();
        std::vector<PHkFunction> clauses;
        for (const auto& clause : j.at("clauses")) clauses.push_back(phk_from_json(clause, num_items));
        return MPHkFunction(k, std::move(clauses));
    }
    throw std::invalid_argument("valuation: unknown type \"" + type + "\"");
}

nlohmann::json valuation_to_json(const Valuation& v)
{
    struct Visitor {
        json operator()(const AdditiveFunction& f) const
        {
            return json{{"type", "additive"}, {"weights", f.weights()}};
        }
        json operator()(const XOSFunction& f) const
        {
            json clauses = json::array();
            for (const auto& clause : f.clauses()) clauses.push_back(clause.weights());
            return json{{"type", "xos"}, {"clauses", clauses}};
        }
        json operator()(const PHkFunction& f) const
        {
            json edges = json::array();
            for (const auto& e : f.edges())
                edges.push_back(json{{"items", e.items.items()}, {"weight", e.weight}});
            return json{{"type", "phk"}, {"k", f.k()}, {"edges", edges}};
        }
        json operator()(const MPHkFunction& f) const
        {
            json clauses = json::array();
            for (const auto& clause : f.clauses()) clauses.push_back(Visitor{}(clause));
            return json{{"type", "mphk"}, {"k", f.k()}, {"clauses", clauses}};
        }
    };
    return std::visit(Visitor{}, v);
}

Instance instance_from_json(const json& j)
{
    const int m = j.at("m").get<int>();
    const std::string cls_name = j.at("class").get<std::string>();
    ValuationClass cls;
    int k = 1;
    if (cls_name == "xos") {
        cls = ValuationClass::Xos;  // any "k" field is ignored
    } else if (cls_name == "mph") {
        cls = ValuationClass::Mph;
        k = j.at("k").get<int>();
    } else {
        throw std::invalid_argument("instance: class must be \"xos\" or \"mph\"");
    }

    std::vector<AgentPrior> agents;
    for (const auto& agent : j.at("agents")) {
        std::vector<SupportPoint> support;
        double total = 0.0;
        for (const auto& point : agent.at("support")) {
            const double prob = point.at("prob").get<double>();
            total += prob;
            support.push_back({prob, valuation_from_json(point.at("valuation"), m)});
        }
        if (std::abs(total - 1.0) > kParseSumTol)
            throw std::invalid_argument("instance: support probabilities must sum to 1");
        // normalize away the (at most 1e-9) encoding slack
        for (auto& point : support) point.probability /= total;
        agents.emplace_back(std::move(support));
    }
    return Instance(m, cls, k, std::move(agents));
}

nlohmann::json instance_to_json(const Instance& inst)
{
    json agents = json::array();
    for (const auto& prior : inst.agents()) {
        json support = json::array();
        for (const auto& point : prior.support())
            support.push_back(json{{"prob", point.probability},
                                   {"valuation", valuation_to_json(point.valuation)}});
        agents.push_back(json{{"support", support}});
    }
    json j{{"m", inst.num_items()},
           {"class", inst.valuation_class() == ValuationClass::Xos ? "xos" : "mph"},
           {"agents", agents}};
    if (inst.valuation_class() == ValuationClass::Mph) j["k"] = inst.k();
    return j;
}

Instance load_instance(const std::filesystem::path& path)
{
    std::ifstream in(path);
    if (!in)
        throw std::runtime_error("load_instance: cannot open " + path.string());
    json j;
    try {
        in >> j;
    } catch (const json::parse_error& e) {
        throw std::invalid_argument("load_instance: " + path.string() + ": " + e.what());
    }
    return instance_from_json(j);
}

void save_instance(const Instance& inst, const std::filesystem::path& path)
{
    std::ofstream out(path);
    if (!out)
        throw std::runtime_error("save_instance: cannot open " + path.string());
    out << instance_to_json(inst).dump(2) << "\n";
}

std::string instance_digest(const Instance& inst)
{
    const std::string text = instance_to_json(inst).dump();
    std::uint64_t hash = 1469598103934665603ull;  // FNV-1a
    for (unsigned char c : text) {
        hash ^= c;
        hash *= 1099511628211ull;
    }
    char buffer[17];
    std::snprintf(buffer, sizeof buffer, "%016llx", static_cast<unsigned long long>(hash));
    return std::string(buffer);
}

}  // namespace prophet

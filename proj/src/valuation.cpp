#include "prophet/valuation.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace prophet {

namespace {

void require_within_universe(Bundle s, int m, const char* op)
{
    if (!s.subset_of(Bundle::full(m)))
        throw std::out_of_range(std::string(op) + ": bundle references an item outside the universe");
}

}  // namespace

AdditiveFunction::AdditiveFunction(std::vector<double> weights) : weights_(std::move(weights))
{
    if (weights_.empty())
        throw std::invalid_argument("AdditiveFunction: empty item universe");
    if (weights_.size() > static_cast<std::size_t>(Bundle::kMaxItems))
        throw std::invalid_argument("AdditiveFunction: universe exceeds bundle width");
    for (double w : weights_)
        if (!(w >= 0.0) || !std::isfinite(w))
            throw std::invalid_argument("AdditiveFunction: weights must be finite and non-negative");
}

double AdditiveFunction::value(Bundle s) const
{
    require_within_universe(s, num_items(), "AdditiveFunction::value");
    double acc = 0.0;
    for (std::uint32_t rest = s.bits(); rest != 0; rest &= rest - 1)
        acc += weights_[static_cast<std::size_t>(std::countr_zero(rest))];
    return acc;
}

XOSFunction::XOSFunction(std::vector<AdditiveFunction> clauses) : clauses_(std::move(clauses))
{
    if (clauses_.empty())
        throw std::invalid_argument("XOSFunction: clause list must be non-empty");
    const int m = clauses_.front().num_items();
    for (const auto& clause : clauses_)
        if (clause.num_items() != m)
            throw std::invalid_argument("XOSFunction: clauses disagree on the item universe");
}

double XOSFunction::value(Bundle s) const
{
    double best = 0.0;
    for (const auto& clause : clauses_) best = std::max(best, clause.value(s));
    return best;
}

PHkFunction::PHkFunction(int num_items, int k, std::vector<Hyperedge> edges)
    : num_items_(num_items), k_(k), edges_(std::move(edges))
{
    if (num_items_ < 1 || num_items_ > Bundle::kMaxItems)
        throw std::invalid_argument("PHkFunction: invalid item universe size");
    if (k_ < 1)
        throw std::invalid_argument("PHkFunction: rank bound k must be positive");
    for (const auto& e : edges_) {
        if (!e.items.subset_of(Bundle::full(num_items_)))
            throw std::invalid_argument("PHkFunction: hyperedge references an item outside the universe");
        if (e.items.empty() || e.items.size() > k_)
            throw std::invalid_argument("PHkFunction: hyperedge size must be in [1, k]");
        if (!(e.weight > 0.0) || !std::isfinite(e.weight))
            throw std::invalid_argument("PHkFunction: hyperedge weights must be finite and positive");
    }
    std::sort(edges_.begin(), edges_.end(),
              [](const Hyperedge& a, const Hyperedge& b) { return a.items.bits() < b.items.bits(); });
    for (std::size_t i = 1; i < edges_.size(); ++i)
        if (edges_[i].items == edges_[i - 1].items)
            throw std::invalid_argument("PHkFunction: duplicate hyperedge");
}

int PHkFunction::rank() const
{
    int r = 0;
    for (const auto& e : edges_) r = std::max(r, e.items.size());
    return r;
}

double PHkFunction::value(Bundle s) const
{
    require_within_universe(s, num_items_, "PHkFunction::value");
    double acc = 0.0;
    for (const auto& e : edges_)
        if (e.items.subset_of(s)) acc += e.weight;
    return acc;
}

MPHkFunction::MPHkFunction(int k, std::vector<PHkFunction> clauses)
    : k_(k), clauses_(std::move(clauses))
{
    if (k_ < 1)
        throw std::invalid_argument("MPHkFunction: rank bound k must be positive");
    if (clauses_.empty())
        throw std::invalid_argument("MPHkFunction: clause list must be non-empty");
    const int m = clauses_.front().num_items();
    for (const auto& clause : clauses_) {
        if (clause.num_items() != m)
            throw std::invalid_argument("MPHkFunction: clauses disagree on the item universe");
        if (clause.rank() > k_)
            throw std::invalid_argument("MPHkFunction: clause rank exceeds k");
    }
}

double MPHkFunction::value(Bundle s) const
{
    double best = 0.0;
    for (const auto& clause : clauses_) best = std::max(best, clause.value(s));
    return best;
}

int num_items(const Valuation& v)
{
    return std::visit([](const auto& f) { return f.num_items(); }, v);
}

int valuation_rank(const Valuation& v)
{
    struct Visitor {
        int operator()(const AdditiveFunction&) const { return 1; }
        int operator()(const XOSFunction&) const { return 1; }
        int operator()(const PHkFunction& f) const { return std::max(1, f.rank()); }
        int operator()(const MPHkFunction& f) const
        {
            int r = 1;
            for (const auto& clause : f.clauses()) r = std::max(r, clause.rank());
            return r;
        }
    };
    return std::visit(Visitor{}, v);
}

double evaluate(const Valuation& v, Bundle s)
{
    require_within_universe(s, num_items(v), "evaluate");
    return std::visit([s](const auto& f) { return f.value(s); }, v);
}

std::size_t supporting_additive_index(const XOSFunction& v, Bundle s)
{
    std::size_t best = 0;
    double best_value = v.clauses().front().value(s);
    for (std::size_t i = 1; i < v.clauses().size(); ++i) {
        const double val = v.clauses()[i].value(s);
        if (val > best_value) {
            best = i;
            best_value = val;
        }
    }
    return best;
}

const AdditiveFunction& supporting_additive(const XOSFunction& v, Bundle s)
{
    return v.clauses()[supporting_additive_index(v, s)];
}

std::size_t supporting_phk_index(const MPHkFunction& v, Bundle s)
{
    std::size_t best = 0;
    double best_value = v.clauses().front().value(s);
    for (std::size_t i = 1; i < v.clauses().size(); ++i) {
        const double val = v.clauses()[i].value(s);
        if (val > best_value) {
            best = i;
            best_value = val;
        }
    }
    return best;
}

const PHkFunction& supporting_phk(const MPHkFunction& v, Bundle s)
{
    return v.clauses()[supporting_phk_index(v, s)];
}

PriceVector::PriceVector(std::vector<double> prices) : prices_(std::move(prices))
{
    for (double p : prices_)
        if (!(p >= 0.0) || !std::isfinite(p))
            throw std::invalid_argument("PriceVector: prices must be finite and non-negative");
}

double PriceVector::total(Bundle s) const
{
    require_within_universe(s, num_items(), "PriceVector::total");
    double acc = 0.0;
    for (std::uint32_t rest = s.bits(); rest != 0; rest &= rest - 1)
        acc += prices_[static_cast<std::size_t>(std::countr_zero(rest))];
    return acc;
}

Bundle demand(const Valuation& v, const PriceVector& prices, Bundle available)
{
    const int m = num_items(v);
    if (prices.num_items() != m)
        throw std::invalid_argument("demand: price vector does not match the item universe");
    require_within_universe(available, m, "demand");

    Bundle best;  // empty set: utility 0
    double best_utility = 0.0;
    for_each_subset(available, [&](Bundle b) {
        const double utility = evaluate(v, b) - prices.total(b);
        const bool better = utility > best_utility ||
                            (utility == best_utility &&
                             (b.size() < best.size() ||
                              (b.size() == best.size() && b.bits() < best.bits())));
        if (better) {
            best = b;
            best_utility = utility;
        }
    });
    return best;
}

}  // namespace prophet

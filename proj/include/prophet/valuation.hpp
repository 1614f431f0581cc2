#pragma once

#include <cstddef>
#include <variant>
#include <vector>

#include "prophet/bundle.hpp"

namespace prophet {

// All valuation types are immutable after construction and all operations on
// them are pure, so they are safe to share across threads.

// Additive set function: a(S) = sum of per-item weights over S.
class AdditiveFunction {
public:
    explicit AdditiveFunction(std::vector<double> weights);

    int num_items() const { return static_cast<int>(weights_.size()); }
    const std::vector<double>& weights() const { return weights_; }
    double weight(int item) const { return weights_.at(static_cast<std::size_t>(item)); }

    double value(Bundle s) const;

private:
    std::vector<double> weights_;  // all >= 0
};

// Fractionally subadditive (XOS) function: max over additive clauses.
class XOSFunction {
public:
    explicit XOSFunction(std::vector<AdditiveFunction> clauses);

    int num_items() const { return clauses_.front().num_items(); }
    const std::vector<AdditiveFunction>& clauses() const { return clauses_; }

    double value(Bundle s) const;

private:
    std::vector<AdditiveFunction> clauses_;  // non-empty, shared universe
};

struct Hyperedge {
    Bundle items;   // 1 <= |items| <= k
    double weight;  // > 0
};

// Positive-hyperedge-k function: v(S) = sum of weights of hyperedges inside S.
class PHkFunction {
public:
    PHkFunction(int num_items, int k, std::vector<Hyperedge> edges);

    int num_items() const { return num_items_; }
    int k() const { return k_; }
    const std::vector<Hyperedge>& edges() const { return edges_; }
    // size of the largest hyperedge actually present (0 for the zero function)
    int rank() const;

    double value(Bundle s) const;

private:
    int num_items_;
    int k_;
    std::vector<Hyperedge> edges_;  // distinct, sorted by bitmask
};

// Maximum over PH-k functions.
class MPHkFunction {
public:
    MPHkFunction(int k, std::vector<PHkFunction> clauses);

    int num_items() const { return clauses_.front().num_items(); }
    int k() const { return k_; }
    const std::vector<PHkFunction>& clauses() const { return clauses_; }

    double value(Bundle s) const;

private:
    int k_;
    std::vector<PHkFunction> clauses_;  // non-empty, each with rank <= k
};

using Valuation = std::variant<AdditiveFunction, XOSFunction, PHkFunction, MPHkFunction>;

int num_items(const Valuation& v);

// Largest bundle size over which the valuation exhibits complementarity:
// 1 for additive/XOS, the maximal hyperedge size for PH-k/MPH-k.
int valuation_rank(const Valuation& v);

// Evaluates v on S. Throws std::out_of_range if S reaches outside v's
// item universe.
double evaluate(const Valuation& v, Bundle s);

// The additive clause with which v evaluates S (lowest index on ties).
std::size_t supporting_additive_index(const XOSFunction& v, Bundle s);
const AdditiveFunction& supporting_additive(const XOSFunction& v, Bundle s);

// The PH-k clause with which v evaluates S (lowest index on ties).
std::size_t supporting_phk_index(const MPHkFunction& v, Bundle s);
const PHkFunction& supporting_phk(const MPHkFunction& v, Bundle s);

// Non-negative static anonymous item prices, one per item.
class PriceVector {
public:
    PriceVector() = default;
    explicit PriceVector(std::vector<double> prices);

    int num_items() const { return static_cast<int>(prices_.size()); }
    const std::vector<double>& values() const { return prices_; }
    double price(int item) const { return prices_.at(static_cast<std::size_t>(item)); }

    // sum of prices over a bundle
    double total(Bundle s) const;

private:
    std::vector<double> prices_;
};

// Utility-maximizing bundle among subsets of `available` at the given prices,
// found by exhaustive enumeration. Ties resolve to smaller cardinality, then
// smaller bitmask, so the empty set wins against any zero-utility bundle.
Bundle demand(const Valuation& v, const PriceVector& prices, Bundle available);

}  // namespace prophet

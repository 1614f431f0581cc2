#pragma once

#include <cstdint>
#include <vector>

#include "prophet/offline.hpp"

namespace prophet {

// Result of one sequential posted-price run. Quasi-linear accounting:
// welfare = revenue + total utility, revenue = price of the sold set.
struct MechanismOutcome {
    Allocation allocation;          // may leave items unsold
    Bundle sold;                    // T(v), the union of purchased bundles
    double revenue = 0.0;
    std::vector<double> utilities;  // per agent, all >= 0
    double welfare = 0.0;
};

// Agents arrive in profile order; each buys its utility-maximizing bundle of
// the items still available (ties per `demand`), pays the posted prices, and
// the availability set shrinks.
MechanismOutcome run_mechanism(const ValuationProfile& profile, const PriceVector& prices);

// Exact expectation over the full profile enumeration.
double expected_welfare_exact(const Instance& inst, const PriceVector& prices,
                              std::uint64_t profile_cap = kDefaultProfileCap);

struct MonteCarloEstimate {
    double mean = 0.0;
    double standard_error = 0.0;
    std::uint64_t samples = 0;
};

MonteCarloEstimate expected_welfare_monte_carlo(const Instance& inst, const PriceVector& prices,
                                                std::uint64_t samples, std::uint64_t seed);

struct Lemma1Bound {
    double bound = 0.0;
    Bundle argmin;  // lowest-bitmask minimizer
};

// The posted-price welfare lower bound
//   min_T ( sum_{j in T} p_j
//           + beta * sum_i E_v[ v_i(OPT_i(v)\T) - p(OPT_i(v)\T) ] ),
// evaluated exactly for every T. Expected welfare at `prices` dominates it
// for any beta in [0,1] (which is why beta = 0 is accepted here even though
// the LP parameters demand beta > 0).
Lemma1Bound lemma1_bound(const OptStats& stats, const PriceVector& prices, double beta);
Lemma1Bound lemma1_bound(const Instance& inst, const PriceVector& prices, double beta);

}  // namespace prophet

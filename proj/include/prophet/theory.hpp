#pragma once

#include <string>

#include "prophet/price_lp.hpp"

namespace prophet {

enum class ParameterClass { SingleItem, Xos, MphBalanced, MphImproved };

std::string to_string(ParameterClass cls);

struct ClassParameters {
    ParameterClass cls;
    int k;  // 1 except for the MPH variants
    Parameters params;
};

// Closed-form (alpha, beta) per valuation class:
//   single item / XOS:  (2, 1)
//   MPH-k balanced:     (4k-2, 1/(2(k-1)))
//   MPH-k improved:     (2k + 2*sqrt(k(k-1)) - 1, sqrt(k/(k-1)) - 1)
// The MPH formulas divide by k-1, so they demand k >= 2 (std::domain_error
// otherwise); MPH-1 is the XOS class and is routed there by
// parameters_for_instance.
ClassParameters parameters_for(ParameterClass cls, int k = 1);

enum class MphVariant { Balanced, Improved };

// Class-matched parameters for an instance: XOS instances (and MPH with
// k = 1) get the XOS pair, MPH instances with k >= 2 get the requested
// variant.
ClassParameters parameters_for_instance(const Instance& inst,
                                        MphVariant variant = MphVariant::Balanced);

// Residual of the MPH-k parameter identity  1 - k*beta/(1+beta) = 1/(alpha*beta);
// zero (to rounding) exactly when (alpha, beta) is one of the two MPH pairs.
double mph_identity_residual(int k, double alpha, double beta);

// Margin of Claim 1 at (v, S):  sum_T mu_T v(S\T) - v(S)/(alpha*beta).
// Non-negative for every dual-feasible certificate when the parameters match
// the valuation's class.
double check_claim1(const DualCertificate& cert, const Valuation& v, Bundle s,
                    const Parameters& params);

struct Claim1Margin {
    double margin;
    int agent;
    std::size_t support_point;
    Bundle s;
};

// Exhaustive Claim 1 sweep over every agent, every support valuation, and
// every S subseteq M; returns the worst case.
Claim1Margin claim1_worst_margin(const DualCertificate& cert, const Instance& inst,
                                 const Parameters& params);

// Margin of the hyperedge-survival bound:
//   Pr_mu[X cap T = empty] - (1 - k*beta/(1+beta)).
// Union-bound consequence of dual feasibility for |X| <= k; throws
// std::invalid_argument when |X| > k.
double check_hyperedge_survival(const DualCertificate& cert, Bundle x, int k, double beta);

}  // namespace prophet

#pragma once

#include <filesystem>
#include <random>
#include <vector>

#include <json.hpp>

#include "prophet/offline.hpp"
#include "prophet/simplex.hpp"

namespace prophet {

// Target competitive ratio and the balance weight of the utility term.
struct Parameters {
    double alpha;  // >= 1
    double beta;   // in (0, 1]

    Parameters(double alpha, double beta);
};

// Distribution over item subsets T: the dual variables mu_T. Stored densely,
// indexed by bitmask; weights are non-negative and sum to 1 (tolerance 1e-9).
class DualCertificate {
public:
    DualCertificate(int num_items, std::vector<double> weights);

    int num_items() const { return num_items_; }
    const std::vector<double>& weights() const { return weights_; }
    double weight(Bundle t) const { return weights_.at(t.bits()); }

    // Pr_mu[item not in T]
    double absence_probability(int item) const;

private:
    int num_items_;
    std::vector<double> weights_;  // size 2^num_items
};

// Construction cap: 2^m rows (primal) or columns (dual).
inline constexpr int kMaxLpItems = 16;

// Price LP in rearranged form. Variables p_0..p_{m-1}, lplus, lminus;
// objective max lplus - lminus; one <=-row per subset T:
//   sum_j p_j (beta*1{j not in T} - 1{j in T}) + lplus - lminus
//     <= beta * sum_i E[v_i(OPT_i \ T)] - E[OPT]/alpha.
// A non-negative optimum certifies prices achieving ratio alpha.
LinearProgramSpec build_primal(const OptStats& stats, const Parameters& params);
LinearProgramSpec build_primal(const Instance& inst, const Parameters& params);

// The dual: variables mu_T >= 0, objective min sum_T mu_T * rhs_T, per-item
// rows sum_T mu_T (beta*1{j not in T} - 1{j in T}) >= 0, and sum_T mu_T = 1.
LinearProgramSpec build_dual(const OptStats& stats, const Parameters& params);
LinearProgramSpec build_dual(const Instance& inst, const Parameters& params);

struct PrimalPrices {
    PriceVector prices;
    double objective;  // the slack value lplus - lminus at the optimum
};

// Extraction from solver output; both throw std::runtime_error unless the
// solution status is Optimal. Tiny numerical negatives (>= -1e-9) clamp to 0.
PrimalPrices prices_from_primal(const LpSolution& sol, int num_items);
DualCertificate certificate_from_dual(const LpSolution& sol, int num_items);

double marginal_absence_prob(const DualCertificate& cert, int item);

// Per-item margins Pr_mu[j not in T] - 1/(1+beta); the certificate is
// dual-feasible iff all margins are >= -1e-9.
std::vector<double> check_dual_feasible(const DualCertificate& cert, const Parameters& params);

// Dual objective computed agent-by-agent after swapping the summation order:
//   sum_i sum_v Pr[v] (beta * sum_T mu_T v_i(OPT_i(v)\T) - v_i(OPT_i(v))/alpha).
// Cross-checked against the direct sum_T mu_T * rhs_T form within 1e-9;
// disagreement throws std::logic_error.
double dual_objective(const DualCertificate& cert, const OptStats& stats,
                      const Parameters& params);
double dual_objective(const DualCertificate& cert, const Instance& inst,
                      const Parameters& params);

struct ConstraintMargin {
    double margin;  // min_T (rhs_T - lhs_T(prices)) with lplus = lminus = 0
    Bundle argmin;  // lowest-bitmask minimizer
};

// Checks externally supplied prices against every primal constraint; the
// prices certify ratio alpha iff margin >= -1e-9.
ConstraintMargin verify_feasible_point(const OptStats& stats, const Parameters& params,
                                       const PriceVector& prices);
ConstraintMargin verify_feasible_point(const Instance& inst, const Parameters& params,
                                       const PriceVector& prices);

// Half of each item's expected supporting-clause contribution to the optimum:
//   p_j = 1/2 sum_i E_v[w_i^{OPT_i(v)}({j}) 1{j in OPT_i(v)}].
// Defined for additive/XOS valuations only (supporting clauses required).
PriceVector fgl_prices(const OptStats& stats);

// Test scaffolding: a random dual-feasible certificate. Samples Dirichlet-like
// weights over all subsets, then for each item shifts just enough mass from
// sets containing it onto their item-removed counterparts to meet the
// membership bound Pr[j in T] <= beta/(1+beta). The shift leaves the other
// items' marginals untouched, so one sweep feasibilizes every margin.
DualCertificate random_feasible_certificate(int num_items, double beta, std::mt19937_64& rng);

// Certificate files: {"mu": [{"items": [...], "weight": w}, ...]}.
nlohmann::json certificate_to_json(const DualCertificate& cert);
DualCertificate certificate_from_json(const nlohmann::json& j, int num_items);
DualCertificate load_certificate(const std::filesystem::path& path, int num_items);
void save_certificate(const DualCertificate& cert, const std::filesystem::path& path);

}  // namespace prophet

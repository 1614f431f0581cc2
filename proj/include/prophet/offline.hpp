#pragma once

#include <cstdint>
#include <vector>

#include "prophet/instance.hpp"

namespace prophet {

// One bundle per agent, pairwise disjoint. Under the full-allocation
// convention the bundles partition the item universe.
struct Allocation {
    std::vector<Bundle> bundles;

    std::size_t num_agents() const { return bundles.size(); }
    Bundle bundle(std::size_t agent) const { return bundles.at(agent); }

    // disjointness holds by construction; full() tells whether every item of
    // the m-item universe is assigned
    bool covers(int num_items) const;
};

inline constexpr std::uint64_t kDefaultAssignmentCap = 10'000'000;

struct AllocationResult {
    Allocation allocation;
    double welfare = 0.0;
};

// Exhaustive welfare-maximizing full allocation: every item goes to exactly
// one agent, so there are n^m candidates. Ties resolve to the
// lexicographically smallest assignment vector (item 0's owner first). By
// monotonicity the optimum among full allocations equals the unrestricted
// optimum. Throws std::runtime_error when n^m exceeds `cap`.
AllocationResult optimal_allocation(const ValuationProfile& profile,
                                    std::uint64_t cap = kDefaultAssignmentCap);

// The bundle agent i gets in the canonical optimum of `profile`.
Bundle opt_bundle(const ValuationProfile& profile, std::size_t agent,
                  std::uint64_t cap = kDefaultAssignmentCap);

// Exact distributional statistics of the offline optimum, the raw material
// for the price LP: one canonical optimum per support profile.
struct OptStats {
    double expected_optimum = 0.0;     // E_v[v(OPT(v))]
    std::vector<double> item_probs;    // q_j = sum_i Pr[j in OPT_i(v)]; all 1
    std::vector<ValuationProfile> profiles;
    std::vector<Allocation> optima;    // aligned with profiles
    std::vector<double> welfare;       // v(OPT(v)) per profile

    int num_items() const { return static_cast<int>(item_probs.size()); }
    std::size_t num_profiles() const { return profiles.size(); }
};

// Enumerates all profiles and solves each offline problem exactly. Verifies
// the full-allocation identity q_j = 1 (tolerance 1e-9) and throws
// std::logic_error if it fails. Profile views point into `inst`, which must
// outlive the result.
OptStats opt_stats(const Instance& inst, std::uint64_t profile_cap = kDefaultProfileCap,
                   std::uint64_t assignment_cap = kDefaultAssignmentCap);

// sum_i E_v[v_i(OPT_i(v) \ t)]: expected optimum welfare surviving outside t.
double expected_residual_optimum(const OptStats& stats, Bundle t);

}  // namespace prophet

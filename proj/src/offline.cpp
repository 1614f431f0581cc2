#include "prophet/offline.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

namespace prophet {

bool Allocation::covers(int num_items) const
{
    Bundle assigned;
    for (Bundle b : bundles) assigned = assigned | b;
    return assigned == Bundle::full(num_items);
}

AllocationResult optimal_allocation(const ValuationProfile& profile, std::uint64_t cap)
{
    const std::size_t n = profile.num_agents();
    const int m = profile.num_items();

    std::uint64_t candidates = 1;
    for (int j = 0; j < m; ++j) {
        if (candidates > cap / n) {
            candidates = std::numeric_limits<std::uint64_t>::max();
            break;
        }
        candidates *= n;
    }
    if (candidates > cap)
        throw std::runtime_error("optimal_allocation: n^m assignment count exceeds the cap of " +
                                 std::to_string(cap));

    // owner[j] in 0..n-1; enumerate in lexicographic order of the owner
    // vector (item 0 most significant), keep strictly better welfare only —
    // the first optimum found is then the lexicographically smallest.
    std::vector<std::size_t> owner(static_cast<std::size_t>(m), 0);
    std::vector<Bundle> bundles(n);
    double best_welfare = -1.0;
    std::vector<Bundle> best;

    while (true) {
        for (Bundle& b : bundles) b = Bundle();
        for (int j = 0; j < m; ++j)
            bundles[owner[static_cast<std::size_t>(j)]] =
                bundles[owner[static_cast<std::size_t>(j)]].with(j);
        double welfare = 0.0;
        for (std::size_t i = 0; i < n; ++i) welfare += evaluate(profile.v(i), bundles[i]);
        if (welfare > best_welfare) {
            best_welfare = welfare;
            best = bundles;
        }

        int pos = m;
        while (pos > 0) {
            --pos;
            if (++owner[static_cast<std::size_t>(pos)] < n) break;
            owner[static_cast<std::size_t>(pos)] = 0;
            if (pos == 0) return {Allocation{std::move(best)}, best_welfare};
        }
        if (m == 0) return {Allocation{std::move(best)}, best_welfare};
    }
}

Bundle opt_bundle(const ValuationProfile& profile, std::size_t agent, std::uint64_t cap)
{
    return optimal_allocation(profile, cap).allocation.bundle(agent);
}

OptStats opt_stats(const Instance& inst, std::uint64_t profile_cap, std::uint64_t assignment_cap)
{
    OptStats stats;
    stats.profiles = enumerate_profiles(inst, profile_cap);
    stats.item_probs.assign(static_cast<std::size_t>(inst.num_items()), 0.0);
    stats.optima.reserve(stats.profiles.size());
    stats.welfare.reserve(stats.profiles.size());

    for (const auto& profile : stats.profiles) {
        AllocationResult result = optimal_allocation(profile, assignment_cap);
        stats.expected_optimum += profile.probability * result.welfare;
        for (const Bundle b : result.allocation.bundles)
            for (int j : b.items())
                stats.item_probs[static_cast<std::size_t>(j)] += profile.probability;
        stats.welfare.push_back(result.welfare);
        stats.optima.push_back(std::move(result.allocation));
    }

    for (double q : stats.item_probs)
        if (std::abs(q - 1.0) > 1e-9)
            throw std::logic_error("opt_stats: full-allocation convention violated (q_j != 1)");
    return stats;
}

double expected_residual_optimum(const OptStats& stats, Bundle t)
{
    double total = 0.0;
    for (std::size_t p = 0; p < stats.profiles.size(); ++p) {
        const ValuationProfile& profile = stats.profiles[p];
        const Allocation& opt = stats.optima[p];
        double residual = 0.0;
        for (std::size_t i = 0; i < profile.num_agents(); ++i)
            residual += evaluate(profile.v(i), opt.bundle(i) - t);
        total += profile.probability * residual;
    }
    return total;
}

}  // namespace prophet

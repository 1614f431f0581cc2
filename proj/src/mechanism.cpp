#include "prophet/mechanism.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace prophet {

MechanismOutcome run_mechanism(const ValuationProfile& profile, const PriceVector& prices)
{
    const int m = profile.num_items();
    if (prices.num_items() != m)
        throw std::invalid_argument("run_mechanism: price universe mismatch");

    MechanismOutcome out;
    out.allocation.bundles.reserve(profile.num_agents());
    out.utilities.reserve(profile.num_agents());

    Bundle remaining = Bundle::full(m);
    for (std::size_t i = 0; i < profile.num_agents(); ++i) {
        const Bundle bought = demand(profile.v(i), prices, remaining);
        const double value = evaluate(profile.v(i), bought);
        const double paid = prices.total(bought);
        out.allocation.bundles.push_back(bought);
        out.utilities.push_back(value - paid);
        out.revenue += paid;
        out.welfare += value;
        remaining = remaining - bought;
    }
    out.sold = Bundle::full(m) - remaining;
    return out;
}

double expected_welfare_exact(const Instance& inst, const PriceVector& prices,
                              std::uint64_t profile_cap)
{
    double total = 0.0;
    for (const auto& profile : enumerate_profiles(inst, profile_cap))
        total += profile.probability * run_mechanism(profile, prices).welfare;
    return total;
}

MonteCarloEstimate expected_welfare_monte_carlo(const Instance& inst, const PriceVector& prices,
                                                std::uint64_t samples, std::uint64_t seed)
{
    if (samples == 0)
        throw std::invalid_argument("expected_welfare_monte_carlo: need at least one sample");
    std::mt19937_64 rng(seed);
    double sum = 0.0;
    double sum_sq = 0.0;
    for (std::uint64_t s = 0; s < samples; ++s) {
        const double w = run_mechanism(sample_profile(inst, rng), prices).welfare;
        sum += w;
        sum_sq += w * w;
    }
    const double n = static_cast<double>(samples);
    const double mean = sum / n;
    const double variance = std::max(0.0, (sum_sq - n * mean * mean) / std::max(1.0, n - 1.0));
    return {mean, std::sqrt(variance / n), samples};
}

Lemma1Bound lemma1_bound(const OptStats& stats, const PriceVector& prices, double beta)
{
    if (prices.num_items() != stats.num_items())
        throw std::invalid_argument("lemma1_bound: price universe mismatch");
    if (!(beta >= 0.0) || beta > 1.0)
        throw std::invalid_argument("lemma1_bound: beta must lie in [0, 1]");

    const int m = stats.num_items();
    Lemma1Bound best{std::numeric_limits<double>::infinity(), Bundle()};
    for_each_subset(Bundle::full(m), [&](Bundle t) {
        double value = prices.total(t);
        if (beta > 0.0) {
            double utility = 0.0;
            for (std::size_t p = 0; p < stats.num_profiles(); ++p) {
                const ValuationProfile& profile = stats.profiles[p];
                double inner = 0.0;
                for (std::size_t i = 0; i < profile.num_agents(); ++i) {
                    const Bundle surviving = stats.optima[p].bundle(i) - t;
                    inner += evaluate(profile.v(i), surviving) - prices.total(surviving);
                }
                utility += profile.probability * inner;
            }
            value += beta * utility;
        }
        if (value < best.bound) best = {value, t};
    });
    return best;
}

Lemma1Bound lemma1_bound(const Instance& inst, const PriceVector& prices, double beta)
{
    return lemma1_bound(opt_stats(inst), prices, beta);
}

}  // namespace prophet

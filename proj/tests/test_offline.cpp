#include <doctest.h>

#include <random>

#include "prophet/offline.hpp"
#include "test_support.hpp"

using namespace prophet;
using test_support::additive;
using test_support::deterministic;

TEST_CASE("optimal allocation on hand-checked cases")
{
    // one agent takes everything
    const Instance solo = test_support::xos_pair();
    const auto solo_profiles = enumerate_profiles(solo);
    const auto solo_opt = optimal_allocation(solo_profiles[0]);
    CHECK(solo_opt.allocation.bundle(0) == Bundle::full(2));
    CHECK(solo_opt.welfare == doctest::Approx(3.0));

    // two agents, one item, additive values 1 and 3: the item goes to the
    // second agent
    std::vector<AgentPrior> agents;
    agents.push_back(deterministic(additive({1.0})));
    agents.push_back(deterministic(additive({3.0})));
    const Instance duo(1, ValuationClass::Xos, 1, std::move(agents));
    const auto duo_opt = optimal_allocation(enumerate_profiles(duo)[0]);
    CHECK(duo_opt.allocation.bundle(0) == Bundle());
    CHECK(duo_opt.allocation.bundle(1) == Bundle::single(0));
    CHECK(duo_opt.welfare == doctest::Approx(3.0));

    // identical valuations: lexicographic tie-break hands everything to the
    // first agent
    std::vector<AgentPrior> twins;
    twins.push_back(deterministic(additive({1.0, 1.0})));
    twins.push_back(deterministic(additive({1.0, 1.0})));
    const Instance twin_inst(2, ValuationClass::Xos, 1, std::move(twins));
    const auto twin_opt = optimal_allocation(enumerate_profiles(twin_inst)[0]);
    CHECK(twin_opt.allocation.bundle(0) == Bundle::full(2));
    CHECK(twin_opt.allocation.bundle(1) == Bundle());

    CHECK(opt_bundle(enumerate_profiles(duo)[0], 1) == Bundle::single(0));
}

TEST_CASE("optimal allocations are disjoint, full, and deterministic")
{
    std::mt19937_64 rng(31);
    for (int round = 0; round < 8; ++round) {
        const ValuationClass cls = round % 2 == 0 ? ValuationClass::Xos : ValuationClass::Mph;
        const Instance inst = generate_random_instance(cls, 4, 3, 2, 2, rng);
        for (const auto& profile : enumerate_profiles(inst)) {
            const auto result = optimal_allocation(profile);
            Bundle seen;
            for (const Bundle b : result.allocation.bundles) {
                CHECK(!seen.intersects(b));
                seen = seen | b;
            }
            CHECK(seen == Bundle::full(4));
            CHECK(result.allocation.covers(4));

            const auto again = optimal_allocation(profile);
            CHECK(again.allocation.bundles == result.allocation.bundles);
            CHECK(again.welfare == result.welfare);
        }
    }
}

TEST_CASE("assignment cap is enforced")
{
    std::mt19937_64 rng(5);
    const Instance inst = generate_random_instance(ValuationClass::Xos, 4, 3, 1, 1, rng);
    const auto profile = enumerate_profiles(inst)[0];
    CHECK_THROWS_AS(static_cast<void>(optimal_allocation(profile, 80)), std::runtime_error);
    CHECK_NOTHROW(static_cast<void>(optimal_allocation(profile, 81)));  // 3^4 = 81
}

TEST_CASE("opt_stats on hand-checked cases")
{
    // deterministic single agent: expectation is the full-bundle value
    const Instance pair_inst = test_support::xos_pair();
    const OptStats solo = opt_stats(pair_inst);
    CHECK(solo.expected_optimum == doctest::Approx(3.0));
    CHECK(solo.item_probs == std::vector<double>{1.0, 1.0});
    CHECK(solo.num_profiles() == 1);

    // the tightness probe: E[OPT] = 0.1*10 + 0.9*1 = 1.9
    const Instance tight_inst = test_support::tightness_instance();
    const OptStats tight = opt_stats(tight_inst);
    CHECK(tight.expected_optimum == doctest::Approx(1.9).epsilon(1e-12));
    CHECK(tight.num_profiles() == 2);
    REQUIRE(tight.item_probs.size() == 1);
    CHECK(tight.item_probs[0] == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("item allocation probabilities always total one")
{
    std::mt19937_64 rng(77);
    for (int round = 0; round < 6; ++round) {
        const ValuationClass cls = round % 2 == 0 ? ValuationClass::Xos : ValuationClass::Mph;
        const Instance inst = generate_random_instance(cls, 3, 2, 2, 3, rng);
        const OptStats stats = opt_stats(inst);
        for (double q : stats.item_probs) CHECK(q == doctest::Approx(1.0).epsilon(1e-9));
        CHECK(stats.expected_optimum >= 0.0);
    }
}

TEST_CASE("expected residual optimum on hand-checked cases")
{
    const Instance pair_inst = test_support::xos_pair();
    const OptStats solo = opt_stats(pair_inst);
    // OPT bundle is {0,1} with value 3 = max(2+1, 0+3)
    CHECK(expected_residual_optimum(solo, Bundle()) == doctest::Approx(3.0));
    CHECK(expected_residual_optimum(solo, Bundle::single(0)) == doctest::Approx(3.0));
    CHECK(expected_residual_optimum(solo, Bundle::single(1)) == doctest::Approx(2.0));
    CHECK(expected_residual_optimum(solo, Bundle::full(2)) == 0.0);

    const Instance tight_inst = test_support::tightness_instance();
    const OptStats tight = opt_stats(tight_inst);
    CHECK(expected_residual_optimum(tight, Bundle()) ==
          doctest::Approx(1.9).epsilon(1e-12));
    CHECK(expected_residual_optimum(tight, Bundle::single(0)) == 0.0);
}

TEST_CASE("full allocation matches the independent partial-allocation oracle")
{
    std::mt19937_64 rng(13);
    int checked = 0;
    while (checked < 40) {
        const ValuationClass cls = checked % 2 == 0 ? ValuationClass::Xos : ValuationClass::Mph;
        const Instance inst = generate_random_instance(cls, 3, 2, 2, 2, rng);
        for (const auto& profile : enumerate_profiles(inst)) {
            const double full = optimal_allocation(profile).welfare;
            const double partial = test_support::partial_allocation_optimum(profile);
            CHECK(full == doctest::Approx(partial).epsilon(1e-12));
            ++checked;
        }
    }
}

#include "doctest.h"

#include "prophet/theory.hpp"

#include <cmath>
#include <random>
#include <stdexcept>

#include "test_support.hpp"

using namespace prophet;
using namespace test_support;

TEST_CASE("closed-form parameters")
{
    auto single = parameters_for(ParameterClass::SingleItem);
    CHECK(single.params.alpha == 2.0);
    CHECK(single.params.beta == 1.0);
    CHECK(single.k == 1);

    auto xos_params = parameters_for(ParameterClass::Xos);
    CHECK(xos_params.params.alpha == 2.0);
    CHECK(xos_params.params.beta == 1.0);

    auto balanced2 = parameters_for(ParameterClass::MphBalanced, 2);
    CHECK(balanced2.params.alpha == doctest::Approx(6.0).epsilon(1e-12));
    CHECK(balanced2.params.beta == doctest::Approx(0.5).epsilon(1e-12));

    auto balanced3 = parameters_for(ParameterClass::MphBalanced, 3);
    CHECK(balanced3.params.alpha == doctest::Approx(10.0).epsilon(1e-12));
    CHECK(balanced3.params.beta == doctest::Approx(0.25).epsilon(1e-12));

    auto improved2 = parameters_for(ParameterClass::MphImproved, 2);
    CHECK(improved2.params.alpha ==
          doctest::Approx(3.0 + 2.0 * std::sqrt(2.0)).epsilon(1e-12));
    CHECK(improved2.params.beta == doctest::Approx(std::sqrt(2.0) - 1.0).epsilon(1e-12));

    CHECK_THROWS_AS(parameters_for(ParameterClass::MphBalanced, 1), std::domain_error);
    CHECK_THROWS_AS(parameters_for(ParameterClass::MphImproved, 1), std::domain_error);
    CHECK_THROWS_AS(parameters_for(ParameterClass::MphImproved, 0), std::domain_error);

    CHECK(to_string(ParameterClass::SingleItem) == "single_item");
    CHECK(to_string(ParameterClass::Xos) == "xos");
    CHECK(to_string(ParameterClass::MphBalanced) == "mph_balanced");
    CHECK(to_string(ParameterClass::MphImproved) == "mph_improved");
}

TEST_CASE("instance routing")
{
    auto xos_inst = xos_pair();
    auto routed = parameters_for_instance(xos_inst);
    CHECK(routed.cls == ParameterClass::Xos);
    CHECK(routed.params.alpha == 2.0);

    // rank-1 MPH is XOS regardless of the requested variant
    std::vector<AgentPrior> agents;
    agents.push_back(deterministic(additive({1.0})));
    Instance mph1(1, ValuationClass::Mph, 1, std::move(agents));
    CHECK(parameters_for_instance(mph1, MphVariant::Improved).cls == ParameterClass::Xos);

    std::mt19937_64 rng(3);
    auto mph2 = generate_random_instance(ValuationClass::Mph, 3, 2, 2, 2, rng);
    auto balanced = parameters_for_instance(mph2, MphVariant::Balanced);
    CHECK(balanced.cls == ParameterClass::MphBalanced);
    CHECK(balanced.params.alpha == doctest::Approx(6.0).epsilon(1e-12));
    auto improved = parameters_for_instance(mph2, MphVariant::Improved);
    CHECK(improved.cls == ParameterClass::MphImproved);
    CHECK(improved.params.beta == doctest::Approx(std::sqrt(2.0) - 1.0).epsilon(1e-12));
}

TEST_CASE("parameter identity holds exactly for both families")
{
    for (int k = 2; k <= 10; ++k) {
        auto balanced = parameters_for(ParameterClass::MphBalanced, k);
        CHECK(std::abs(mph_identity_residual(k, balanced.params.alpha, balanced.params.beta)) <=
              1e-12);
        auto improved = parameters_for(ParameterClass::MphImproved, k);
        CHECK(std::abs(mph_identity_residual(k, improved.params.alpha, improved.params.beta)) <=
              1e-12);
    }

    // a mismatched beta breaks it: k=2, alpha=6, beta=1 gives (1 - 1) - 1/6
    CHECK(mph_identity_residual(2, 6.0, 1.0) == doctest::Approx(-1.0 / 6.0).epsilon(1e-12));
}

TEST_CASE("improved alpha beats balanced alpha for every k")
{
    for (int k = 2; k <= 64; ++k) {
        auto balanced = parameters_for(ParameterClass::MphBalanced, k);
        auto improved = parameters_for(ParameterClass::MphImproved, k);
        CHECK(improved.params.alpha < balanced.params.alpha);
    }
}

TEST_CASE("claim margin frozen values")
{
    Parameters params(2.0, 1.0);

    DualCertificate half(1, {0.5, 0.5});
    Valuation unit = additive({1.0});
    CHECK(check_claim1(half, unit, Bundle{}.with(0), params) ==
          doctest::Approx(0.0).epsilon(1e-12));
    CHECK(check_claim1(half, unit, Bundle{}, params) == doctest::Approx(0.0).epsilon(1e-12));

    // mu concentrated on the empty set never removes anything:
    // margin = v(S) (1 - 1/(alpha beta))
    DualCertificate empty_only(2, {1.0, 0.0, 0.0, 0.0});
    Valuation pair = xos({{2.0, 1.0}, {0.0, 3.0}});
    CHECK(check_claim1(empty_only, pair, Bundle::full(2), params) ==
          doctest::Approx(1.5).epsilon(1e-12));
}

TEST_CASE("worst claim margin sweeps every agent, draw, and subset")
{
    auto inst = tightness_instance();
    Parameters params(2.0, 1.0);
    // mu on {0} wipes out every bundle: worst case is the highest value draw
    DualCertificate item_only(1, {0.0, 1.0});
    auto worst = claim1_worst_margin(item_only, inst, params);
    CHECK(worst.margin == doctest::Approx(-5.0).epsilon(1e-12));  // 0 - 10/2
    CHECK(worst.agent == 1);
    CHECK(worst.support_point == 0);
    CHECK(worst.s == Bundle{}.with(0));

    DualCertificate half(1, {0.5, 0.5});
    auto ok = claim1_worst_margin(half, inst, params);
    CHECK(ok.margin == doctest::Approx(0.0).epsilon(1e-12));

    DualCertificate wrong_size(2, {0.25, 0.25, 0.25, 0.25});
    CHECK_THROWS_AS(claim1_worst_margin(wrong_size, inst, params), std::invalid_argument);
}

TEST_CASE("hyperedge survival frozen values")
{
    DualCertificate cert(2, {4.0 / 9.0, 2.0 / 9.0, 2.0 / 9.0, 1.0 / 9.0});
    CHECK(check_hyperedge_survival(cert, Bundle::full(2), 2, 0.5) ==
          doctest::Approx(1.0 / 9.0).epsilon(1e-12));

    // |X| = 1 at beta = 1 reduces to the per-item feasibility margin
    Parameters params(2.0, 1.0);
    DualCertificate skew(1, {0.7, 0.3});
    CHECK(check_hyperedge_survival(skew, Bundle{}.with(0), 1, 1.0) ==
          doctest::Approx(check_dual_feasible(skew, params)[0]).epsilon(1e-12));

    // empty hyperedges always survive
    CHECK(check_hyperedge_survival(cert, Bundle{}, 2, 0.5) ==
          doctest::Approx(2.0 * 0.5 / 1.5).epsilon(1e-12));

    CHECK_THROWS_AS(check_hyperedge_survival(cert, Bundle::full(2), 1, 1.0),
                    std::invalid_argument);
}

TEST_CASE("feasible certificates keep hyperedges alive")
{
    std::mt19937_64 rng(11);
    for (int k : {2, 3}) {
        const double beta = parameters_for(ParameterClass::MphBalanced, k).params.beta;
        for (int rep = 0; rep < 6; ++rep) {
            const int m = 3 + rep % 2;
            auto cert = random_feasible_certificate(m, beta, rng);
            for_each_subset(Bundle::full(m), [&](Bundle x) {
                if (x.size() > k) return;
                CHECK(check_hyperedge_survival(cert, x, k, beta) >= -1e-7);
            });
        }
    }
}

TEST_CASE("optimal dual certificates satisfy the claim on class instances")
{
    std::mt19937_64 rng(314);
    for (int trial = 0; trial < 9; ++trial) {
        Instance inst = [&] {
            switch (trial % 3) {
                case 0: return generate_random_instance(ValuationClass::Xos, 3, 2, 2, 1, rng);
                case 1: return generate_random_instance(ValuationClass::Mph, 3, 2, 2, 2, rng);
                default: return generate_random_instance(ValuationClass::Mph, 3, 2, 2, 3, rng);
            }
        }();
        const auto variant = trial % 2 == 0 ? MphVariant::Balanced : MphVariant::Improved;
        const Parameters params = parameters_for_instance(inst, variant).params;
        auto stats = opt_stats(inst);

        auto dual = solve_lp(build_dual(stats, params));
        REQUIRE(dual.status == LpStatus::Optimal);
        auto cert = certificate_from_dual(dual, inst.num_items());

        for (double g : check_dual_feasible(cert, params)) CHECK(g >= -1e-9);
        CHECK(claim1_worst_margin(cert, inst, params).margin >= -1e-7);
        CHECK(dual_objective(cert, stats, params) >= -1e-7);
    }
}

TEST_CASE("any feasible certificate gives a nonnegative dual objective")
{
    std::mt19937_64 rng(2718);
    for (int trial = 0; trial < 8; ++trial) {
        const bool xos_trial = trial % 2 == 0;
        auto inst = xos_trial
                        ? generate_random_instance(ValuationClass::Xos, 3, 2, 2, 1, rng)
                        : generate_random_instance(ValuationClass::Mph, 3, 2, 2, 2, rng);
        const Parameters params =
            parameters_for_instance(inst, trial % 4 == 1 ? MphVariant::Improved
                                                         : MphVariant::Balanced)
                .params;
        auto stats = opt_stats(inst);
        for (int rep = 0; rep < 5; ++rep) {
            auto cert = random_feasible_certificate(inst.num_items(), params.beta, rng);
            CHECK(claim1_worst_margin(cert, inst, params).margin >= -1e-7);
            CHECK(dual_objective(cert, stats, params) >= -1e-7);
        }
    }
}

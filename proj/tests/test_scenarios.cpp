#include <doctest.h>

#include <cmath>

#include "beliefdyn/likelihood.hpp"
#include "beliefdyn/scenarios.hpp"
#include "testutil.hpp"

using namespace beliefdyn;
using testutil::prob_at;

TEST_CASE("counterexample variant 1: likelihood structure") {
    double alpha = 0.5;
    auto ic = counterexample_ic(1, alpha, 60);
    CHECK(ic.agents() == 6);
    auto cent = perron(ic.graph());
    auto l = weighted_likelihood(ic, cent);
    // L(theta) = alpha * L(0) for every theta >= 1.
    for (int theta = 1; theta <= 60; ++theta)
        CHECK(l.logl[theta] - l.logl[0] == doctest::Approx(std::log(alpha)).epsilon(1e-9));
}

TEST_CASE("counterexample variant 1: simulated mass bound and closed form") {
    for (double alpha : {0.3, 0.5, 0.7}) {
        auto ic = counterexample_ic(1, alpha, 60);
        auto traj = simulate(ic, 8);
        REQUIRE_FALSE(traj.degenerate_round);
        double bound = 1.0 / (1.0 + 1.0 / alpha);
        for (int t = 1; t <= 8; ++t) {
            double got = prob_at(traj.rounds[t][0], 0);
            CHECK(got <= bound + 1e-6);
            // Exact closed form of the x-team mass at 0.
            double denom = 1.0;
            for (int theta = 1; theta <= 60; ++theta) {
                double e = std::pow(std::ldexp(1.0, theta) - std::ldexp(1.0, t), 2.0) - 1.0;
                denom += std::pow(alpha, e);
            }
            CHECK(got == doctest::Approx(1.0 / denom).epsilon(1e-7));
        }
    }
}

TEST_CASE("counterexample variant 2: gap decays, mass bound holds") {
    double alpha = 0.5;
    auto ic = counterexample_ic(2, alpha, 60);
    auto cent = perron(ic.graph());
    auto l = weighted_likelihood(ic, cent);
    // L(theta) = alpha^(4^-theta) L(0): ratios head to 1.
    for (int theta = 1; theta <= 20; ++theta) {
        double want = std::ldexp(1.0, -2 * theta) * std::log(alpha);
        CHECK(l.logl[theta] - l.logl[0] == doctest::Approx(want).epsilon(1e-9));
    }
    auto traj = simulate(ic, 8);
    double bound = 1.0 / (1.0 + alpha);
    for (int t = 1; t <= 8; ++t) CHECK(prob_at(traj.rounds[t][0], 0) <= bound + 1e-6);
}

TEST_CASE("counterexample validation") {
    CHECK_THROWS_AS(counterexample_ic(3, 0.5, 60), Error);
    CHECK_THROWS_AS(counterexample_ic(1, 1.5, 60), Error);
    CHECK_THROWS_AS(counterexample_ic(1, 0.5, 30), Error);
}

TEST_CASE("two-team initial conditions") {
    auto ic = ab_example_ic(3, 1, 0.3);
    CHECK(ic.agents() == 6);
    CHECK(prob_at(ic.beliefs()[0], 0) == doctest::Approx(0.3).epsilon(1e-12));
    CHECK(prob_at(ic.beliefs()[3], 0) == doctest::Approx(0.7).epsilon(1e-12));

    // Minority view dies: mass below 1e-6 by round 15.
    auto traj = simulate(ic, 15);
    CHECK(prob_at(traj.rounds[15][0], 0) <= 1e-6);

    // (1,3): even rounds head to state 1's certainty, odd rounds to state 0's.
    auto traj13 = simulate(ab_example_ic(1, 3, 0.3), 20);
    for (int t = 6; t <= 20; ++t) {
        double got = prob_at(traj13.rounds[t][0], 0);
        if (t % 2 == 0)
            CHECK(got <= 1e-6);
        else
            CHECK(got >= 1.0 - 1e-6);
    }
}

TEST_CASE("bbcm: all agents seeded with equal signals stay put") {
    auto g = cycle_graph(9, true);
    std::vector<int> seeds(9);
    for (int i = 0; i < 9; ++i) seeds[i] = i;
    std::vector<double> signals(9, 3.5);
    auto traj = bbcm_simulate(g, seeds, signals, 10);
    for (const auto& state : traj)
        for (double v : state.values) CHECK(v == doctest::Approx(3.5).epsilon(1e-12));
}

TEST_CASE("bbcm: informedness spreads one hop per side per round") {
    auto g = cycle_graph(9, true);
    auto traj = bbcm_simulate(g, {0}, {1.0}, 4);
    for (int t = 0; t <= 4; ++t) {
        int informed = 0;
        for (auto b : traj[t].informed) informed += b;
        CHECK(informed == std::min(9, 1 + 2 * t));
    }
    // Uninformed agents hold no value.
    CHECK(std::isnan(traj[0].values[4]));
}

TEST_CASE("bbcm blocking: middle seed weight shrinks") {
    auto g9 = cycle_graph(9, true);
    auto w9 = extract_seeding_weights(SeedingModel::Bbcm, g9, {3, 4, 5}, nullptr, 100000);
    CHECK(w9.weights[1] < w9.weights[0]);
    CHECK(w9.weights[1] < w9.weights[2]);
    double total = w9.weights[0] + w9.weights[1] + w9.weights[2];
    CHECK(total == doctest::Approx(1.0).epsilon(1e-6));

    auto g51 = cycle_graph(51, true);
    auto w51 = extract_seeding_weights(SeedingModel::Bbcm, g51, {24, 25, 26}, nullptr, 100000);
    CHECK(w51.weights[1] <= 0.05);
    CHECK(w51.weights[0] >= 0.45);
    CHECK(w51.weights[2] >= 0.45);
    CHECK(w51.weights[1] < w9.weights[1]);

    CHECK_THROWS_AS(
        extract_seeding_weights(SeedingModel::Bbcm, g51, {24, 25, 26}, nullptr, 50),
        BbcmNotConverged);
}

TEST_CASE("naive seeding weights: equal thirds, rotation invariant") {
    auto g = cycle_graph(51, true);
    auto w = extract_seeding_weights(SeedingModel::NaiveBayes, g, {24, 25, 26}, nullptr, 0);
    for (double wi : w.weights) CHECK(wi == doctest::Approx(1.0 / 3).epsilon(1e-9));

    auto w2 = extract_seeding_weights(SeedingModel::NaiveBayes, g, {0, 1, 2}, nullptr, 0);
    for (int i = 0; i < 3; ++i)
        CHECK(w2.weights[i] == doctest::Approx(w.weights[i]).epsilon(1e-9));

    // Unequal precisions tilt the weights.
    std::vector<double> tau = {2.0, 1.0, 1.0};
    auto wt = extract_seeding_weights(SeedingModel::NaiveBayes, g, {24, 25, 26}, &tau, 0);
    CHECK(wt.weights[0] == doctest::Approx(0.5).epsilon(1e-9));
    CHECK(wt.weights[1] == doctest::Approx(0.25).epsilon(1e-9));
}

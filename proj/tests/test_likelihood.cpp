#include <doctest.h>

#include <cmath>
#include <random>

#include "beliefdyn/likelihood.hpp"
#include "beliefdyn/scenarios.hpp"
#include "testutil.hpp"

using namespace beliefdyn;

namespace {

InitialCondition bernoulli_ic(const DirectedGraph& g, const std::vector<double>& x) {
    auto space = StateSpace::finite_discrete({0.0, 1.0});
    auto prior = flat_prior(space);
    std::vector<LogBelief> beliefs;
    for (double xi : x) beliefs.push_back(bernoulli_belief(xi));
    return InitialCondition(g, prior, beliefs);
}

}  // namespace

TEST_CASE("weighted likelihood basics") {
    // Identical beliefs: logL equals the common logg since the weights sum to 1.
    auto g = complete_graph(3);
    auto ic = bernoulli_ic(g, {0.8, 0.8, 0.8});
    auto cent = perron(g);
    auto l = weighted_likelihood(ic, cent);
    CHECK(l.logl[0] == doctest::Approx(std::log(0.2)).epsilon(1e-12));
    CHECK(l.logl[1] == doctest::Approx(std::log(0.8)).epsilon(1e-12));

    // Two agents (0.9, 0.2): L ~ (sqrt(0.08), sqrt(0.18)): argmax state 1.
    auto g2 = complete_graph(2);
    auto ic2 = bernoulli_ic(g2, {0.9, 0.2});
    auto l2 = weighted_likelihood(ic2, perron(g2));
    CHECK(l2.logl[1] > l2.logl[0]);
    CHECK(l2.logl[1] == doctest::Approx(0.5 * std::log(0.18)).epsilon(1e-12));

    // A zero belief point forces logL = -inf there.
    auto space = StateSpace::finite_discrete({0.0, 1.0});
    std::vector<LogBelief> beliefs = {
        belief_from_density(space, std::vector<double>{1.0, 1.0}),
        belief_from_density(space, std::vector<double>{0.0, 1.0})};
    InitialCondition icz(g2, flat_prior(space), beliefs);
    auto lz = weighted_likelihood(icz, perron(g2));
    CHECK(lz.logl[0] == -std::numeric_limits<double>::infinity());
}

TEST_CASE("argmax set is invariant under a common rescaling of g") {
    std::mt19937_64 rng(29);
    for (int rep = 0; rep < 20; ++rep) {
        auto ic = testutil::random_ic(rng, 5, 7);
        auto l = weighted_likelihood(ic, perron(ic.graph()));
        auto base = argmax_set(l.logl);
        std::uniform_real_distribution<double> shift_dist(-3.0, 3.0);
        double shift = shift_dist(rng);  // log of the common constant
        auto shifted = l.logl;
        for (auto& v : shifted) v += shift;
        CHECK(argmax_set(shifted) == base);
    }
}

TEST_CASE("predict_consensus: poisson family") {
    auto g = complete_graph(2);
    auto space = StateSpace::truncated_integers(2000);
    auto prior = flat_prior(space);

    // Non-integer rate: unique maximizer at floor.
    std::vector<LogBelief> beliefs = {poisson_belief(space, 2.0), poisson_belief(space, 1000.0)};
    InitialCondition ic(g, prior, beliefs);
    auto rep = predict_consensus(weighted_likelihood(ic, perron(g)), ic);
    REQUIRE(rep.predicted_point.has_value());
    CHECK(*rep.predicted_point == 44.0);
    for (const auto& c : rep.conditions)
        CHECK(c.passed);

    // Integer rate: two maximizers {rate-1, rate}.
    std::vector<LogBelief> b4 = {poisson_belief(space, 4.0), poisson_belief(space, 4.0)};
    InitialCondition ic4(g, prior, b4);
    auto rep4 = predict_consensus(weighted_likelihood(ic4, perron(g)), ic4);
    CHECK(rep4.maximizer_indices == std::vector<int>{3, 4});
    CHECK_FALSE(rep4.predicted_point.has_value());
}

TEST_CASE("predict_consensus hypothesis flags on the counterexamples") {
    // Variant 1: unique maximizer at 0 with a positive gap, but the
    // bounded-g heuristic must flag unboundedness.
    auto ic1 = counterexample_ic(1, 0.5, 60);
    auto rep1 = predict_consensus(weighted_likelihood(ic1, perron(ic1.graph())), ic1);
    REQUIRE(rep1.predicted_point.has_value());
    CHECK(*rep1.predicted_point == 0.0);
    CHECK(rep1.log_gap == doctest::Approx(std::log(2.0)).epsilon(1e-9));
    for (const auto& c : rep1.conditions) {
        if (c.name == "positive_gap") CHECK(c.passed);
        if (c.name == "bounded_g") CHECK_FALSE(c.passed);
    }

    // Variant 2: gap decays to zero; the gap check must fail.
    auto ic2 = counterexample_ic(2, 0.5, 60);
    auto rep2 = predict_consensus(weighted_likelihood(ic2, perron(ic2.graph())), ic2);
    bool saw_gap = false;
    for (const auto& c : rep2.conditions) {
        if (c.name == "positive_gap") {
            saw_gap = true;
            CHECK_FALSE(c.passed);
        }
        if (c.name == "bounded_g") CHECK(c.passed);
    }
    CHECK(saw_gap);
}

TEST_CASE("predict_consensus grid decay check") {
    auto g = complete_graph(2);
    auto grid = StateSpace::grid(-10.0, 10.0, 2001);
    std::vector<LogBelief> beliefs = {gaussian_belief(grid, 0.0, 1.0),
                                      gaussian_belief(grid, 1.0, 1.0)};
    InitialCondition ic(g, flat_prior(grid), beliefs);
    auto rep = predict_consensus(weighted_likelihood(ic, perron(g)), ic);
    REQUIRE(rep.predicted_point.has_value());
    CHECK(*rep.predicted_point == doctest::Approx(0.5).epsilon(1e-9));
    for (const auto& c : rep.conditions) CHECK(c.passed);
}

TEST_CASE("binary consensus") {
    auto one = binary_consensus({0.9, 0.2}, {0.5, 0.5});
    CHECK(one.verdict == BinaryVerdict::StateOne);
    CHECK(one.tally == doctest::Approx(0.5 * (std::log(9.0) + std::log(0.25))).epsilon(1e-12));

    CHECK(binary_consensus({0.5, 0.5}, {0.5, 0.5}).verdict == BinaryVerdict::Tie);
    CHECK(binary_consensus({0.6, 0.4}, {0.5, 0.5}).verdict == BinaryVerdict::Tie);
    CHECK_THROWS_AS(binary_consensus({1.0, 0.5}, {0.5, 0.5}), Error);
}

TEST_CASE("binary consensus agrees with predict_consensus on random cases") {
    std::mt19937_64 rng(31);
    std::uniform_real_distribution<double> xs(0.05, 0.95);
    int checked = 0;
    while (checked < 200) {
        std::uniform_int_distribution<int> nn(2, 6);
        auto g = testutil::random_strongly_connected(rng, nn(rng));
        std::vector<double> x(g.n);
        for (auto& xi : x) xi = xs(rng);
        auto cent = perron(g);
        auto vote = binary_consensus(x, cent.v);
        if (std::abs(vote.tally) < 1e-6) continue;  // skip near-ties

        auto ic = bernoulli_ic(g, x);
        auto rep = predict_consensus(weighted_likelihood(ic, cent), ic);
        REQUIRE(rep.predicted_point.has_value());
        double want = vote.verdict == BinaryVerdict::StateOne ? 1.0 : 0.0;
        CHECK(*rep.predicted_point == want);
        ++checked;
    }
}

TEST_CASE("poisson consensus") {
    auto pc = poisson_consensus({2.0, 1000.0}, {0.5, 0.5});
    CHECK(pc.rate == doctest::Approx(std::sqrt(2000.0)).epsilon(1e-12));
    CHECK(pc.points == std::vector<long long>{44});
    CHECK(pc.additive_mean == doctest::Approx(501.0).epsilon(1e-12));

    auto equal = poisson_consensus({7.0, 7.0}, {0.5, 0.5});
    CHECK(equal.rate == doctest::Approx(7.0).epsilon(1e-12));
    CHECK(equal.points == std::vector<long long>{6, 7});
}

TEST_CASE("poisson consensus agrees with the truncated-likelihood argmax") {
    std::mt19937_64 rng(37);
    std::uniform_real_distribution<double> lam(0.5, 40.0);
    for (int rep = 0; rep < 25; ++rep) {
        std::uniform_int_distribution<int> nn(2, 5);
        auto g = testutil::random_strongly_connected(rng, nn(rng));
        std::vector<double> lambda(g.n);
        for (auto& l : lambda) l = lam(rng);
        auto cent = perron(g);
        auto pc = poisson_consensus(lambda, cent.v);
        if (std::abs(pc.rate - std::round(pc.rate)) < 1e-3) continue;  // avoid tie ambiguity

        auto space = StateSpace::truncated_integers(200);
        std::vector<LogBelief> beliefs;
        for (double l : lambda) beliefs.push_back(poisson_belief(space, l));
        InitialCondition ic(g, flat_prior(space), beliefs);
        auto report = predict_consensus(weighted_likelihood(ic, cent), ic);
        REQUIRE(report.predicted_point.has_value());
        CHECK(*report.predicted_point == doctest::Approx(double(pc.points[0])));
    }
}

TEST_CASE("gaussian consensus formulas") {
    auto gc = gaussian_consensus({0.0, 1.0}, {1.0, 1.0}, {0.5, 0.5});
    CHECK(gc.theta_max == doctest::Approx(0.5).epsilon(1e-12));
    CHECK(gc.weights[0] == doctest::Approx(0.5).epsilon(1e-12));
    CHECK(gc.variance == doctest::Approx(0.5).epsilon(1e-12));

    auto dominant = gaussian_consensus({0.0, 1.0}, {100.0, 1.0}, {0.5, 0.5});
    CHECK(dominant.weights[0] == doctest::Approx(100.0 / 101.0).epsilon(1e-12));
    CHECK(dominant.theta_max == doctest::Approx(1.0 / 101.0).epsilon(1e-10));

    // Perfect correlation doubles the two-agent variance.
    std::vector<std::vector<double>> rho = {{1.0, 1.0}, {1.0, 1.0}};
    auto correlated = gaussian_consensus({0.0, 1.0}, {1.0, 1.0}, {0.5, 0.5}, &rho);
    CHECK(correlated.variance == doctest::Approx(1.0).epsilon(1e-12));

    // Weight sum is exactly 1.
    std::mt19937_64 rng(61);
    std::uniform_real_distribution<double> taus(0.5, 10.0);
    for (int rep = 0; rep < 20; ++rep) {
        std::vector<double> tau(4), v = {0.1, 0.2, 0.3, 0.4};
        for (auto& t : tau) t = taus(rng);
        auto r = gaussian_consensus({0, 0, 0, 0}, tau, v);
        double sum = 0;
        for (double c : r.weights) sum += c;
        CHECK(sum == doctest::Approx(1.0).epsilon(1e-12));
    }

    std::vector<std::vector<double>> bad = {{1.0, 0.5}, {0.4, 1.0}};
    CHECK_THROWS_AS(gaussian_consensus({0, 1}, {1, 1}, {0.5, 0.5}, &bad),
                    InvalidCorrelationMatrix);
    std::vector<std::vector<double>> bad2 = {{1.0, 2.0}, {2.0, 1.0}};
    CHECK_THROWS_AS(gaussian_consensus({0, 1}, {1, 1}, {0.5, 0.5}, &bad2),
                    InvalidCorrelationMatrix);
}

TEST_CASE("correlated variance is nondecreasing in each correlation") {
    std::vector<double> tau = {1.0, 2.0, 4.0}, v = {0.2, 0.3, 0.5};
    double prev = -1.0;
    for (double r12 = -0.5; r12 <= 1.0 + 1e-9; r12 += 0.1) {
        std::vector<std::vector<double>> rho = {
            {1.0, r12, 0.2}, {r12, 1.0, 0.2}, {0.2, 0.2, 1.0}};
        auto gc = gaussian_consensus({0, 0, 0}, tau, v, &rho);
        CHECK(gc.variance >= prev);
        prev = gc.variance;
    }
}

TEST_CASE("precision effect") {
    // Uniform centrality: raising one agent's precision always helps.
    std::vector<double> tau_grid;
    for (double t = 0.05; t <= 5.0; t += 0.05) tau_grid.push_back(t);
    auto uniform = precision_effect({1.0, 1.0, 1.0, 1.0}, {0.25, 0.25, 0.25, 0.25}, 0, tau_grid);
    CHECK(uniform.monotone_decreasing);
    CHECK(uniform.stationary_tau <= 0.0);

    // Star-like centrality: the variance peaks at the analytic threshold.
    std::vector<double> fine;
    for (double t = 0.005; t <= 2.0; t += 0.0005) fine.push_back(t);
    auto star = precision_effect({1.0, 1.0, 1.0, 1.0}, {0.7, 0.1, 0.1, 0.1}, 0, fine);
    CHECK_FALSE(star.monotone_decreasing);
    REQUIRE(star.interior_maximum_tau.has_value());
    // threshold V = 2*0.03/0.3 = 0.2, stationary tau = (0.7-0.2)*0.3/0.49
    double expected = (0.7 - 0.2) * 0.3 / (0.7 * 0.7);
    CHECK(star.stationary_tau == doctest::Approx(expected).epsilon(1e-12));
    CHECK(*star.interior_maximum_tau == doctest::Approx(expected).epsilon(0.01));

    // Two agents with equal centrality sit exactly at the threshold.
    auto pair = precision_effect({1.0, 1.0}, {0.5, 0.5}, 0, tau_grid);
    CHECK(pair.monotone_decreasing);
    CHECK(pair.stationary_tau <= 1e-12);
}

TEST_CASE("monte carlo variance estimate") {
    // tau = (1,1): S = 0.5; the sample variance of 1e5 draws lands within 5%.
    auto mc = estimate_consensus_variance(0.0, {1.0, 1.0}, {0.5, 0.5}, 100000, 12345);
    CHECK(std::abs(mc.sample_variance - 0.5) / 0.5 < 0.05);
    CHECK(std::abs(mc.sample_mean) <= 4.0 * std::sqrt(0.5 / 100000));
    CHECK(mc.seed == 12345);

    // Identity correlation reproduces the uncorrelated estimate's target.
    std::vector<std::vector<double>> eye = {{1.0, 0.0}, {0.0, 1.0}};
    auto mc_eye = estimate_consensus_variance(0.0, {1.0, 1.0}, {0.5, 0.5}, 100000, 12345, &eye);
    CHECK(std::abs(mc_eye.sample_variance - 0.5) / 0.5 < 0.05);

    // Deterministic for a fixed seed.
    auto again = estimate_consensus_variance(0.0, {1.0, 1.0}, {0.5, 0.5}, 100000, 12345);
    CHECK(again.sample_variance == mc.sample_variance);

    CHECK_THROWS_AS(estimate_consensus_variance(0.0, {1.0}, {1.0}, 10, 1), Error);
}

#include "beliefdyn/scenarios.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <set>

namespace beliefdyn {

namespace {
constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();
}

InitialCondition counterexample_ic(int variant, double alpha, int theta_max) {
    if (variant != 1 && variant != 2) throw Error("counterexample variant must be 1 or 2");
    if (!(alpha > 0.0 && alpha < 1.0)) throw Error("alpha must lie in (0,1)");
    if (theta_max < 40) throw Error("theta_max must be at least 40");
    if (theta_max > 400) throw Error("theta_max above 400 exceeds the double exponent range");

    auto graph = build_ab_graph(3, 1);
    auto space = StateSpace::truncated_integers(theta_max);
    const double la = std::log(alpha);

    LogPrior prior;
    prior.space = space;
    prior.logf.resize(space.size());
    std::vector<double> shape_x(space.size()), shape_y(space.size());
    if (variant == 1) {
        // f*(theta) = alpha^(4^theta), f_x/f_y differ from it by a factor
        // alpha^(-+2^(theta+1)); ldexp keeps those multiples of log(alpha)
        // exact so the x and y shapes cancel pointwise to machine zero.
        prior.logf[0] = la;
        shape_x[0] = -la;
        shape_y[0] = -la;
        for (int t = 1; t <= theta_max; ++t) {
            prior.logf[t] = std::ldexp(la, 2 * t);
            shape_x[t] = -std::ldexp(la, t + 1);
            shape_y[t] = std::ldexp(la, t + 1);
        }
    } else {
        // f*(theta) = alpha^(2^theta); the shapes stay O(1) and the gap of
        // the weighted likelihood decays like alpha^(4^-theta).
        prior.logf[0] = 0.0;
        shape_x[0] = 0.0;
        shape_y[0] = 0.0;
        for (int t = 1; t <= theta_max; ++t) {
            prior.logf[t] = std::ldexp(la, t);
            shape_x[t] = std::ldexp(la, -2 * t) - la;
            shape_y[t] = std::ldexp(la, -2 * t) + la;
        }
    }
    // The underlying infinite sums converge for both variants.
    prior.proper = true;

    std::vector<NormalizedBelief> gs;
    gs.reserve(6);
    for (int i = 0; i < 3; ++i) gs.push_back(normalized_from_shape(prior, shape_x));
    for (int i = 0; i < 3; ++i) gs.push_back(normalized_from_shape(prior, shape_y));
    return InitialCondition(std::move(graph), std::move(prior), std::move(gs));
}

InitialCondition ab_example_ic(int a, int b, double alpha) {
    if (!(alpha > 0.0 && alpha < 1.0)) throw Error("alpha must lie in (0,1)");
    auto graph = build_ab_graph(a, b);
    const int c = std::max(a, b);
    auto space = StateSpace::finite_discrete({0.0, 1.0});
    auto prior = flat_prior(space);
    std::vector<double> x_density = {alpha, 1.0 - alpha};
    std::vector<double> y_density = {1.0 - alpha, alpha};
    std::vector<LogBelief> beliefs;
    beliefs.reserve(2 * c);
    for (int i = 0; i < c; ++i) beliefs.push_back(belief_from_density(space, x_density));
    for (int i = 0; i < c; ++i) beliefs.push_back(belief_from_density(space, y_density));
    return InitialCondition(std::move(graph), std::move(prior), std::move(beliefs));
}

BBCMState bbcm_step(const DirectedGraph& g, const BBCMState& s) {
    BBCMState next = s;
    for (int i = 0; i < g.n; ++i) {
        double acc = 0.0;
        int count = 0;
        for (int j : g.in_nbrs[i]) {
            if (s.informed[j]) {
                acc += s.values[j];
                ++count;
            }
        }
        if (count > 0) {
            next.values[i] = acc / count;
            next.informed[i] = 1;
        }
    }
    return next;
}

std::vector<BBCMState> bbcm_simulate(const DirectedGraph& g, const std::vector<int>& seeds,
                                     const std::vector<double>& signals, int rounds) {
    if (seeds.empty()) throw Error("need at least one seed");
    if (signals.size() != seeds.size()) throw Error("need one signal per seed");
    if (rounds < 0) throw Error("round count must be nonnegative");
    std::set<int> seen;
    BBCMState state;
    state.values.assign(g.n, kNaN);
    state.informed.assign(g.n, 0);
    for (std::size_t k = 0; k < seeds.size(); ++k) {
        int s = seeds[k];
        if (s < 0 || s >= g.n) throw Error("seed index out of range");
        if (!seen.insert(s).second) throw Error("duplicate seed");
        state.values[s] = signals[k];
        state.informed[s] = 1;
    }
    std::vector<BBCMState> traj;
    traj.reserve(rounds + 1);
    traj.push_back(state);
    for (int t = 0; t < rounds; ++t) {
        state = bbcm_step(g, state);
        traj.push_back(state);
    }
    return traj;
}

namespace {

double bbcm_basis_weight(const DirectedGraph& g, const std::vector<int>& seeds,
                         std::size_t which, int rounds) {
    BBCMState state;
    state.values.assign(g.n, kNaN);
    state.informed.assign(g.n, 0);
    for (std::size_t k = 0; k < seeds.size(); ++k) {
        state.values[seeds[k]] = (k == which) ? 1.0 : 0.0;
        state.informed[seeds[k]] = 1;
    }
    double spread = std::numeric_limits<double>::infinity();
    for (int t = 0; t < rounds; ++t) {
        state = bbcm_step(g, state);
        bool all_informed = std::all_of(state.informed.begin(), state.informed.end(),
                                        [](std::uint8_t b) { return b != 0; });
        if (!all_informed) continue;
        auto [lo, hi] = std::minmax_element(state.values.begin(), state.values.end());
        spread = *hi - *lo;
        if (spread <= 1e-6) {
            double acc = 0.0;
            for (double v : state.values) acc += v;
            return acc / g.n;
        }
    }
    throw BbcmNotConverged(spread);
}

}  // namespace

SeedingWeights extract_seeding_weights(SeedingModel model, const DirectedGraph& g,
                                       const std::vector<int>& seeds,
                                       const std::vector<double>* tau, int rounds) {
    if (seeds.empty()) throw Error("need at least one seed");
    if (tau && tau->size() != seeds.size()) throw Error("need one precision per seed");
    SeedingWeights out;
    out.seeds = seeds;
    out.weights.resize(seeds.size());
    if (model == SeedingModel::NaiveBayes) {
        auto cent = perron(g);
        double denom = 0.0;
        for (std::size_t k = 0; k < seeds.size(); ++k) {
            double t = tau ? (*tau)[k] : 1.0;
            if (!(t > 0.0)) throw Error("precisions must be positive");
            denom += cent.v[seeds[k]] * t;
        }
        for (std::size_t k = 0; k < seeds.size(); ++k) {
            double t = tau ? (*tau)[k] : 1.0;
            out.weights[k] = cent.v[seeds[k]] * t / denom;
        }
    } else {
        for (std::size_t k = 0; k < seeds.size(); ++k)
            out.weights[k] = bbcm_basis_weight(g, seeds, k, rounds);
    }
    return out;
}

}  // namespace beliefdyn

#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <utility>
#include <vector>

#include "beliefdyn/dynamics.hpp"
#include "beliefdyn/graph.hpp"
#include "beliefdyn/statespace.hpp"

namespace beliefdyn::testutil {

// Random strongly connected graph: a random Hamiltonian cycle guarantees
// connectivity, extra edges sprinkled on top. Self-loops are added by the
// builder.
inline DirectedGraph random_strongly_connected(std::mt19937_64& rng, int n,
                                               double extra_edge_prob = 0.3) {
    std::vector<int> perm(n);
    for (int i = 0; i < n; ++i) perm[i] = i;
    std::shuffle(perm.begin(), perm.end(), rng);
    std::vector<std::pair<int, int>> edges;
    for (int i = 0; i < n; ++i) edges.emplace_back(perm[i], perm[(i + 1) % n]);
    std::uniform_real_distribution<double> coin(0.0, 1.0);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            if (i != j && coin(rng) < extra_edge_prob) edges.emplace_back(i, j);
    return build_graph(n, edges);
}

// Categorical belief with all masses bounded away from zero.
inline LogBelief random_categorical(std::mt19937_64& rng, const StateSpace& space) {
    std::uniform_real_distribution<double> mass(0.05, 1.0);
    std::vector<double> values(space.size());
    for (auto& v : values) v = mass(rng);
    return belief_from_density(space, values);
}

inline InitialCondition random_ic(std::mt19937_64& rng, int max_agents, int max_states) {
    std::uniform_int_distribution<int> nn(2, max_agents), mm(2, max_states);
    int n = nn(rng), m = mm(rng);
    auto g = random_strongly_connected(rng, n);
    std::vector<double> labels(m);
    for (int i = 0; i < m; ++i) labels[i] = i;
    auto space = StateSpace::finite_discrete(labels);
    auto prior = flat_prior(space);
    std::vector<LogBelief> beliefs;
    for (int i = 0; i < n; ++i) beliefs.push_back(random_categorical(rng, space));
    return InitialCondition(std::move(g), std::move(prior), std::move(beliefs));
}

inline double prob_at(const LogBelief& b, int k) {
    return b.logf[k] == -std::numeric_limits<double>::infinity() ? 0.0 : std::exp(b.logf[k]);
}

}  // namespace beliefdyn::testutil

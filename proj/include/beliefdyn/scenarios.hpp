#pragma once

#include <cstdint>
#include <vector>

#include "beliefdyn/dynamics.hpp"
#include "beliefdyn/graph.hpp"

namespace beliefdyn {

/// Non-convergence counterexamples on the (3,1)-graph over {0..theta_max}.
/// Both variants make theta = 0 the unique likelihood maximizer yet keep a
/// constant fraction of belief away from it forever: variant 1 has a
/// positive gap but unbounded normalized beliefs, variant 2 bounded
/// normalized beliefs but a vanishing gap. The defining log-densities scale
/// like alpha^(4^theta); they are built directly in log space from exact
/// power-of-two multiples of log(alpha).
InitialCondition counterexample_ic(int variant, double alpha, int theta_max);

/// Binary-state initial condition on the (a,b)-graph: the x team starts at
/// (alpha, 1-alpha), the y team at (1-alpha, alpha), flat prior. Depending
/// on a - b the x-team mass at state 0 stays constant, alternates, or
/// converges (on even/odd subsequences) to 0 or 1.
InitialCondition ab_example_ic(int a, int b, double alpha);

/// Informed-averaging baseline state: agents are either informed with a
/// scalar opinion or uninformed (value NaN). Informedness never reverts.
struct BBCMState {
    std::vector<double> values;
    std::vector<std::uint8_t> informed;
};

/// One synchronous averaging round: an agent with at least one informed
/// in-neighbor takes the arithmetic mean of the informed in-neighbors'
/// current values (itself included only once informed) and becomes
/// informed. Informed agents keep averaging indefinitely.
BBCMState bbcm_step(const DirectedGraph& g, const BBCMState& s);

/// Runs the averaging dynamics for the given number of rounds from the
/// seeded state, returning all states (round 0 first).
std::vector<BBCMState> bbcm_simulate(const DirectedGraph& g, const std::vector<int>& seeds,
                                     const std::vector<double>& signals, int rounds);

enum class SeedingModel { NaiveBayes, Bbcm };

/// Per-seed influence weights in the eventual consensus; nonnegative,
/// summing to 1.
struct SeedingWeights {
    std::vector<int> seeds;
    std::vector<double> weights;
};

/// Influence of each seed on the consensus value. NaiveBayes weights come
/// from the closed form v_i tau_i / sum v_j tau_j restricted to the seeds
/// (tau defaults to 1). Bbcm weights are read off the averaging dynamics:
/// one run per basis signal, converged to per-agent spread <= 1e-6 within
/// the round budget (else BbcmNotConverged).
SeedingWeights extract_seeding_weights(SeedingModel model, const DirectedGraph& g,
                                       const std::vector<int>& seeds,
                                       const std::vector<double>* tau, int rounds);

}  // namespace beliefdyn

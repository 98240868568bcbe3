#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "beliefdyn/dynamics.hpp"
#include "beliefdyn/graph.hpp"
#include "beliefdyn/statespace.hpp"

namespace beliefdyn {

/// Pointwise log of the consensus target: each agent's initial normalized
/// belief raised to its centrality, multiplied over agents. -inf exactly
/// where some agent assigns zero density.
struct WeightedLikelihood {
    StateSpace space;
    std::vector<double> logl;
    CentralityData centrality;
};

struct HypothesisCheck {
    std::string name;
    bool passed = false;
    std::string detail;
};

/// Maximizer structure of the weighted likelihood plus the recorded
/// convergence-hypothesis checks for the space at hand. Hypothesis failures
/// are reported, never enforced; the counterexample scenarios exist to be
/// run.
struct ConsensusReport {
    std::vector<int> maximizer_indices;     // within rel. tolerance 1e-9 of the max
    std::vector<double> maximizer_values;   // corresponding state values
    double log_gap = 0.0;                   // max logL minus best non-maximizer logL
    std::optional<int> predicted_index;     // set iff the maximizer is unique
    std::optional<double> predicted_point;
    std::vector<HypothesisCheck> conditions;
};

/// Consensus analytics for Gaussian beliefs N(mu_i, 1/tau_i): the limit
/// point is the weights-weighted mean of the signals, variance measures
/// learning quality, thresholds[k] is the centrality level above which a
/// low-precision agent k makes extra precision initially harmful.
struct GaussianConsensus {
    double theta_max = 0.0;
    std::vector<double> weights;     // v_i tau_i / sum_j v_j tau_j, sums to 1
    double variance = 0.0;
    std::vector<double> thresholds;  // 2 sum_{i!=k} v_i^2 tau_i / sum_{i!=k} v_i tau_i
};

enum class BinaryVerdict { StateZero, StateOne, Tie };

struct BinaryConsensus {
    BinaryVerdict verdict = BinaryVerdict::Tie;
    double tally = 0.0;  // sum_i v_i * log-odds(x_i)
};

struct PoissonConsensus {
    double rate = 0.0;                // centrality-weighted geometric mean of the rates
    std::vector<long long> points;    // floor(rate), or {rate-1, rate} at integer rate
    double additive_mean = 0.0;       // centrality-weighted arithmetic mean, for contrast
};

struct PrecisionEffect {
    bool monotone_decreasing = false;
    std::optional<double> interior_maximum_tau;  // grid-located maximum of the variance
    double stationary_tau = 0.0;                 // analytic turning point; <= 0 means none
    std::vector<double> variances;               // variance at each grid value
};

struct MonteCarloVariance {
    double sample_mean = 0.0;
    double sample_variance = 0.0;
    std::uint64_t seed = 0;
    int draws = 0;
};

/// logL = sum_i v_i log g_i pointwise (compensated summation).
WeightedLikelihood weighted_likelihood(const InitialCondition& ic, const CentralityData& c);

/// Indices within relative tolerance rel_tol of the maximum (compared in
/// log space), in increasing index order.
std::vector<int> argmax_set(const std::vector<double>& logl, double rel_tol = 1e-9);

/// Maximizer set, gap, and recorded hypothesis checks: nothing extra for a
/// finite space; positive gap plus bounded-g heuristic for truncated
/// integers; decay beyond 3/4 of the half-width plus bounded-g for grids.
ConsensusReport predict_consensus(const WeightedLikelihood& l, const InitialCondition& ic);

/// Binary-state vote: tally = sum v_i log(x_i / (1 - x_i)); positive means
/// consensus on state 1, negative on state 0, |tally| <= 1e-12 is a tie.
BinaryConsensus binary_consensus(const std::vector<double>& x, const std::vector<double>& v);

/// Consensus event rate: exp(sum v_i log lambda_i) and its floor point(s).
PoissonConsensus poisson_consensus(const std::vector<double>& lambda,
                                   const std::vector<double>& v);

/// Gaussian consensus point, seed weights, variance and thresholds. The
/// optional correlation matrix (symmetric, unit diagonal, entries in
/// [-1, 1]) switches the variance to the correlated-signal formula.
GaussianConsensus gaussian_consensus(const std::vector<double>& mu, const std::vector<double>& tau,
                                     const std::vector<double>& v,
                                     const std::vector<std::vector<double>>* rho = nullptr);

/// Evaluates the consensus variance over a grid of precisions for agent k,
/// holding the others fixed, and reports monotonicity or the interior
/// maximum together with the analytic turning point.
PrecisionEffect precision_effect(const std::vector<double>& tau, const std::vector<double>& v,
                                 int k, const std::vector<double>& tau_grid);

/// Draws mu_i ~ N(theta_star, 1/tau_i) (correlated via rho when given),
/// forms the consensus point per draw and returns its sample mean and
/// variance. Deterministic for a fixed seed.
MonteCarloVariance estimate_consensus_variance(double theta_star, const std::vector<double>& tau,
                                               const std::vector<double>& v, int draws,
                                               std::uint64_t seed,
                                               const std::vector<std::vector<double>>* rho = nullptr);

}  // namespace beliefdyn

#pragma once

#include <optional>
#include <string>
#include <vector>

#include "beliefdyn/graph.hpp"
#include "beliefdyn/statespace.hpp"

namespace beliefdyn {

/// Graph, common prior, and one belief per agent, all on the same space.
/// The normalized beliefs g_i = f_i / f* are precomputed once here; the
/// dynamics and the likelihood only ever read those.
class InitialCondition {
public:
    InitialCondition(DirectedGraph graph, LogPrior prior, std::vector<LogBelief> beliefs);
    /// Builds from explicit normalized beliefs; the per-agent densities are
    /// materialized as f_i = f* * g_i. Use this when the g shapes are known
    /// analytically and a logf - logf* subtraction would lose them.
    InitialCondition(DirectedGraph graph, LogPrior prior, std::vector<NormalizedBelief> normalized);

    const DirectedGraph& graph() const { return graph_; }
    const LogPrior& prior() const { return prior_; }
    const StateSpace& space() const { return prior_.space; }
    const std::vector<LogBelief>& beliefs() const { return beliefs_; }
    const std::vector<NormalizedBelief>& normalized() const { return normalized_; }
    int agents() const { return graph_.n; }

private:
    DirectedGraph graph_;
    LogPrior prior_;
    std::vector<LogBelief> beliefs_;
    std::vector<NormalizedBelief> normalized_;
};

struct RoundDiagnostics {
    std::vector<double> entropy;         // per agent, nats
    std::vector<double> mass_at_argmax;  // per agent, quadrature mass at the likelihood argmax
    std::vector<double> boundary_mass;   // per agent, mass on the truncation boundary
};

struct Trajectory {
    StateSpace space;
    std::vector<std::vector<LogBelief>> rounds;  // [round][agent], round 0 = initial beliefs
    std::vector<RoundDiagnostics> diagnostics;   // parallel to rounds
    int likelihood_argmax_index = 0;             // state index the mass diagnostic refers to
    std::optional<int> degenerate_round;         // set when the run aborted at that round
    bool tail_mass_warning = false;              // boundary mass exceeded 1e-6 somewhere

    int completed_rounds() const { return static_cast<int>(rounds.size()) - 1; }
};

/// One synchronous update: each agent multiplies the normalized beliefs of
/// its in-neighbors onto the prior and renormalizes, all in log space.
/// Points where any in-neighbor carries zero density stay at zero. Throws
/// DegenerateUpdate when a normalizer vanishes.
std::vector<LogBelief> update_step(const DirectedGraph& g, const LogPrior& prior,
                                   const std::vector<LogBelief>& beliefs);

/// Same update on the normalized representation (shape plus scale); this is
/// what simulate iterates internally.
std::vector<NormalizedBelief> update_step_normalized(const DirectedGraph& g, const LogPrior& prior,
                                                     const std::vector<NormalizedBelief>& gs);

/// Runs T updates, recording per-round snapshots and diagnostics. A
/// degenerate update aborts the run and leaves the partial trajectory with
/// degenerate_round set; boundary mass above 1e-6 sets tail_mass_warning
/// (the run continues but the result should not be trusted).
Trajectory simulate(const InitialCondition& ic, int rounds);

struct ClosedFormResult {
    std::vector<LogBelief> beliefs;
    /// False once some path count exceeded 2^512 and the double-converted
    /// exponents lost their low bits.
    bool exact_counts = true;
};

/// Round-t beliefs in one shot from the path-count formula: agent i weights
/// log g_j by the number of length-t paths from j to i, multiplies the prior
/// back in and renormalizes.
ClosedFormResult closed_form_beliefs(const InitialCondition& ic, int t);

struct NondegeneracyReport {
    bool nondegenerate = false;
    std::optional<int> witness_index;  // a state where every agent has positive density
};

/// An initial condition is nondegenerate when some represented point gets
/// positive density from every agent.
NondegeneracyReport check_nondegenerate(const InitialCondition& ic);

struct BoundedGReport {
    double sup_log_g = 0.0;       // max over the space of log g_i
    double sup_g = 0.0;           // exp of the above (may overflow to inf)
    int sup_index = 0;
    double boundary_slope = 0.0;  // mean per-point increase of log g over the last 5 points
    bool likely_unbounded = false;  // heuristic: log g still rising at the boundary
};

/// Reports, per agent, the sup of g_i over the represented space. Every
/// truncated space makes g trivially bounded, so the report adds the trend
/// of log g at the upper boundary as an unboundedness heuristic.
std::vector<BoundedGReport> check_bounded_g(const InitialCondition& ic);

/// Pointwise sum_i weights[i] * log g_i over the space, -inf where any
/// weighted agent has zero density. Compensated summation keeps exactly
/// opposing shapes at machine zero.
std::vector<double> weighted_logg_sum(const InitialCondition& ic,
                                      const std::vector<double>& weights);

/// Two-agent power-law family on theta in {1, 2, 3, ...}: prior
/// theta^-prior_exponent (optionally 1 on even theta), beliefs proportional
/// to theta^-belief_exponent_i. The graph is the 2-node complete graph.
struct PowerLawSpec {
    double prior_exponent = 0.0;
    bool prior_parity_split = false;  // f* = theta^-p for odd theta, 1 for even
    double belief_exponent_1 = 0.0;   // must exceed 1 (normalizable density)
    double belief_exponent_2 = 0.0;
};

enum class FeasibilityRegion {
    ProperNotOneFeasible,      // proper, first update already diverges
    ImproperNotOneFeasible,    // improper, first update already diverges
    ProperKFeasible,           // proper, k rounds work, round k+1 diverges
    ImproperKFeasible,         // improper counterpart
    ProperFeasibleNoScenario,  // feasible and proper, but no underlying scenario
    ImproperFeasible,          // feasible, improper prior
    UnderlyingScenario,        // feasible, proper, arises from an underlying scenario
};

struct FeasibilityClass {
    FeasibilityRegion region;
    bool proper = false;
    /// First round whose update normalizer diverges; empty when feasible.
    std::optional<int> first_infeasible_round;
};

/// Printable name, e.g. "P\\F1", "(F2 cap P)\\(F3 cap P)", "F cap IP", "U".
std::string region_name(const FeasibilityClass& c);

/// Analytic classification of the power-law catalog. On the 2-node complete
/// graph every pair of nodes has 2^(t-1) connecting paths of length t, so
/// the round-t normalizer is a power series whose decay exponent is
/// p + 2^(t-1) * (p1 + p2 - 2p); the update converges iff that exceeds 1.
/// Throws SpecOutsideCatalog for non-normalizable belief exponents.
FeasibilityClass classify_power_law(const PowerLawSpec& spec);

}  // namespace beliefdyn

#include "beliefdyn/dynamics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "beliefdyn/numerics.hpp"

namespace beliefdyn {

namespace {
constexpr double kNegInf = -std::numeric_limits<double>::infinity();
constexpr double kTailMassThreshold = 1e-6;

void validate_prior(const LogPrior& prior) {
    for (double v : prior.logf)
        if (!std::isfinite(v))
            throw Error("prior log-density must be finite everywhere (f* > 0)");
}
}  // namespace

InitialCondition::InitialCondition(DirectedGraph graph, LogPrior prior,
                                   std::vector<LogBelief> beliefs)
    : graph_(std::move(graph)), prior_(std::move(prior)), beliefs_(std::move(beliefs)) {
    if (static_cast<int>(beliefs_.size()) != graph_.n)
        throw Error("expected one belief per agent");
    validate_prior(prior_);
    normalized_.reserve(beliefs_.size());
    for (const auto& b : beliefs_) {
        if (b.space != prior_.space) throw SpaceMismatch();
        normalized_.push_back(normalize_against_prior(b, prior_));
    }
}

InitialCondition::InitialCondition(DirectedGraph graph, LogPrior prior,
                                   std::vector<NormalizedBelief> normalized)
    : graph_(std::move(graph)), prior_(std::move(prior)), normalized_(std::move(normalized)) {
    if (static_cast<int>(normalized_.size()) != graph_.n)
        throw Error("expected one belief per agent");
    validate_prior(prior_);
    beliefs_.reserve(normalized_.size());
    for (const auto& nb : normalized_) {
        if (nb.space != prior_.space) throw SpaceMismatch();
        beliefs_.push_back(belief_from_normalized(prior_, nb));
    }
}

std::vector<NormalizedBelief> update_step_normalized(const DirectedGraph& g, const LogPrior& prior,
                                                     const std::vector<NormalizedBelief>& gs) {
    const int n = g.n;
    const int m = prior.space.size();
    std::vector<NormalizedBelief> out(n);
    std::vector<double> lognum(m);
    std::vector<double> addends;
    for (int i = 0; i < n; ++i) {
        std::vector<double> shape(m, 0.0);
        // Sorting the addends makes the sum a function of the value multiset
        // alone. Symmetric agents (mirrored teams, relabeled nodes) then stay
        // bitwise identical; without this, association differences of order
        // ulp get amplified by the spectral radius every round and constant/
        // alternating trajectories drift visibly within twenty rounds.
        for (int k = 0; k < m; ++k) {
            addends.clear();
            for (int j : g.in_nbrs[i]) addends.push_back(gs[j].shape[k]);
            std::sort(addends.begin(), addends.end());
            double acc = 0.0;
            for (double a : addends) acc += a;
            shape[k] = acc;
        }
        for (int k = 0; k < m; ++k) lognum[k] = prior.logf[k] + shape[k];
        double total = log_quadrature(prior.space, lognum);
        if (total == kNegInf) throw DegenerateUpdate(1);
        // Fold the normalizer into the shape: raw sums grow like r^t and
        // would cost the log-state ulp(r^t) of absolute precision per round.
        for (int k = 0; k < m; ++k) shape[k] -= total;
        out[i].space = prior.space;
        out[i].shape = std::move(shape);
        out[i].log_scale = 0.0;
    }
    return out;
}

std::vector<LogBelief> update_step(const DirectedGraph& g, const LogPrior& prior,
                                   const std::vector<LogBelief>& beliefs) {
    if (static_cast<int>(beliefs.size()) != g.n) throw Error("expected one belief per agent");
    std::vector<NormalizedBelief> gs;
    gs.reserve(beliefs.size());
    for (const auto& b : beliefs) {
        if (b.space != prior.space) throw SpaceMismatch();
        gs.push_back(normalize_against_prior(b, prior));
    }
    auto stepped = update_step_normalized(g, prior, gs);
    std::vector<LogBelief> out;
    out.reserve(stepped.size());
    for (const auto& nb : stepped) out.push_back(belief_from_normalized(prior, nb));
    return out;
}

std::vector<double> weighted_logg_sum(const InitialCondition& ic,
                                      const std::vector<double>& weights) {
    if (static_cast<int>(weights.size()) != ic.agents())
        throw Error("expected one weight per agent");
    const int m = ic.space().size();
    const int n = ic.agents();
    double scale = 0.0;
    for (int i = 0; i < n; ++i) scale += weights[i] * ic.normalized()[i].log_scale;
    std::vector<double> logl(m);
    for (int k = 0; k < m; ++k) {
        CompensatedSum acc;
        bool zero = false;
        for (int i = 0; i < n; ++i) {
            double s = ic.normalized()[i].shape[k];
            if (s == kNegInf) {
                zero = true;
                break;
            }
            acc.add(weights[i] * s);
        }
        logl[k] = zero ? kNegInf : acc.value() + scale;
    }
    return logl;
}

namespace {

RoundDiagnostics round_diagnostics(const StateSpace& space, const std::vector<LogBelief>& beliefs,
                                   int argmax_index, const std::vector<int>& boundary) {
    RoundDiagnostics d;
    d.entropy.reserve(beliefs.size());
    d.mass_at_argmax.reserve(beliefs.size());
    d.boundary_mass.reserve(beliefs.size());
    for (const auto& b : beliefs) {
        d.entropy.push_back(entropy(b));
        double lf = b.logf[argmax_index];
        d.mass_at_argmax.push_back(lf == kNegInf ? 0.0
                                                 : space.weight(argmax_index) * std::exp(lf));
        double bm = 0.0;
        for (int idx : boundary)
            if (b.logf[idx] != kNegInf) bm += space.weight(idx) * std::exp(b.logf[idx]);
        d.boundary_mass.push_back(bm);
    }
    return d;
}

}  // namespace

Trajectory simulate(const InitialCondition& ic, int rounds) {
    if (rounds < 0) throw Error("round count must be nonnegative");
    auto nd = check_nondegenerate(ic);
    if (!nd.nondegenerate) throw DegenerateUpdate(0);

    auto cent = perron(ic.graph());
    auto logl = weighted_logg_sum(ic, cent.v);
    int argmax = 0;
    for (int k = 1; k < ic.space().size(); ++k)
        if (logl[k] > logl[argmax]) argmax = k;

    Trajectory traj;
    traj.space = ic.space();
    traj.likelihood_argmax_index = argmax;
    auto boundary = ic.space().boundary_indices();

    auto record = [&](const std::vector<LogBelief>& beliefs) {
        traj.rounds.push_back(beliefs);
        traj.diagnostics.push_back(round_diagnostics(ic.space(), beliefs, argmax, boundary));
        for (double bm : traj.diagnostics.back().boundary_mass)
            if (bm > kTailMassThreshold) traj.tail_mass_warning = true;
    };

    record(ic.beliefs());
    std::vector<NormalizedBelief> state = ic.normalized();
    for (int t = 1; t <= rounds; ++t) {
        std::vector<NormalizedBelief> next;
        try {
            next = update_step_normalized(ic.graph(), ic.prior(), state);
        } catch (const DegenerateUpdate&) {
            traj.degenerate_round = t;
            break;
        }
        state = std::move(next);
        std::vector<LogBelief> beliefs;
        beliefs.reserve(state.size());
        for (const auto& nb : state) beliefs.push_back(belief_from_normalized(ic.prior(), nb));
        record(beliefs);
    }
    return traj;
}

ClosedFormResult closed_form_beliefs(const InitialCondition& ic, int t) {
    if (t < 0) throw Error("round count must be nonnegative");
    auto nd = check_nondegenerate(ic);
    if (!nd.nondegenerate) throw DegenerateUpdate(0);
    const int n = ic.agents();
    const int m = ic.space().size();
    auto p = path_counts(ic.graph(), t);

    ClosedFormResult res;
    res.exact_counts = p.within_exact_range();
    res.beliefs.reserve(n);
    std::vector<double> lognum(m);
    for (int i = 0; i < n; ++i) {
        std::vector<double> shape(m, 0.0);
        // The agents' scale constants are uniform offsets that the final
        // normalization removes, so only the shapes are accumulated.
        for (int j = 0; j < n; ++j) {
            if (p(j, i) == 0) continue;  // skip so a -inf shape is not multiplied by 0
            double c = p(j, i).convert_to<double>();
            const auto& nb = ic.normalized()[j];
            for (int k = 0; k < m; ++k) {
                if (nb.shape[k] == kNegInf)
                    shape[k] = kNegInf;
                else if (shape[k] != kNegInf)
                    shape[k] += c * nb.shape[k];
            }
        }
        for (int k = 0; k < m; ++k)
            lognum[k] = shape[k] == kNegInf ? kNegInf : ic.prior().logf[k] + shape[k];
        double total = log_quadrature(ic.space(), lognum);
        if (total == kNegInf) throw DegenerateUpdate(t);
        std::vector<double> logf(m);
        for (int k = 0; k < m; ++k) logf[k] = lognum[k] == kNegInf ? kNegInf : lognum[k] - total;
        LogBelief b;
        b.space = ic.space();
        b.logf = std::move(logf);
        res.beliefs.push_back(std::move(b));
    }
    return res;
}

NondegeneracyReport check_nondegenerate(const InitialCondition& ic) {
    NondegeneracyReport rep;
    const int m = ic.space().size();
    for (int k = 0; k < m; ++k) {
        bool all_positive = true;
        for (const auto& nb : ic.normalized()) {
            if (nb.shape[k] == kNegInf) {
                all_positive = false;
                break;
            }
        }
        if (all_positive) {
            rep.nondegenerate = true;
            rep.witness_index = k;
            return rep;
        }
    }
    return rep;
}

std::vector<BoundedGReport> check_bounded_g(const InitialCondition& ic) {
    const int m = ic.space().size();
    std::vector<BoundedGReport> reports;
    reports.reserve(ic.agents());
    for (const auto& nb : ic.normalized()) {
        BoundedGReport r;
        r.sup_index = 0;
        double best = nb.logg(0);
        for (int k = 1; k < m; ++k) {
            if (nb.logg(k) > best) {
                best = nb.logg(k);
                r.sup_index = k;
            }
        }
        r.sup_log_g = best;
        r.sup_g = std::exp(best);
        if (m >= 5) {
            r.boundary_slope = (nb.logg(m - 1) - nb.logg(m - 5)) / 4.0;
            r.likely_unbounded = r.boundary_slope > 1e-12;
        }
        reports.push_back(r);
    }
    return reports;
}

std::string region_name(const FeasibilityClass& c) {
    switch (c.region) {
        case FeasibilityRegion::ProperNotOneFeasible: return "P\\F1";
        case FeasibilityRegion::ImproperNotOneFeasible: return "IP\\F1";
        case FeasibilityRegion::ProperKFeasible: {
            int k = *c.first_infeasible_round - 1;
            return "(F" + std::to_string(k) + " & P)\\(F" + std::to_string(k + 1) + " & P)";
        }
        case FeasibilityRegion::ImproperKFeasible: {
            int k = *c.first_infeasible_round - 1;
            return "(F" + std::to_string(k) + " & IP)\\(F" + std::to_string(k + 1) + " & IP)";
        }
        case FeasibilityRegion::ProperFeasibleNoScenario: return "(F & P)\\U";
        case FeasibilityRegion::ImproperFeasible: return "F & IP";
        default: return "U";
    }
}

FeasibilityClass classify_power_law(const PowerLawSpec& spec) {
    if (!std::isfinite(spec.prior_exponent) || !std::isfinite(spec.belief_exponent_1) ||
        !std::isfinite(spec.belief_exponent_2))
        throw SpecOutsideCatalog("power-law exponents must be finite");
    if (!(spec.belief_exponent_1 > 1.0) || !(spec.belief_exponent_2 > 1.0))
        throw SpecOutsideCatalog("belief exponents must exceed 1 (normalizable density)");

    FeasibilityClass out;
    // Sum over theta of theta^-p converges iff p > 1; a parity-split prior
    // keeps its even terms at 1 and always has infinite mass.
    out.proper = !spec.prior_parity_split && spec.prior_exponent > 1.0;

    const double p = spec.prior_exponent;
    const double slope = spec.belief_exponent_1 + spec.belief_exponent_2 - 2.0 * p;
    // Decay exponent of the round-t normalizer series (its odd part when the
    // prior is parity-split; the even part converges whenever p1 + p2 > 2).
    for (int t = 1; t <= 1200; ++t) {
        double decay = p + std::ldexp(slope, t - 1);
        if (!(decay > 1.0)) {
            out.first_infeasible_round = t;
            break;
        }
        if (slope >= 0.0) break;  // decay exponent is nondecreasing in t
    }

    if (out.first_infeasible_round) {
        if (*out.first_infeasible_round == 1)
            out.region = out.proper ? FeasibilityRegion::ProperNotOneFeasible
                                    : FeasibilityRegion::ImproperNotOneFeasible;
        else
            out.region = out.proper ? FeasibilityRegion::ProperKFeasible
                                    : FeasibilityRegion::ImproperKFeasible;
        return out;
    }

    // An underlying scenario requires every mixed power f* g1^n1 g2^n2 to be
    // summable, which for power laws means a proper prior and belief tails no
    // heavier than the prior's.
    bool underlying = out.proper && spec.belief_exponent_1 >= p && spec.belief_exponent_2 >= p;
    if (underlying)
        out.region = FeasibilityRegion::UnderlyingScenario;
    else
        out.region = out.proper ? FeasibilityRegion::ProperFeasibleNoScenario
                                : FeasibilityRegion::ImproperFeasible;
    return out;
}

}  // namespace beliefdyn

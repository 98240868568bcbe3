#pragma once

#include <span>
#include <vector>

#include "beliefdyn/errors.hpp"

namespace beliefdyn {

/// Representable parameter spaces: an explicit finite label set, the
/// integers {0, ..., theta_max} standing in for the nonnegative integers,
/// or a uniform real grid standing in for an interval of the reals.
/// Discrete variants carry the counting measure (weight 1 per point); the
/// grid integrates with the trapezoid rule (weight h, halved at the ends).
class StateSpace {
public:
    enum class Kind { FiniteDiscrete, TruncatedIntegers, Grid };

    /// Empty placeholder; assign a real space before use.
    StateSpace() = default;

    static StateSpace finite_discrete(std::vector<double> labels);
    static StateSpace truncated_integers(int theta_max);
    static StateSpace grid(double lo, double hi, int points);

    Kind kind() const { return kind_; }
    int size() const { return size_; }
    double value(int i) const {
        switch (kind_) {
            case Kind::FiniteDiscrete: return labels_[i];
            case Kind::TruncatedIntegers: return i;
            default: return lo_ + i * spacing_;
        }
    }
    double weight(int i) const {
        if (kind_ != Kind::Grid) return 1.0;
        return (i == 0 || i == size_ - 1) ? 0.5 * spacing_ : spacing_;
    }
    double spacing() const { return spacing_; }  // 1 for discrete variants
    double lo() const { return lo_; }
    double hi() const { return hi_; }
    int theta_max() const { return theta_max_; }
    const std::vector<double>& labels() const { return labels_; }

    /// Index of the grid/label point nearest to x.
    int nearest_index(double x) const;

    /// Points monitored for truncation leakage: the last integer for
    /// TruncatedIntegers, both ends for Grid, none for FiniteDiscrete.
    std::vector<int> boundary_indices() const;

    bool operator==(const StateSpace& o) const;
    bool operator!=(const StateSpace& o) const { return !(*this == o); }

private:
    Kind kind_ = Kind::FiniteDiscrete;
    int size_ = 0;
    std::vector<double> labels_;  // FiniteDiscrete
    int theta_max_ = 0;           // TruncatedIntegers
    double lo_ = 0.0, hi_ = 0.0, spacing_ = 1.0;  // Grid
};

/// log( sum_i weight(i) * exp(logvals[i]) ), stably; -inf when empty/all -inf.
double log_quadrature(const StateSpace& s, std::span<const double> logvals);

/// sum_i weight(i) * vals[i]
double quadrature(const StateSpace& s, std::span<const double> vals);

/// Common prior f*. log-values must be finite everywhere (the model
/// requires f* > 0); `proper` records whether the underlying (possibly
/// infinite) prior has finite total mass.
struct LogPrior {
    StateSpace space;
    std::vector<double> logf;
    bool proper = true;
};

/// A belief: log-density over the space, normalized so that the quadrature
/// of exp(logf) is 1. -inf entries mark zero-probability points.
struct LogBelief {
    StateSpace space;
    std::vector<double> logf;
};

/// A belief divided by the prior, g = f / f*, stored as a pointwise shape
/// plus one additive constant: logg(i) = shape[i] + log_scale. Keeping the
/// normalizer out of the per-point values preserves exact cancellations
/// between agents whose shapes differ only in sign (the counterexample
/// scenarios push |shape| past 2^50 where a folded-in constant would be
/// rounded away). Invariant: quadrature of f* * g equals 1.
struct NormalizedBelief {
    StateSpace space;
    std::vector<double> shape;
    double log_scale = 0.0;

    double logg(int i) const { return shape[i] + log_scale; }
};

/// Uninformative prior, f* = 1 everywhere. Flagged improper for the spaces
/// that stand in for infinite ones (TruncatedIntegers, Grid).
LogPrior flat_prior(const StateSpace& space);

/// Normalizes nonnegative density values into a belief.
LogBelief belief_from_density(const StateSpace& space, std::span<const double> values);

/// Normalizes log-density values into a belief (entries may be -inf).
LogBelief belief_from_log_density(const StateSpace& space, std::span<const double> logvalues);

/// Gaussian with mean mu and precision tau restricted to the grid. Errors
/// with TruncationError when the mass falling outside the grid would exceed
/// 1e-8 (the grid must cover roughly mu +- 6/sqrt(tau)).
LogBelief gaussian_belief(const StateSpace& space, double mu, double tau);

/// Poisson(lambda) restricted to {0..theta_max}; requires
/// theta_max >= lambda + 10*sqrt(lambda) so the discarded tail is < 1e-8.
LogBelief poisson_belief(const StateSpace& space, double lambda);

/// Binary-state belief on {0, 1}. Convention: x is the probability of
/// state 1 ("statement true"), 1-x the probability of state 0.
LogBelief bernoulli_belief(double x);

/// g = f / f*; shape = logf - logf*, scale 0.
NormalizedBelief normalize_against_prior(const LogBelief& b, const LogPrior& p);

/// Builds the normalized belief with the given shape, solving for the
/// scale that makes the quadrature of f* * g equal 1.
NormalizedBelief normalized_from_shape(const LogPrior& p, std::vector<double> shape);

/// f = f* * g, renormalized.
LogBelief belief_from_normalized(const LogPrior& p, const NormalizedBelief& nb);

/// Shannon entropy (nats) under the space's quadrature.
double entropy(const LogBelief& b);

/// Quadrature mean and variance of the belief.
double belief_mean(const LogBelief& b);
double belief_variance(const LogBelief& b);

}  // namespace beliefdyn

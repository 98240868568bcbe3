#include "beliefdyn/statespace.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <unordered_set>

namespace beliefdyn {

namespace {
constexpr double kNegInf = -std::numeric_limits<double>::infinity();
}

StateSpace StateSpace::finite_discrete(std::vector<double> labels) {
    if (labels.size() < 2) throw Error("finite space needs at least 2 labels");
    std::unordered_set<double> seen(labels.begin(), labels.end());
    if (seen.size() != labels.size()) throw Error("finite space labels must be distinct");
    StateSpace s;
    s.kind_ = Kind::FiniteDiscrete;
    s.size_ = static_cast<int>(labels.size());
    s.labels_ = std::move(labels);
    return s;
}

StateSpace StateSpace::truncated_integers(int theta_max) {
    if (theta_max < 1) throw Error("theta_max must be at least 1");
    StateSpace s;
    s.kind_ = Kind::TruncatedIntegers;
    s.theta_max_ = theta_max;
    s.size_ = theta_max + 1;
    return s;
}

StateSpace StateSpace::grid(double lo, double hi, int points) {
    if (!(lo < hi)) throw Error("grid requires lo < hi");
    if (points < 3) throw Error("grid needs at least 3 points");
    StateSpace s;
    s.kind_ = Kind::Grid;
    s.lo_ = lo;
    s.hi_ = hi;
    s.size_ = points;
    s.spacing_ = (hi - lo) / (points - 1);
    return s;
}

int StateSpace::nearest_index(double x) const {
    switch (kind_) {
        case Kind::TruncatedIntegers: {
            int i = static_cast<int>(std::lround(x));
            return std::clamp(i, 0, size_ - 1);
        }
        case Kind::Grid: {
            int i = static_cast<int>(std::lround((x - lo_) / spacing_));
            return std::clamp(i, 0, size_ - 1);
        }
        default: {
            int best = 0;
            for (int i = 1; i < size_; ++i)
                if (std::abs(labels_[i] - x) < std::abs(labels_[best] - x)) best = i;
            return best;
        }
    }
}

std::vector<int> StateSpace::boundary_indices() const {
    switch (kind_) {
        case Kind::TruncatedIntegers: return {size_ - 1};
        case Kind::Grid: return {0, size_ - 1};
        default: return {};
    }
}

bool StateSpace::operator==(const StateSpace& o) const {
    if (kind_ != o.kind_ || size_ != o.size_) return false;
    switch (kind_) {
        case Kind::FiniteDiscrete: return labels_ == o.labels_;
        case Kind::TruncatedIntegers: return theta_max_ == o.theta_max_;
        default: return lo_ == o.lo_ && hi_ == o.hi_;
    }
}

double log_quadrature(const StateSpace& s, std::span<const double> logvals) {
    double m = kNegInf;
    for (int i = 0; i < s.size(); ++i)
        if (logvals[i] > m) m = logvals[i];
    if (m == kNegInf) return kNegInf;
    double acc = 0.0;
    for (int i = 0; i < s.size(); ++i) {
        if (logvals[i] == kNegInf) continue;
        acc += s.weight(i) * std::exp(logvals[i] - m);
    }
    return m + std::log(acc);
}

double quadrature(const StateSpace& s, std::span<const double> vals) {
    double acc = 0.0;
    for (int i = 0; i < s.size(); ++i) acc += s.weight(i) * vals[i];
    return acc;
}

LogPrior flat_prior(const StateSpace& space) {
    LogPrior p;
    p.space = space;
    p.logf.assign(space.size(), 0.0);
    // The flat prior is proper only on a genuinely finite space; the other
    // variants are truncations of Z>=0 / R where it has infinite mass.
    p.proper = space.kind() == StateSpace::Kind::FiniteDiscrete;
    return p;
}

LogBelief belief_from_log_density(const StateSpace& space, std::span<const double> logvalues) {
    LogBelief b;
    b.space = space;
    b.logf.assign(logvalues.begin(), logvalues.end());
    for (double v : b.logf)
        if (std::isnan(v) || v == std::numeric_limits<double>::infinity())
            throw NonFiniteDensity();
    double total = log_quadrature(space, b.logf);
    if (total == kNegInf) throw AllZeroDensity();
    for (double& v : b.logf) v -= total;
    return b;
}

LogBelief belief_from_density(const StateSpace& space, std::span<const double> values) {
    if (static_cast<int>(values.size()) != space.size())
        throw Error("density length does not match space size");
    std::vector<double> logv(values.size());
    for (std::size_t i = 0; i < values.size(); ++i) {
        double v = values[i];
        if (!std::isfinite(v) || v < 0.0) throw NonFiniteDensity();
        logv[i] = v > 0.0 ? std::log(v) : kNegInf;
    }
    return belief_from_log_density(space, logv);
}

LogBelief gaussian_belief(const StateSpace& space, double mu, double tau) {
    if (space.kind() != StateSpace::Kind::Grid) throw Error("gaussian belief needs a grid space");
    if (!(tau > 0.0)) throw Error("precision must be positive");
    // Two-sided tail mass outside [lo, hi].
    double sd = 1.0 / std::sqrt(tau);
    double tail = 0.5 * std::erfc((mu - space.lo()) / (sd * std::sqrt(2.0))) +
                  0.5 * std::erfc((space.hi() - mu) / (sd * std::sqrt(2.0)));
    if (tail > 1e-8)
        throw TruncationError("gaussian mass outside the grid would be " + std::to_string(tail) +
                              "; widen the grid to cover mu +- 6/sqrt(tau)");
    std::vector<double> logv(space.size());
    for (int i = 0; i < space.size(); ++i) {
        double d = space.value(i) - mu;
        logv[i] = -0.5 * tau * d * d;
    }
    return belief_from_log_density(space, logv);
}

LogBelief poisson_belief(const StateSpace& space, double lambda) {
    if (space.kind() != StateSpace::Kind::TruncatedIntegers)
        throw Error("poisson belief needs a truncated-integer space");
    if (!(lambda > 0.0)) throw Error("rate must be positive");
    if (space.theta_max() < lambda + 10.0 * std::sqrt(lambda))
        throw TruncationError("theta_max " + std::to_string(space.theta_max()) +
                              " too small for Poisson(" + std::to_string(lambda) +
                              "); need at least lambda + 10*sqrt(lambda)");
    std::vector<double> logv(space.size());
    for (int i = 0; i < space.size(); ++i)
        logv[i] = i * std::log(lambda) - lambda - std::lgamma(i + 1.0);
    return belief_from_log_density(space, logv);
}

LogBelief bernoulli_belief(double x) {
    if (!(x > 0.0 && x < 1.0)) throw Error("bernoulli parameter must lie in (0,1)");
    auto space = StateSpace::finite_discrete({0.0, 1.0});
    std::vector<double> logv = {std::log1p(-x), std::log(x)};
    return belief_from_log_density(space, logv);
}

NormalizedBelief normalize_against_prior(const LogBelief& b, const LogPrior& p) {
    if (b.space != p.space) throw SpaceMismatch();
    NormalizedBelief nb;
    nb.space = b.space;
    nb.shape.resize(b.logf.size());
    for (std::size_t i = 0; i < b.logf.size(); ++i) nb.shape[i] = b.logf[i] - p.logf[i];
    nb.log_scale = 0.0;
    return nb;
}

NormalizedBelief normalized_from_shape(const LogPrior& p, std::vector<double> shape) {
    if (static_cast<int>(shape.size()) != p.space.size())
        throw Error("shape length does not match space size");
    std::vector<double> lognum(shape.size());
    for (std::size_t i = 0; i < shape.size(); ++i) lognum[i] = p.logf[i] + shape[i];
    double total = log_quadrature(p.space, lognum);
    if (total == kNegInf) throw AllZeroDensity();
    NormalizedBelief nb;
    nb.space = p.space;
    nb.shape = std::move(shape);
    nb.log_scale = -total;
    return nb;
}

LogBelief belief_from_normalized(const LogPrior& p, const NormalizedBelief& nb) {
    if (nb.space != p.space) throw SpaceMismatch();
    std::vector<double> logv(nb.shape.size());
    for (std::size_t i = 0; i < nb.shape.size(); ++i)
        logv[i] = p.logf[i] + nb.shape[i] + nb.log_scale;
    return belief_from_log_density(p.space, logv);
}

double entropy(const LogBelief& b) {
    double acc = 0.0;
    for (int i = 0; i < b.space.size(); ++i) {
        double lf = b.logf[i];
        if (lf == kNegInf) continue;
        acc -= b.space.weight(i) * std::exp(lf) * lf;
    }
    return acc;
}

double belief_mean(const LogBelief& b) {
    double acc = 0.0;
    for (int i = 0; i < b.space.size(); ++i) {
        if (b.logf[i] == kNegInf) continue;
        acc += b.space.weight(i) * std::exp(b.logf[i]) * b.space.value(i);
    }
    return acc;
}

double belief_variance(const LogBelief& b) {
    double m = belief_mean(b);
    double acc = 0.0;
    for (int i = 0; i < b.space.size(); ++i) {
        if (b.logf[i] == kNegInf) continue;
        double d = b.space.value(i) - m;
        acc += b.space.weight(i) * std::exp(b.logf[i]) * d * d;
    }
    return acc;
}

}  // namespace beliefdyn

#include "beliefdyn/likelihood.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>

namespace beliefdyn {

namespace {
constexpr double kNegInf = -std::numeric_limits<double>::infinity();
constexpr double kMaximizerRelTol = 1e-9;
constexpr double kPositiveGapTol = 1e-6;
}  // namespace

WeightedLikelihood weighted_likelihood(const InitialCondition& ic, const CentralityData& c) {
    WeightedLikelihood l;
    l.space = ic.space();
    l.logl = weighted_logg_sum(ic, c.v);
    l.centrality = c;
    return l;
}

std::vector<int> argmax_set(const std::vector<double>& logl, double rel_tol) {
    double m = kNegInf;
    for (double v : logl) m = std::max(m, v);
    std::vector<int> set;
    // L(theta) >= L_max * (1 - rel_tol) compared in log space.
    double cutoff = m + std::log1p(-rel_tol);
    for (int k = 0; k < static_cast<int>(logl.size()); ++k)
        if (logl[k] >= cutoff) set.push_back(k);
    return set;
}

ConsensusReport predict_consensus(const WeightedLikelihood& l, const InitialCondition& ic) {
    ConsensusReport rep;
    rep.maximizer_indices = argmax_set(l.logl, kMaximizerRelTol);
    rep.maximizer_values.reserve(rep.maximizer_indices.size());
    for (int k : rep.maximizer_indices) rep.maximizer_values.push_back(l.space.value(k));

    double m = kNegInf;
    for (double v : l.logl) m = std::max(m, v);
    std::vector<bool> is_max(l.logl.size(), false);
    for (int k : rep.maximizer_indices) is_max[k] = true;
    double best_other = kNegInf;
    for (int k = 0; k < static_cast<int>(l.logl.size()); ++k)
        if (!is_max[k]) best_other = std::max(best_other, l.logl[k]);
    rep.log_gap = best_other == kNegInf ? 0.0 : m - best_other;

    if (rep.maximizer_indices.size() == 1) {
        rep.predicted_index = rep.maximizer_indices[0];
        rep.predicted_point = l.space.value(rep.maximizer_indices[0]);
    }

    auto check_bounded = [&]() {
        auto reports = check_bounded_g(ic);
        std::string flagged;
        for (int i = 0; i < static_cast<int>(reports.size()); ++i) {
            if (reports[i].likely_unbounded) {
                if (!flagged.empty()) flagged += ", ";
                flagged += std::to_string(i);
            }
        }
        HypothesisCheck hc;
        hc.name = "bounded_g";
        hc.passed = flagged.empty();
        hc.detail = flagged.empty()
                        ? "no agent's normalized belief rises at the boundary"
                        : "normalized belief still rising at the boundary for agent(s) " + flagged +
                              " (heuristic)";
        return hc;
    };

    switch (l.space.kind()) {
        case StateSpace::Kind::FiniteDiscrete: {
            rep.conditions.push_back({"finite_space", true,
                                      "finite state space: beliefs concentrate on the maximizer "
                                      "set without further hypotheses"});
            break;
        }
        case StateSpace::Kind::TruncatedIntegers: {
            HypothesisCheck gap;
            gap.name = "positive_gap";
            gap.passed = rep.log_gap > kPositiveGapTol;
            gap.detail = "log gap to the best non-maximizer = " + std::to_string(rep.log_gap);
            rep.conditions.push_back(gap);
            rep.conditions.push_back(check_bounded());
            break;
        }
        case StateSpace::Kind::Grid: {
            double center = 0.5 * (l.space.lo() + l.space.hi());
            double radius = 0.75 * 0.5 * (l.space.hi() - l.space.lo());
            double outer = kNegInf;
            for (int k = 0; k < l.space.size(); ++k)
                if (std::abs(l.space.value(k) - center) > radius)
                    outer = std::max(outer, l.logl[k]);
            HypothesisCheck decay;
            decay.name = "likelihood_decay";
            decay.passed = outer < m - 1e-9;
            decay.detail = "sup of logL beyond 3/4 of the grid half-width is " +
                           std::to_string(outer) + " vs max " + std::to_string(m);
            rep.conditions.push_back(decay);
            rep.conditions.push_back(check_bounded());
            break;
        }
    }
    return rep;
}

BinaryConsensus binary_consensus(const std::vector<double>& x, const std::vector<double>& v) {
    if (x.size() != v.size()) throw Error("need one vote weight per probability");
    BinaryConsensus out;
    double tally = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        if (!(x[i] > 0.0 && x[i] < 1.0)) throw Error("vote probabilities must lie in (0,1)");
        tally += v[i] * (std::log(x[i]) - std::log1p(-x[i]));
    }
    out.tally = tally;
    if (std::abs(tally) <= 1e-12)
        out.verdict = BinaryVerdict::Tie;
    else
        out.verdict = tally > 0.0 ? BinaryVerdict::StateOne : BinaryVerdict::StateZero;
    return out;
}

PoissonConsensus poisson_consensus(const std::vector<double>& lambda,
                                   const std::vector<double>& v) {
    if (lambda.size() != v.size()) throw Error("need one weight per rate");
    PoissonConsensus out;
    double log_rate = 0.0;
    double mean = 0.0;
    for (std::size_t i = 0; i < lambda.size(); ++i) {
        if (!(lambda[i] > 0.0)) throw Error("rates must be positive");
        log_rate += v[i] * std::log(lambda[i]);
        mean += v[i] * lambda[i];
    }
    out.rate = std::exp(log_rate);
    out.additive_mean = mean;
    double nearest = std::round(out.rate);
    if (std::abs(out.rate - nearest) <= 1e-9 * std::max(1.0, out.rate) && nearest >= 1.0) {
        out.points = {static_cast<long long>(nearest) - 1, static_cast<long long>(nearest)};
    } else {
        out.points = {static_cast<long long>(std::floor(out.rate))};
    }
    return out;
}

namespace {

void validate_correlation(const std::vector<std::vector<double>>& rho, std::size_t n) {
    if (rho.size() != n) throw InvalidCorrelationMatrix("correlation matrix has wrong size");
    for (std::size_t i = 0; i < n; ++i) {
        if (rho[i].size() != n) throw InvalidCorrelationMatrix("correlation matrix is not square");
        if (std::abs(rho[i][i] - 1.0) > 1e-12)
            throw InvalidCorrelationMatrix("correlation diagonal must be 1");
        for (std::size_t j = 0; j < n; ++j) {
            if (std::abs(rho[i][j] - rho[j][i]) > 1e-12)
                throw InvalidCorrelationMatrix("correlation matrix must be symmetric");
            if (std::abs(rho[i][j]) > 1.0 + 1e-12)
                throw InvalidCorrelationMatrix("correlations must lie in [-1, 1]");
        }
    }
}

// Lower Cholesky factor of a positive-semidefinite matrix; a vanishing
// pivot zeroes its column (perfectly correlated signals are allowed).
std::vector<std::vector<double>> cholesky_psd(const std::vector<std::vector<double>>& a) {
    const std::size_t n = a.size();
    std::vector<std::vector<double>> l(n, std::vector<double>(n, 0.0));
    for (std::size_t j = 0; j < n; ++j) {
        double pivot = a[j][j];
        for (std::size_t k = 0; k < j; ++k) pivot -= l[j][k] * l[j][k];
        if (pivot < -1e-10) throw InvalidCorrelationMatrix("correlation matrix is not PSD");
        l[j][j] = pivot > 0.0 ? std::sqrt(pivot) : 0.0;
        for (std::size_t i = j + 1; i < n; ++i) {
            double acc = a[i][j];
            for (std::size_t k = 0; k < j; ++k) acc -= l[i][k] * l[j][k];
            l[i][j] = l[j][j] > 0.0 ? acc / l[j][j] : 0.0;
        }
    }
    return l;
}

std::vector<double> consensus_weights(const std::vector<double>& tau,
                                      const std::vector<double>& v) {
    double denom = 0.0;
    for (std::size_t i = 0; i < tau.size(); ++i) denom += v[i] * tau[i];
    std::vector<double> c(tau.size());
    for (std::size_t i = 0; i < tau.size(); ++i) c[i] = v[i] * tau[i] / denom;
    return c;
}

double consensus_variance(const std::vector<double>& tau, const std::vector<double>& v,
                          const std::vector<std::vector<double>>* rho) {
    const std::size_t n = tau.size();
    double denom = 0.0;
    for (std::size_t i = 0; i < n; ++i) denom += v[i] * tau[i];
    double num = 0.0;
    for (std::size_t i = 0; i < n; ++i) num += v[i] * v[i] * tau[i];
    if (rho) {
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = i + 1; j < n; ++j)
                num += 2.0 * v[i] * v[j] * std::sqrt(tau[i] * tau[j]) * (*rho)[i][j];
    }
    return num / (denom * denom);
}

}  // namespace

GaussianConsensus gaussian_consensus(const std::vector<double>& mu, const std::vector<double>& tau,
                                     const std::vector<double>& v,
                                     const std::vector<std::vector<double>>* rho) {
    const std::size_t n = mu.size();
    if (tau.size() != n || v.size() != n) throw Error("mu, tau, v must have equal length");
    for (double t : tau)
        if (!(t > 0.0)) throw Error("precisions must be positive");
    if (rho) validate_correlation(*rho, n);

    GaussianConsensus out;
    out.weights = consensus_weights(tau, v);
    out.theta_max = 0.0;
    for (std::size_t i = 0; i < n; ++i) out.theta_max += out.weights[i] * mu[i];
    out.variance = consensus_variance(tau, v, rho);
    out.thresholds.assign(n, 0.0);
    for (std::size_t k = 0; k < n; ++k) {
        double num = 0.0, den = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            if (i == k) continue;
            num += v[i] * v[i] * tau[i];
            den += v[i] * tau[i];
        }
        out.thresholds[k] = den > 0.0 ? 2.0 * num / den : 0.0;
    }
    return out;
}

PrecisionEffect precision_effect(const std::vector<double>& tau, const std::vector<double>& v,
                                 int k, const std::vector<double>& tau_grid) {
    if (k < 0 || k >= static_cast<int>(tau.size())) throw Error("agent index out of range");
    if (tau_grid.size() < 2) throw Error("precision grid needs at least 2 values");
    PrecisionEffect out;
    std::vector<double> work = tau;
    out.variances.reserve(tau_grid.size());
    for (double t : tau_grid) {
        if (!(t > 0.0)) throw Error("grid precisions must be positive");
        work[k] = t;
        out.variances.push_back(consensus_variance(work, v, nullptr));
    }
    out.monotone_decreasing = true;
    int arg = 0;
    for (int i = 1; i < static_cast<int>(out.variances.size()); ++i) {
        if (out.variances[i] >= out.variances[i - 1]) out.monotone_decreasing = false;
        if (out.variances[i] > out.variances[arg]) arg = i;
    }
    if (!out.monotone_decreasing && arg > 0 &&
        arg < static_cast<int>(out.variances.size()) - 1)
        out.interior_maximum_tau = tau_grid[arg];

    // Stationary point of the variance in tau_k: positive only when the
    // agent's centrality exceeds its threshold.
    double num = 0.0, den = 0.0;
    for (std::size_t i = 0; i < tau.size(); ++i) {
        if (static_cast<int>(i) == k) continue;
        num += v[i] * v[i] * tau[i];
        den += v[i] * tau[i];
    }
    double threshold = den > 0.0 ? 2.0 * num / den : 0.0;
    out.stationary_tau = (v[k] - threshold) * den / (v[k] * v[k]);
    return out;
}

MonteCarloVariance estimate_consensus_variance(double theta_star, const std::vector<double>& tau,
                                               const std::vector<double>& v, int draws,
                                               std::uint64_t seed,
                                               const std::vector<std::vector<double>>* rho) {
    const std::size_t n = tau.size();
    if (v.size() != n) throw Error("tau and v must have equal length");
    if (draws < 1000) throw Error("need at least 1000 draws");
    for (double t : tau)
        if (!(t > 0.0)) throw Error("precisions must be positive");

    std::vector<std::vector<double>> chol;
    if (rho) {
        validate_correlation(*rho, n);
        std::vector<std::vector<double>> cov(n, std::vector<double>(n));
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = 0; j < n; ++j)
                cov[i][j] = (*rho)[i][j] / std::sqrt(tau[i] * tau[j]);
        chol = cholesky_psd(cov);
    }

    auto c = consensus_weights(tau, v);
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> normal(0.0, 1.0);
    std::vector<double> z(n);

    // Welford running moments.
    double mean = 0.0, m2 = 0.0;
    for (int d = 0; d < draws; ++d) {
        for (std::size_t i = 0; i < n; ++i) z[i] = normal(rng);
        double point = 0.0;
        if (rho) {
            for (std::size_t i = 0; i < n; ++i) {
                double noise = 0.0;
                for (std::size_t j = 0; j <= i; ++j) noise += chol[i][j] * z[j];
                point += c[i] * (theta_star + noise);
            }
        } else {
            for (std::size_t i = 0; i < n; ++i)
                point += c[i] * (theta_star + z[i] / std::sqrt(tau[i]));
        }
        double delta = point - mean;
        mean += delta / (d + 1);
        m2 += delta * (point - mean);
    }

    MonteCarloVariance out;
    out.sample_mean = mean;
    out.sample_variance = m2 / (draws - 1);
    out.seed = seed;
    out.draws = draws;
    return out;
}

}  // namespace beliefdyn

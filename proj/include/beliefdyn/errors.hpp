#pragma once

#include <stdexcept>
#include <string>

namespace beliefdyn {

struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Graph validation: some node cannot reach another.
struct NotStronglyConnected : Error {
    int from, to;
    NotStronglyConnected(int from_, int to_)
        : Error("graph is not strongly connected: no path from node " + std::to_string(from_) +
                " to node " + std::to_string(to_)),
          from(from_), to(to_) {}
};

// Power iteration did not reach the requested residual within max_iter.
struct NoConvergence : Error {
    double residual;
    int iterations;
    NoConvergence(double residual_, int iterations_)
        : Error("power iteration did not converge: residual " + std::to_string(residual_) +
                " after " + std::to_string(iterations_) + " iterations"),
          residual(residual_), iterations(iterations_) {}
};

struct AllZeroDensity : Error {
    AllZeroDensity() : Error("density is zero everywhere") {}
};

struct NonFiniteDensity : Error {
    NonFiniteDensity() : Error("density contains a non-finite value") {}
};

// Too much probability mass would fall outside the represented space.
struct TruncationError : Error {
    using Error::Error;
};

struct SpaceMismatch : Error {
    SpaceMismatch() : Error("state spaces do not match") {}
};

// The update normalizer vanished: the initial condition is degenerate.
struct DegenerateUpdate : Error {
    int round;
    explicit DegenerateUpdate(int round_)
        : Error("degenerate update at round " + std::to_string(round_) +
                ": normalizer is zero"),
          round(round_) {}
};

struct BbcmNotConverged : Error {
    double spread;
    explicit BbcmNotConverged(double spread_)
        : Error("averaging dynamics did not converge: per-agent weight spread " +
                std::to_string(spread_)),
          spread(spread_) {}
};

struct SpecOutsideCatalog : Error {
    using Error::Error;
};

struct InvalidCorrelationMatrix : Error {
    using Error::Error;
};

// Malformed run configuration (CLI exit code 64).
struct ConfigError : Error {
    using Error::Error;
};

}  // namespace beliefdyn

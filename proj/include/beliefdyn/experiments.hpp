#pragma once

#include <string>
#include <vector>

#include "beliefdyn/serialize.hpp"

namespace beliefdyn {

/// A named, machine-runnable experiment: a scenario config plus the checks
/// its outcome must satisfy.
struct ScenarioSpec {
    std::string name;
    std::string summary;
    json config;
    json expected;  // array of assertion objects, see run_experiment
};

/// Prebuilt experiment catalog: the two-team constant/oscillation/
/// convergence quartet, the non-convergence counterexamples, the power-law
/// feasibility table, the flood-forecast consensus, a Gaussian pair, and
/// the clustered-seeding comparison against the informed-averaging
/// baseline.
std::vector<ScenarioSpec> catalog();

/// Looks up a catalog entry by name; throws ConfigError when unknown.
const ScenarioSpec& find_scenario(const std::vector<ScenarioSpec>& specs,
                                  const std::string& name);

struct AssertionResult {
    std::string description;
    bool passed = false;
    std::string detail;
};

struct ExperimentResult {
    std::vector<AssertionResult> assertions;
    bool all_passed() const {
        for (const auto& a : assertions)
            if (!a.passed) return false;
        return !assertions.empty();
    }
};

/// Executes a scenario and evaluates each entry of its "expected" block.
ExperimentResult run_experiment(const ScenarioSpec& spec);

}  // namespace beliefdyn

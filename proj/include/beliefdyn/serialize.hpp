#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string_view>

#include <json.hpp>

#include "beliefdyn/dynamics.hpp"
#include "beliefdyn/graph.hpp"
#include "beliefdyn/likelihood.hpp"
#include "beliefdyn/statespace.hpp"

namespace beliefdyn {

using json = nlohmann::json;

/// 64-bit FNV-1a; stable across platforms, embedded in every output file
/// so runs can be traced back to their configuration.
std::uint64_t fnv1a_hash(std::string_view data);

json space_to_json(const StateSpace& s);
StateSpace space_from_json(const json& j);

/// Graph input format: {"n": int, "edges": [[i,j],...], "undirected": bool};
/// when "undirected" is true each listed edge is mirrored. Family
/// shorthands are also accepted: {"family":"complete","n":..},
/// {"family":"cycle","n":..,"undirected":..}, {"family":"ab","a":..,"b":..}.
DirectedGraph graph_from_json(const json& j);
json graph_to_json(const DirectedGraph& g);

/// {"space": {...}, "log_values": [...]} or {"family": "gaussian" |
/// "poisson" | "bernoulli", "params": {...}} (families resolve against the
/// shared scenario space).
LogBelief belief_from_json(const json& j, const std::optional<StateSpace>& shared);
json belief_to_json(const LogBelief& b);

/// {"family":"flat"} against the shared space, or raw
/// {"space": {...}, "log_values": [...], "proper": bool}.
LogPrior prior_from_json(const json& j, const std::optional<StateSpace>& shared);
json prior_to_json(const LogPrior& p);

struct Scenario {
    InitialCondition ic;
    int rounds = 0;
};

/// Scenario config {"graph":…, "prior":…, "beliefs":[…], "rounds":T,
/// "space":…} or a builder reference {"builder": {"kind":
/// "counterexample"|"ab_example", ...}, "rounds":T}. Malformed configs
/// throw ConfigError with the offending field named.
Scenario scenario_from_json(const json& j);

json consensus_report_to_json(const ConsensusReport& rep);
json gaussian_consensus_to_json(const GaussianConsensus& gc);

/// Trajectory CSV: a "# config_hash=... seed=..." comment line, a header,
/// then rows (round, agent, state_index, state_value, probability), where
/// probability is the quadrature mass of the cell.
void write_trajectory_csv(std::ostream& os, const Trajectory& traj, std::uint64_t config_hash,
                          std::uint64_t seed);
json trajectory_to_json(const Trajectory& traj, std::uint64_t config_hash, std::uint64_t seed);

/// Per-round diagnostics summary (entropy, mass at the likelihood argmax,
/// truncation-boundary mass) plus run status flags.
json diagnostics_to_json(const Trajectory& traj, std::uint64_t config_hash, std::uint64_t seed);

}  // namespace beliefdyn

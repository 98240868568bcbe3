#include "beliefdyn/serialize.hpp"

#include <cmath>
#include <cstdio>
#include <limits>
#include <ostream>

#include "beliefdyn/scenarios.hpp"

namespace beliefdyn {

namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();

const json& require_key(const json& j, const char* key, const std::string& path) {
    if (!j.is_object() || !j.contains(key))
        throw ConfigError("missing key '" + path + (path.empty() ? "" : ".") + key + "'");
    return j.at(key);
}

double require_number(const json& j, const char* key, const std::string& path) {
    const json& v = require_key(j, key, path);
    if (!v.is_number()) throw ConfigError("'" + path + "." + key + "' must be a number");
    return v.get<double>();
}

int require_int(const json& j, const char* key, const std::string& path) {
    const json& v = require_key(j, key, path);
    if (!v.is_number_integer()) throw ConfigError("'" + path + "." + key + "' must be an integer");
    return v.get<int>();
}

// -inf serializes as null (JSON has no infinities).
json log_value_to_json(double v) {
    if (v == kNegInf) return nullptr;
    return v;
}

double log_value_from_json(const json& j, const std::string& where) {
    if (j.is_null()) return kNegInf;
    if (!j.is_number()) throw ConfigError("'" + where + "' entries must be numbers or null");
    return j.get<double>();
}

}  // namespace

std::uint64_t fnv1a_hash(std::string_view data) {
    std::uint64_t h = 14695981039346656037ull;
    for (unsigned char c : data) {
        h ^= c;
        h *= 1099511628211ull;
    }
    return h;
}

json space_to_json(const StateSpace& s) {
    switch (s.kind()) {
        case StateSpace::Kind::FiniteDiscrete:
            return {{"kind", "finite"}, {"labels", s.labels()}};
        case StateSpace::Kind::TruncatedIntegers:
            return {{"kind", "truncated_integers"}, {"theta_max", s.theta_max()}};
        default:
            return {{"kind", "grid"}, {"lo", s.lo()}, {"hi", s.hi()}, {"points", s.size()}};
    }
}

StateSpace space_from_json(const json& j) {
    std::string kind = require_key(j, "kind", "space").get<std::string>();
    try {
        if (kind == "finite") {
            auto labels = require_key(j, "labels", "space").get<std::vector<double>>();
            return StateSpace::finite_discrete(std::move(labels));
        }
        if (kind == "truncated_integers")
            return StateSpace::truncated_integers(require_int(j, "theta_max", "space"));
        if (kind == "grid")
            return StateSpace::grid(require_number(j, "lo", "space"),
                                    require_number(j, "hi", "space"),
                                    require_int(j, "points", "space"));
    } catch (const ConfigError&) {
        throw;
    } catch (const Error& e) {
        throw ConfigError(std::string("invalid 'space': ") + e.what());
    }
    throw ConfigError("unknown space kind '" + kind + "'");
}

DirectedGraph graph_from_json(const json& j) {
    try {
        if (j.contains("family")) {
            std::string family = j.at("family").get<std::string>();
            if (family == "complete") return complete_graph(require_int(j, "n", "graph"));
            if (family == "cycle")
                return cycle_graph(require_int(j, "n", "graph"),
                                   j.value("undirected", true));
            if (family == "ab")
                return build_ab_graph(require_int(j, "a", "graph"), require_int(j, "b", "graph"));
            throw ConfigError("unknown graph family '" + family + "'");
        }
        int n = require_int(j, "n", "graph");
        const json& ej = require_key(j, "edges", "graph");
        if (!ej.is_array()) throw ConfigError("'graph.edges' must be an array of pairs");
        bool undirected = j.value("undirected", false);
        std::vector<std::pair<int, int>> edges;
        edges.reserve(ej.size() * (undirected ? 2 : 1));
        for (const auto& e : ej) {
            if (!e.is_array() || e.size() != 2)
                throw ConfigError("'graph.edges' must contain [i, j] pairs");
            int a = e[0].get<int>(), b = e[1].get<int>();
            edges.emplace_back(a, b);
            if (undirected) edges.emplace_back(b, a);
        }
        return build_graph(n, edges);
    } catch (const ConfigError&) {
        throw;
    } catch (const Error& e) {
        throw ConfigError(std::string("invalid 'graph': ") + e.what());
    }
}

json graph_to_json(const DirectedGraph& g) {
    json edges = json::array();
    for (int i = 0; i < g.n; ++i)
        for (int j = 0; j < g.n; ++j)
            if (g.edge(i, j)) edges.push_back({i, j});
    return {{"n", g.n}, {"edges", edges}, {"undirected", false}};
}

LogBelief belief_from_json(const json& j, const std::optional<StateSpace>& shared) {
    try {
        if (j.contains("family")) {
            std::string family = j.at("family").get<std::string>();
            const json& params = require_key(j, "params", "belief");
            if (family == "bernoulli") {
                auto b = bernoulli_belief(require_number(params, "x", "belief.params"));
                if (shared && *shared != b.space)
                    throw ConfigError("bernoulli belief needs the {0,1} space");
                return b;
            }
            if (!shared) throw ConfigError("belief family '" + family + "' needs a 'space'");
            if (family == "gaussian")
                return gaussian_belief(*shared, require_number(params, "mu", "belief.params"),
                                       require_number(params, "tau", "belief.params"));
            if (family == "poisson")
                return poisson_belief(*shared, require_number(params, "lambda", "belief.params"));
            throw ConfigError("unknown belief family '" + family + "'");
        }
        StateSpace space = j.contains("space") ? space_from_json(j.at("space"))
                                               : (shared ? *shared
                                                         : throw ConfigError(
                                                               "belief needs 'space' or a shared "
                                                               "scenario 'space'"));
        const json& lv = require_key(j, "log_values", "belief");
        if (!lv.is_array() || static_cast<int>(lv.size()) != space.size())
            throw ConfigError("'belief.log_values' must have one entry per state");
        std::vector<double> logv;
        logv.reserve(lv.size());
        for (const auto& x : lv) logv.push_back(log_value_from_json(x, "belief.log_values"));
        return belief_from_log_density(space, logv);
    } catch (const ConfigError&) {
        throw;
    } catch (const Error& e) {
        throw ConfigError(std::string("invalid 'belief': ") + e.what());
    }
}

json belief_to_json(const LogBelief& b) {
    json lv = json::array();
    for (double v : b.logf) lv.push_back(log_value_to_json(v));
    return {{"space", space_to_json(b.space)}, {"log_values", lv}};
}

LogPrior prior_from_json(const json& j, const std::optional<StateSpace>& shared) {
    try {
        if (j.contains("family")) {
            std::string family = j.at("family").get<std::string>();
            if (family != "flat") throw ConfigError("unknown prior family '" + family + "'");
            if (!shared) throw ConfigError("flat prior needs a shared scenario 'space'");
            return flat_prior(*shared);
        }
        StateSpace space = j.contains("space")
                               ? space_from_json(j.at("space"))
                               : (shared ? *shared
                                         : throw ConfigError("prior needs 'space' or a shared "
                                                             "scenario 'space'"));
        const json& lv = require_key(j, "log_values", "prior");
        if (!lv.is_array() || static_cast<int>(lv.size()) != space.size())
            throw ConfigError("'prior.log_values' must have one entry per state");
        LogPrior p;
        p.space = space;
        p.logf.reserve(lv.size());
        for (const auto& x : lv) {
            double v = log_value_from_json(x, "prior.log_values");
            if (!std::isfinite(v)) throw ConfigError("prior log-density must be finite (f* > 0)");
            p.logf.push_back(v);
        }
        p.proper = j.value("proper", true);
        return p;
    } catch (const ConfigError&) {
        throw;
    } catch (const Error& e) {
        throw ConfigError(std::string("invalid 'prior': ") + e.what());
    }
}

json prior_to_json(const LogPrior& p) {
    json lv = json::array();
    for (double v : p.logf) lv.push_back(v);
    return {{"space", space_to_json(p.space)}, {"log_values", lv}, {"proper", p.proper}};
}

Scenario scenario_from_json(const json& j) {
    if (!j.is_object()) throw ConfigError("config must be a JSON object");
    int rounds = j.value("rounds", 0);
    if (rounds < 0) throw ConfigError("'rounds' must be nonnegative");

    if (j.contains("builder")) {
        const json& b = j.at("builder");
        std::string kind = require_key(b, "kind", "builder").get<std::string>();
        try {
            if (kind == "counterexample")
                return {counterexample_ic(require_int(b, "variant", "builder"),
                                          require_number(b, "alpha", "builder"),
                                          require_int(b, "theta_max", "builder")),
                        rounds};
            if (kind == "ab_example")
                return {ab_example_ic(require_int(b, "a", "builder"),
                                      require_int(b, "b", "builder"),
                                      require_number(b, "alpha", "builder")),
                        rounds};
        } catch (const ConfigError&) {
            throw;
        } catch (const Error& e) {
            throw ConfigError(std::string("invalid 'builder': ") + e.what());
        }
        throw ConfigError("unknown builder kind '" + kind + "'");
    }

    DirectedGraph g = graph_from_json(require_key(j, "graph", ""));
    std::optional<StateSpace> shared;
    if (j.contains("space")) shared = space_from_json(j.at("space"));
    const json& bj = require_key(j, "beliefs", "");
    if (!bj.is_array() || static_cast<int>(bj.size()) != g.n)
        throw ConfigError("'beliefs' must list one belief per agent (" + std::to_string(g.n) +
                          " expected)");
    std::vector<LogBelief> beliefs;
    beliefs.reserve(bj.size());
    for (const auto& b : bj) beliefs.push_back(belief_from_json(b, shared));
    if (!shared) shared = beliefs.front().space;
    LogPrior prior = j.contains("prior") ? prior_from_json(j.at("prior"), shared)
                                         : flat_prior(*shared);
    try {
        return {InitialCondition(std::move(g), std::move(prior), std::move(beliefs)), rounds};
    } catch (const Error& e) {
        throw ConfigError(std::string("inconsistent scenario: ") + e.what());
    }
}

json consensus_report_to_json(const ConsensusReport& rep) {
    json conditions = json::array();
    for (const auto& c : rep.conditions)
        conditions.push_back({{"name", c.name}, {"passed", c.passed}, {"detail", c.detail}});
    json out = {
        {"maximizer_indices", rep.maximizer_indices},
        {"maximizer_values", rep.maximizer_values},
        {"log_gap", rep.log_gap},
        {"conditions", conditions},
    };
    out["predicted_point"] = rep.predicted_point ? json(*rep.predicted_point) : json(nullptr);
    return out;
}

json gaussian_consensus_to_json(const GaussianConsensus& gc) {
    return {{"theta_max", gc.theta_max},
            {"weights", gc.weights},
            {"variance", gc.variance},
            {"thresholds", gc.thresholds}};
}

namespace {

std::string format_double(double v) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

double cell_mass(const StateSpace& space, const LogBelief& b, int k) {
    return b.logf[k] == kNegInf ? 0.0 : space.weight(k) * std::exp(b.logf[k]);
}

char hex_digit(unsigned v) { return v < 10 ? char('0' + v) : char('a' + v - 10); }

std::string hex64(std::uint64_t v) {
    std::string s(16, '0');
    for (int i = 15; i >= 0; --i) {
        s[i] = hex_digit(v & 0xf);
        v >>= 4;
    }
    return s;
}

}  // namespace

void write_trajectory_csv(std::ostream& os, const Trajectory& traj, std::uint64_t config_hash,
                          std::uint64_t seed) {
    os << "# config_hash=" << hex64(config_hash) << " seed=" << seed << "\n";
    os << "round,agent,state_index,state_value,probability\n";
    for (std::size_t t = 0; t < traj.rounds.size(); ++t) {
        for (std::size_t a = 0; a < traj.rounds[t].size(); ++a) {
            const auto& b = traj.rounds[t][a];
            for (int k = 0; k < traj.space.size(); ++k) {
                os << t << ',' << a << ',' << k << ',' << format_double(traj.space.value(k))
                   << ',' << format_double(cell_mass(traj.space, b, k)) << '\n';
            }
        }
    }
}

json trajectory_to_json(const Trajectory& traj, std::uint64_t config_hash, std::uint64_t seed) {
    json rows = json::array();
    for (std::size_t t = 0; t < traj.rounds.size(); ++t)
        for (std::size_t a = 0; a < traj.rounds[t].size(); ++a)
            for (int k = 0; k < traj.space.size(); ++k)
                rows.push_back({t, a, k, traj.space.value(k),
                                cell_mass(traj.space, traj.rounds[t][a], k)});
    return {{"config_hash", hex64(config_hash)},
            {"seed", seed},
            {"columns", {"round", "agent", "state_index", "state_value", "probability"}},
            {"rows", rows}};
}

json diagnostics_to_json(const Trajectory& traj, std::uint64_t config_hash, std::uint64_t seed) {
    json rounds = json::array();
    for (std::size_t t = 0; t < traj.diagnostics.size(); ++t) {
        const auto& d = traj.diagnostics[t];
        rounds.push_back({{"round", t},
                          {"entropy", d.entropy},
                          {"mass_at_argmax", d.mass_at_argmax},
                          {"boundary_mass", d.boundary_mass}});
    }
    json out = {{"config_hash", hex64(config_hash)},
                {"seed", seed},
                {"likelihood_argmax_index", traj.likelihood_argmax_index},
                {"likelihood_argmax_value", traj.space.value(traj.likelihood_argmax_index)},
                {"tail_mass_warning", traj.tail_mass_warning},
                {"rounds", rounds}};
    out["degenerate_round"] =
        traj.degenerate_round ? json(*traj.degenerate_round) : json(nullptr);
    return out;
}

}  // namespace beliefdyn

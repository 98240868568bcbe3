#include "beliefdyn/experiments.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>
#include <sstream>

#include "beliefdyn/scenarios.hpp"

namespace beliefdyn {

namespace {

json ab_builder(int a, int b, double alpha, int rounds) {
    return {{"builder", {{"kind", "ab_example"}, {"a", a}, {"b", b}, {"alpha", alpha}}},
            {"rounds", rounds}};
}

json power_law_config(double prior_exp, bool split, double p1, double p2) {
    return {{"power_law",
             {{"prior_exponent", prior_exp},
              {"parity_split", split},
              {"belief_exponents", {p1, p2}}}}};
}

}  // namespace

std::vector<ScenarioSpec> catalog() {
    std::vector<ScenarioSpec> specs;

    specs.push_back(
        {"poisson-floods",
         "two agents forecasting yearly flood counts with rates 2 and 1000 agree on the "
         "geometric-mean forecast, 44",
         {{"graph", {{"n", 2}, {"edges", {{0, 1}, {1, 0}}}}},
          {"space", {{"kind", "truncated_integers"}, {"theta_max", 2000}}},
          {"prior", {{"family", "flat"}}},
          {"beliefs",
           {{{"family", "poisson"}, {"params", {{"lambda", 2.0}}}},
            {{"family", "poisson"}, {"params", {{"lambda", 1000.0}}}}}},
          {"rounds", 25}},
         json::array({{{"kind", "consensus_point"}, {"value", 44.0}, {"tol", 1e-9}},
                      {{"kind", "mass_at"},
                       {"state_value", 44.0},
                       {"min_mass", 0.99},
                       {"by_round", 25}}})});

    specs.push_back(
        {"gaussian-pair",
         "two equally precise Gaussian agents on a complete pair settle halfway between "
         "their signals",
         {{"graph", {{"family", "complete"}, {"n", 2}}},
          {"space", {{"kind", "grid"}, {"lo", -10.0}, {"hi", 10.0}, {"points", 2001}}},
          {"prior", {{"family", "flat"}}},
          {"beliefs",
           {{{"family", "gaussian"}, {"params", {{"mu", 0.0}, {"tau", 1.0}}}},
            {{"family", "gaussian"}, {"params", {{"mu", 1.0}, {"tau", 1.0}}}}}},
          {"rounds", 20}},
         json::array({{{"kind", "consensus_point"}, {"value", 0.5}, {"tol", 0.005}},
                      {{"kind", "mass_near"},
                       {"state_value", 0.5},
                       {"cells", 5},
                       {"min_mass", 0.99},
                       {"by_round", 20}}})});

    specs.push_back({"constant-21",
                     "self-weight 2, cross-weight 1: the x team's belief in state 0 never moves",
                     ab_builder(2, 1, 0.3, 20),
                     json::array({{{"kind", "sequence"},
                                   {"agent", 0},
                                   {"state_index", 0},
                                   {"pattern", {0.3}},
                                   {"tol", 1e-9},
                                   {"rounds", 20}}})});

    specs.push_back({"oscillate-12",
                     "self-weight 1, cross-weight 2: the x team's belief in state 0 swaps "
                     "between 0.3 and 0.7 every round",
                     ab_builder(1, 2, 0.3, 20),
                     json::array({{{"kind", "sequence"},
                                   {"agent", 0},
                                   {"state_index", 0},
                                   {"pattern", {0.3, 0.7}},
                                   {"tol", 1e-9},
                                   {"rounds", 20}}})});

    specs.push_back({"converge-31",
                     "self-weight 3, cross-weight 1: the minority view dies out",
                     ab_builder(3, 1, 0.3, 20),
                     json::array({{{"kind", "eventually_below"},
                                   {"agent", 0},
                                   {"state_index", 0},
                                   {"threshold", 1e-6},
                                   {"by_round", 15}}})});

    specs.push_back({"evenodd-13",
                     "self-weight 1, cross-weight 3: even rounds converge to state 1, odd "
                     "rounds to state 0",
                     ab_builder(1, 3, 0.3, 20),
                     json::array({{{"kind", "even_odd_split"},
                                   {"agent", 0},
                                   {"state_index", 0},
                                   {"from_round", 6},
                                   {"tol", 1e-6}}})});

    specs.push_back(
        {"counterexample-1",
         "positive likelihood gap but unbounded normalized beliefs: the maximizer at 0 never "
         "collects more than 1/(1+1/alpha) of the x team's belief",
         {{"builder",
           {{"kind", "counterexample"}, {"variant", 1}, {"alpha", 0.5}, {"theta_max", 60}}},
          {"rounds", 8}},
         json::array({{{"kind", "consensus_point"}, {"value", 0.0}, {"tol", 1e-9}},
                      {{"kind", "bounded_above"},
                       {"agent", 0},
                       {"state_index", 0},
                       {"bound", 1.0 / 3.0},
                       {"slack", 1e-6},
                       {"round_lo", 1},
                       {"round_hi", 8}},
                      {{"kind", "hypothesis"}, {"name", "positive_gap"}, {"expect_pass", true}},
                      {{"kind", "hypothesis"}, {"name", "bounded_g"}, {"expect_pass", false}}})});

    specs.push_back(
        {"counterexample-2",
         "bounded normalized beliefs but a vanishing likelihood gap; the gap hypothesis check "
         "must flag the failure",
         {{"builder",
           {{"kind", "counterexample"}, {"variant", 2}, {"alpha", 0.5}, {"theta_max", 60}}},
          {"rounds", 8}},
         json::array(
             {{{"kind", "hypothesis"}, {"name", "positive_gap"}, {"expect_pass", false}},
              {{"kind", "hypothesis"}, {"name", "bounded_g"}, {"expect_pass", true}},
              {{"kind", "bounded_above"},
               {"agent", 0},
               {"state_index", 0},
               {"bound", 2.0 / 3.0},
               {"slack", 1e-6},
               {"round_lo", 1},
               {"round_hi", 8}}})});

    struct Row {
        const char* name;
        double p;
        bool split;
        double p1, p2;
        const char* region;
        int fail;  // 0 = feasible
    };
    const Row rows[] = {
        {"feasibility-row-1", 3, false, 2, 2, "P\\F1", 1},
        {"feasibility-row-2", 3, true, 2, 2, "IP\\F1", 1},
        {"feasibility-row-3", 9, false, 8, 8, "(F2 & P)\\(F3 & P)", 3},
        {"feasibility-row-4", 9, true, 8, 8, "(F2 & IP)\\(F3 & IP)", 3},
        {"feasibility-row-5", 3, false, 2, 4, "(F & P)\\U", 0},
        {"feasibility-row-6", 0, false, 2, 2, "F & IP", 0},
    };
    for (const Row& r : rows) {
        json expected = {{"kind", "feasibility"}, {"region", r.region}};
        if (r.fail > 0) expected["first_infeasible_round"] = r.fail;
        specs.push_back({r.name,
                         "two-agent power-law prior/belief family, expected class " +
                             std::string(r.region),
                         power_law_config(r.p, r.split, r.p1, r.p2),
                         json::array({expected})});
    }

    specs.push_back(
        {"clustered-seeding-51",
         "three adjacent seeds on a 51-cycle: equal thirds here, middle seed blocked to near "
         "zero under informed averaging",
         {{"seeding",
           {{"graph", {{"family", "cycle"}, {"n", 51}, {"undirected", true}}},
            {"seeds", {24, 25, 26}},
            {"rounds", 100000}}}},
         json::array({{{"kind", "seeding"},
                       {"model", "naive_bayes"},
                       {"weights", {1.0 / 3.0, 1.0 / 3.0, 1.0 / 3.0}},
                       {"tol", 1e-6}},
                      {{"kind", "seeding"},
                       {"model", "bbcm"},
                       {"middle_max", 0.05},
                       {"outer_min", 0.45}}})});

    specs.push_back(
        {"clustered-seeding-compare",
         "the blocked middle seed loses more influence as the cycle grows",
         {{"seeding_compare", {{"n_small", 9}, {"n_large", 51}, {"rounds", 100000}}}},
         json::array({{{"kind", "bbcm_middle_compare"}}})});

    return specs;
}

const ScenarioSpec& find_scenario(const std::vector<ScenarioSpec>& specs,
                                  const std::string& name) {
    for (const auto& s : specs)
        if (s.name == name) return s;
    throw ConfigError("unknown scenario '" + name + "'");
}

namespace {

std::string fmt(double v) {
    std::ostringstream os;
    os.precision(12);
    os << v;
    return os.str();
}

double traj_mass(const Trajectory& traj, int round, int agent, int state_index) {
    const auto& b = traj.rounds[round][agent];
    double lf = b.logf[state_index];
    if (lf == -std::numeric_limits<double>::infinity()) return 0.0;
    return traj.space.weight(state_index) * std::exp(lf);
}

struct SeedingRun {
    DirectedGraph graph;
    std::vector<int> seeds;
    int rounds;
};

SeedingRun seeding_from_config(const json& cfg) {
    const json& s = cfg.at("seeding");
    SeedingRun run{graph_from_json(s.at("graph")), s.at("seeds").get<std::vector<int>>(),
                   s.value("rounds", 100000)};
    return run;
}

AssertionResult check_one(const json& a, const json& config, const Scenario* scenario,
                          const Trajectory* traj, const ConsensusReport* report) {
    AssertionResult res;
    std::string kind = a.at("kind").get<std::string>();
    res.description = kind;

    if (kind == "consensus_point") {
        double want = a.at("value").get<double>();
        double tol = a.value("tol", 1e-9);
        res.description = "consensus point = " + fmt(want);
        if (!report->predicted_point) {
            res.passed = false;
            res.detail = "maximizer is not unique (" +
                         std::to_string(report->maximizer_indices.size()) + " points)";
        } else {
            double got = *report->predicted_point;
            res.passed = std::abs(got - want) <= tol;
            res.detail = "predicted " + fmt(got);
        }
        return res;
    }
    if (kind == "mass_at" || kind == "mass_near") {
        double value = a.at("state_value").get<double>();
        double min_mass = a.at("min_mass").get<double>();
        int by_round = a.at("by_round").get<int>();
        int cells = kind == "mass_near" ? a.at("cells").get<int>() : 0;
        int center = traj->space.nearest_index(value);
        res.description = "every agent's mass within " + std::to_string(cells) +
                          " cells of " + fmt(value) + " reaches " + fmt(min_mass) + " by round " +
                          std::to_string(by_round);
        int rounds = traj->completed_rounds();
        for (int t = 0; t <= std::min(by_round, rounds); ++t) {
            double worst = 1.0;
            for (std::size_t i = 0; i < traj->rounds[t].size(); ++i) {
                double m = 0.0;
                for (int k = std::max(0, center - cells);
                     k <= std::min(traj->space.size() - 1, center + cells); ++k)
                    m += traj_mass(*traj, t, static_cast<int>(i), k);
                worst = std::min(worst, m);
            }
            if (worst >= min_mass) {
                res.passed = true;
                res.detail = "reached at round " + std::to_string(t) + " (min over agents " +
                             fmt(worst) + ")";
                return res;
            }
        }
        res.passed = false;
        res.detail = "not reached by round " + std::to_string(std::min(by_round, rounds));
        return res;
    }
    if (kind == "sequence") {
        int agent = a.at("agent").get<int>();
        int idx = a.at("state_index").get<int>();
        auto pattern = a.at("pattern").get<std::vector<double>>();
        double tol = a.at("tol").get<double>();
        int rounds = std::min(a.at("rounds").get<int>(), traj->completed_rounds());
        res.description = "agent " + std::to_string(agent) + " state " + std::to_string(idx) +
                          " follows the pattern for " + std::to_string(rounds) + " rounds";
        for (int t = 0; t <= rounds; ++t) {
            double want = pattern[t % pattern.size()];
            double got = traj_mass(*traj, t, agent, idx);
            if (std::abs(got - want) > tol) {
                res.passed = false;
                res.detail = "round " + std::to_string(t) + ": " + fmt(got) + " vs " + fmt(want);
                return res;
            }
        }
        res.passed = true;
        res.detail = "matched within " + fmt(tol);
        return res;
    }
    if (kind == "eventually_below") {
        int agent = a.at("agent").get<int>();
        int idx = a.at("state_index").get<int>();
        double threshold = a.at("threshold").get<double>();
        int by_round = std::min(a.at("by_round").get<int>(), traj->completed_rounds());
        double got = traj_mass(*traj, by_round, agent, idx);
        res.description = "agent " + std::to_string(agent) + " state " + std::to_string(idx) +
                          " <= " + fmt(threshold) + " at round " + std::to_string(by_round);
        res.passed = got <= threshold;
        res.detail = "value " + fmt(got);
        return res;
    }
    if (kind == "even_odd_split") {
        int agent = a.at("agent").get<int>();
        int idx = a.at("state_index").get<int>();
        int from = a.at("from_round").get<int>();
        double tol = a.at("tol").get<double>();
        res.description = "agent " + std::to_string(agent) + " state " + std::to_string(idx) +
                          " near 0 on even rounds and 1 on odd rounds from round " +
                          std::to_string(from);
        for (int t = from; t <= traj->completed_rounds(); ++t) {
            double got = traj_mass(*traj, t, agent, idx);
            bool ok = (t % 2 == 0) ? got <= tol : got >= 1.0 - tol;
            if (!ok) {
                res.passed = false;
                res.detail = "round " + std::to_string(t) + ": " + fmt(got);
                return res;
            }
        }
        res.passed = true;
        res.detail = "split holds";
        return res;
    }
    if (kind == "bounded_above") {
        int agent = a.at("agent").get<int>();
        int idx = a.at("state_index").get<int>();
        double bound = a.at("bound").get<double>();
        double slack = a.value("slack", 0.0);
        int lo = a.at("round_lo").get<int>();
        int hi = std::min(a.at("round_hi").get<int>(), traj->completed_rounds());
        res.description = "agent " + std::to_string(agent) + " state " + std::to_string(idx) +
                          " stays <= " + fmt(bound) + " for rounds " + std::to_string(lo) + ".." +
                          std::to_string(hi);
        double worst = 0.0;
        for (int t = lo; t <= hi; ++t) worst = std::max(worst, traj_mass(*traj, t, agent, idx));
        res.passed = worst <= bound + slack;
        res.detail = "max over rounds " + fmt(worst);
        return res;
    }
    if (kind == "hypothesis") {
        std::string name = a.at("name").get<std::string>();
        bool expect = a.at("expect_pass").get<bool>();
        res.description = "hypothesis check '" + name + "' expected to " +
                          (expect ? "pass" : "fail");
        for (const auto& c : report->conditions) {
            if (c.name == name) {
                res.passed = c.passed == expect;
                res.detail = c.detail;
                return res;
            }
        }
        res.passed = false;
        res.detail = "no such hypothesis check";
        return res;
    }
    if (kind == "feasibility") {
        const json& pl = config.at("power_law");
        PowerLawSpec spec;
        spec.prior_exponent = pl.at("prior_exponent").get<double>();
        spec.prior_parity_split = pl.value("parity_split", false);
        auto exps = pl.at("belief_exponents").get<std::vector<double>>();
        spec.belief_exponent_1 = exps.at(0);
        spec.belief_exponent_2 = exps.at(1);
        auto cls = classify_power_law(spec);
        std::string want_region = a.at("region").get<std::string>();
        res.description = "feasibility class = " + want_region;
        res.passed = region_name(cls) == want_region;
        if (a.contains("first_infeasible_round")) {
            int want_round = a.at("first_infeasible_round").get<int>();
            res.passed = res.passed && cls.first_infeasible_round &&
                         *cls.first_infeasible_round == want_round;
        } else {
            res.passed = res.passed && !cls.first_infeasible_round;
        }
        res.detail = "classified " + region_name(cls) +
                     (cls.first_infeasible_round
                          ? ", first infeasible round " + std::to_string(*cls.first_infeasible_round)
                          : ", feasible");
        return res;
    }
    if (kind == "seeding") {
        auto run = seeding_from_config(config);
        std::string model = a.at("model").get<std::string>();
        auto weights = extract_seeding_weights(
            model == "bbcm" ? SeedingModel::Bbcm : SeedingModel::NaiveBayes, run.graph,
            run.seeds, nullptr, run.rounds);
        std::string got = "weights";
        for (double w : weights.weights) got += " " + fmt(w);
        res.detail = got;
        if (a.contains("weights")) {
            auto want = a.at("weights").get<std::vector<double>>();
            double tol = a.value("tol", 1e-6);
            res.description = model + " seeding weights within " + fmt(tol) + " of target";
            res.passed = want.size() == weights.weights.size();
            for (std::size_t i = 0; res.passed && i < want.size(); ++i)
                res.passed = std::abs(want[i] - weights.weights[i]) <= tol;
        } else {
            double middle_max = a.at("middle_max").get<double>();
            double outer_min = a.at("outer_min").get<double>();
            res.description = model + " middle weight <= " + fmt(middle_max) +
                              ", outer weights >= " + fmt(outer_min);
            res.passed = weights.weights.size() == 3 && weights.weights[1] <= middle_max &&
                         weights.weights[0] >= outer_min && weights.weights[2] >= outer_min;
        }
        return res;
    }
    if (kind == "bbcm_middle_compare") {
        const json& sc = config.at("seeding_compare");
        int n_small = sc.at("n_small").get<int>();
        int n_large = sc.at("n_large").get<int>();
        int rounds = sc.value("rounds", 100000);
        res.description = "blocked middle weight shrinks from n=" + std::to_string(n_small) +
                          " to n=" + std::to_string(n_large);
        auto middle = [&](int n) {
            auto g = cycle_graph(n, true);
            std::vector<int> seeds = {n / 2 - 1, n / 2, n / 2 + 1};
            return extract_seeding_weights(SeedingModel::Bbcm, g, seeds, nullptr, rounds)
                .weights[1];
        };
        double small = middle(n_small), large = middle(n_large);
        res.passed = large < small;
        res.detail = "middle weights " + fmt(small) + " -> " + fmt(large);
        return res;
    }
    (void)scenario;
    res.passed = false;
    res.detail = "unknown assertion kind '" + kind + "'";
    return res;
}

}  // namespace

ExperimentResult run_experiment(const ScenarioSpec& spec) {
    ExperimentResult out;

    bool needs_scenario = spec.config.contains("graph") || spec.config.contains("builder");
    std::optional<Scenario> scenario;
    std::optional<Trajectory> traj;
    std::optional<ConsensusReport> report;
    if (needs_scenario) {
        scenario.emplace(scenario_from_json(spec.config));
        traj = simulate(scenario->ic, scenario->rounds);
        auto cent = perron(scenario->ic.graph());
        auto l = weighted_likelihood(scenario->ic, cent);
        report = predict_consensus(l, scenario->ic);
    }

    for (const auto& a : spec.expected) {
        try {
            out.assertions.push_back(check_one(a, spec.config,
                                               scenario ? &*scenario : nullptr,
                                               traj ? &*traj : nullptr,
                                               report ? &*report : nullptr));
        } catch (const std::exception& e) {
            out.assertions.push_back({a.value("kind", "?"), false,
                                      std::string("error: ") + e.what()});
        }
    }
    return out;
}

}  // namespace beliefdyn

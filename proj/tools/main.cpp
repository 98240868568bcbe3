#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

#include <CLI11.hpp>

#include "beliefdyn/experiments.hpp"
#include "beliefdyn/likelihood.hpp"
#include "beliefdyn/scenarios.hpp"
#include "beliefdyn/serialize.hpp"

namespace {

using namespace beliefdyn;

constexpr int kExitDegenerate = 2;
constexpr int kExitTailMass = 3;
constexpr int kExitUsage = 64;
constexpr int kExitIo = 74;

struct Options {
    std::string input;
    std::string out_dir;
    std::string format = "csv";
    int rounds = -1;  // -1 = take the config value
    std::uint64_t seed = 0;
    double tol = 1e-12;
    bool strict = false;
};

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::ios_base::failure("cannot open '" + path + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    if (!in.good() && !in.eof()) throw std::ios_base::failure("cannot read '" + path + "'");
    return ss.str();
}

void write_file(const std::string& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::ios_base::failure("cannot open '" + path + "' for writing");
    out << content;
    if (!out.good()) throw std::ios_base::failure("cannot write '" + path + "'");
}

json parse_config(const std::string& text) {
    json j = json::parse(text, nullptr, false);
    if (j.is_discarded()) throw ConfigError("input is not valid JSON");
    return j;
}

int cmd_simulate(const Options& opt) {
    std::string text;
    try {
        text = read_file(opt.input);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitIo;
    }

    Scenario scenario = [&] {
        json config = parse_config(text);
        Scenario s = scenario_from_json(config);
        if (opt.rounds >= 0) s.rounds = opt.rounds;
        return s;
    }();

    Trajectory traj = simulate(scenario.ic, scenario.rounds);
    std::uint64_t hash = fnv1a_hash(text);

    try {
        std::filesystem::create_directories(opt.out_dir.empty() ? "." : opt.out_dir);
        std::filesystem::path dir(opt.out_dir.empty() ? "." : opt.out_dir);
        if (opt.format == "json") {
            write_file((dir / "trajectory.json").string(),
                       trajectory_to_json(traj, hash, opt.seed).dump(2) + "\n");
        } else {
            std::ostringstream csv;
            write_trajectory_csv(csv, traj, hash, opt.seed);
            write_file((dir / "trajectory.csv").string(), csv.str());
        }
        write_file((dir / "diagnostics.json").string(),
                   diagnostics_to_json(traj, hash, opt.seed).dump(2) + "\n");
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitIo;
    }

    int last = traj.completed_rounds();
    double min_mass = 1.0;
    for (double m : traj.diagnostics.back().mass_at_argmax) min_mass = std::min(min_mass, m);
    std::cout << "simulate: " << scenario.ic.agents() << " agents, " << last
              << " completed rounds, likelihood argmax at state "
              << traj.space.value(traj.likelihood_argmax_index)
              << ", min final mass there " << min_mass << "\n";

    if (traj.degenerate_round) {
        std::cerr << "error: degenerate update at round " << *traj.degenerate_round
                  << " (partial trajectory written)\n";
        return kExitDegenerate;
    }
    if (traj.tail_mass_warning) {
        std::cerr << "warning: truncation-boundary mass exceeded 1e-6; widen the space\n";
        if (opt.strict) return kExitTailMass;
    }
    return 0;
}

void print_report(const ConsensusReport& rep) {
    std::cout << "maximizers:";
    for (double v : rep.maximizer_values) std::cout << ' ' << v;
    std::cout << "\nlog gap: " << rep.log_gap << "\n";
    if (rep.predicted_point)
        std::cout << "predicted point: " << *rep.predicted_point << "\n";
    else
        std::cout << "predicted point: none (maximizer not unique)\n";
    std::cout << "hypothesis checks:\n";
    for (const auto& c : rep.conditions)
        std::cout << "  [" << (c.passed ? "PASS" : "FAIL") << "] " << c.name << ": " << c.detail
                  << "\n";
}

int cmd_predict(const Options& opt) {
    std::string text;
    try {
        text = read_file(opt.input);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitIo;
    }
    json config = parse_config(text);
    Scenario scenario = scenario_from_json(config);

    auto cent = perron(scenario.ic.graph(), opt.tol);
    auto l = weighted_likelihood(scenario.ic, cent);
    auto rep = predict_consensus(l, scenario.ic);

    json out = consensus_report_to_json(rep);
    out["config_hash"] = fnv1a_hash(text);
    out["seed"] = opt.seed;
    out["centrality"] = cent.v;
    out["spectral_radius"] = cent.r;

    // Analytic consensus for all-parametric scenarios.
    if (config.contains("beliefs") && config.at("beliefs").is_array() &&
        !config.at("beliefs").empty()) {
        const json& bj = config.at("beliefs");
        auto all_family = [&](const char* fam) {
            for (const auto& b : bj)
                if (b.value("family", "") != fam) return false;
            return true;
        };
        if (all_family("gaussian")) {
            std::vector<double> mu, tau;
            for (const auto& b : bj) {
                mu.push_back(b.at("params").at("mu").get<double>());
                tau.push_back(b.at("params").at("tau").get<double>());
            }
            auto gc = gaussian_consensus(mu, tau, cent.v);
            out["gaussian_analytics"] = gaussian_consensus_to_json(gc);
        } else if (all_family("poisson")) {
            std::vector<double> lambda;
            for (const auto& b : bj) lambda.push_back(b.at("params").at("lambda").get<double>());
            auto pc = poisson_consensus(lambda, cent.v);
            out["poisson_analytics"] = {{"rate", pc.rate},
                                        {"points", pc.points},
                                        {"additive_mean", pc.additive_mean}};
        } else if (all_family("bernoulli")) {
            std::vector<double> x;
            for (const auto& b : bj) x.push_back(b.at("params").at("x").get<double>());
            auto bc = binary_consensus(x, cent.v);
            out["binary_analytics"] = {
                {"verdict", bc.verdict == BinaryVerdict::Tie
                                ? "tie"
                                : (bc.verdict == BinaryVerdict::StateOne ? "1" : "0")},
                {"tally", bc.tally}};
        }
    }

    if (opt.format == "json") {
        std::cout << out.dump(2) << "\n";
    } else {
        print_report(rep);
        if (out.contains("poisson_analytics"))
            std::cout << "consensus rate: " << out["poisson_analytics"]["rate"]
                      << " (additive contrast " << out["poisson_analytics"]["additive_mean"]
                      << ")\n";
        if (out.contains("gaussian_analytics"))
            std::cout << "analytic consensus point: "
                      << out["gaussian_analytics"]["theta_max"] << ", variance "
                      << out["gaussian_analytics"]["variance"] << "\n";
        if (out.contains("binary_analytics"))
            std::cout << "vote verdict: " << out["binary_analytics"]["verdict"] << " (tally "
                      << out["binary_analytics"]["tally"] << ")\n";
    }
    if (!opt.out_dir.empty()) {
        try {
            std::filesystem::create_directories(opt.out_dir);
            write_file((std::filesystem::path(opt.out_dir) / "report.json").string(),
                       out.dump(2) + "\n");
        } catch (const std::exception& e) {
            std::cerr << "error: " << e.what() << "\n";
            return kExitIo;
        }
    }
    return 0;
}

int cmd_experiment(const std::string& name, bool run_all) {
    auto specs = catalog();
    std::vector<const ScenarioSpec*> to_run;
    if (run_all) {
        for (const auto& s : specs) to_run.push_back(&s);
    } else {
        to_run.push_back(&find_scenario(specs, name));
    }
    bool ok = true;
    for (const auto* spec : to_run) {
        std::cout << "== " << spec->name << " ==\n";
        auto result = run_experiment(*spec);
        for (const auto& a : result.assertions) {
            std::cout << "  [" << (a.passed ? "PASS" : "FAIL") << "] " << a.description << " ("
                      << a.detail << ")\n";
            ok = ok && a.passed;
        }
    }
    return ok ? 0 : 1;
}

int cmd_catalog_list(const std::string& format) {
    auto specs = catalog();
    if (format == "json") {
        json out = json::array();
        for (const auto& s : specs)
            out.push_back({{"name", s.name},
                           {"summary", s.summary},
                           {"config", s.config},
                           {"expected", s.expected}});
        std::cout << out.dump(2) << "\n";
    } else {
        for (const auto& s : specs) std::cout << s.name << ": " << s.summary << "\n";
    }
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"naive Bayesian belief dynamics on directed social networks"};
    app.require_subcommand(1);
    Options opt;

    auto add_common = [&](CLI::App* sub) {
        sub->add_option("--out", opt.out_dir, "output directory");
        sub->add_option("--seed", opt.seed, "seed recorded in all outputs");
        sub->add_option("--format", opt.format, "output format")
            ->check(CLI::IsMember({"csv", "json"}));
        sub->add_option("--tol", opt.tol, "spectral tolerance for the centrality computation");
        sub->add_flag("--strict", opt.strict, "treat tail-mass warnings as errors (exit 3)");
    };

    auto* sim = app.add_subcommand("simulate", "run the belief dynamics from a scenario config");
    sim->add_option("config", opt.input, "scenario JSON path")->required();
    sim->add_option("--rounds", opt.rounds, "override the config round count");
    add_common(sim);

    auto* pred = app.add_subcommand("predict", "consensus prediction for a scenario");
    pred->add_option("config", opt.input, "scenario JSON path")->required();
    add_common(pred);

    std::string name;
    bool run_all = false;
    auto* exp = app.add_subcommand("experiment", "run a catalog scenario and check its outcome");
    exp->add_option("name", name, "catalog entry name");
    exp->add_flag("--all", run_all, "run every catalog entry");

    auto* cat = app.add_subcommand("catalog-list", "list the scenario catalog");
    cat->add_option("--format", opt.format, "text or json");

    CLI11_PARSE(app, argc, argv);

    try {
        if (sim->parsed()) {
            if (opt.out_dir.empty()) opt.out_dir = ".";
            return cmd_simulate(opt);
        }
        if (pred->parsed()) return cmd_predict(opt);
        if (exp->parsed()) {
            if (!run_all && name.empty()) {
                std::cerr << "error: give a scenario name or --all\n";
                return kExitUsage;
            }
            return cmd_experiment(name, run_all);
        }
        if (cat->parsed()) return cmd_catalog_list(opt.format);
    } catch (const ConfigError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const nlohmann::json::exception& e) {
        std::cerr << "error: malformed config: " << e.what() << "\n";
        return kExitUsage;
    } catch (const DegenerateUpdate& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitDegenerate;
    } catch (const std::ios_base::failure& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitIo;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}

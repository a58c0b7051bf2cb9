#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "anysyn/anytime.hpp"
#include "anysyn/parse.hpp"
#include "anysyn/policy.hpp"
#include "anysyn/scc.hpp"
#include "anysyn/util.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitInternal = 1;
constexpr int kExitParse = 2;
constexpr int kExitValidation = 3;

struct ModelArgs {
    std::string plant_path;
    std::vector<std::string> agent_paths;
    std::string dfa_path;
};

void add_model_options(CLI::App* cmd, ModelArgs& args) {
    cmd->add_option("--plant", args.plant_path, "plant component file (dfts or mdp)")
        ->required();
    cmd->add_option("--agent", args.agent_paths, "environment agent file (mc); repeatable");
    cmd->add_option("--dfa", args.dfa_path, "specification automaton file")->required();
}

struct LoadedModels {
    anysyn::Plant plant;
    std::vector<anysyn::Mc> agents;
    anysyn::Dfa dfa;
};

LoadedModels load_models(const ModelArgs& args) {
    LoadedModels out{anysyn::Dfts{}, {}, {}};
    anysyn::Component plant = anysyn::load_component(args.plant_path);
    if (std::holds_alternative<anysyn::Mc>(plant)) {
        throw anysyn::ValidationError(args.plant_path + ": the plant must be a dfts or mdp");
    }
    if (std::holds_alternative<anysyn::Dfts>(plant)) {
        out.plant = std::get<anysyn::Dfts>(std::move(plant));
    } else {
        out.plant = std::get<anysyn::Mdp>(std::move(plant));
    }
    for (const std::string& path : args.agent_paths) {
        anysyn::Component agent = anysyn::load_component(path);
        if (!std::holds_alternative<anysyn::Mc>(agent)) {
            throw anysyn::ValidationError(path + ": agents must be markov chains (kind mc)");
        }
        out.agents.push_back(std::get<anysyn::Mc>(std::move(agent)));
    }
    out.dfa = anysyn::load_dfa(args.dfa_path);
    return out;
}

void write_file(const std::string& path, const std::string& content) {
    std::ofstream f(path, std::ios::binary);
    if (!f) throw anysyn::ValidationError(path + ": cannot open for writing");
    f << content;
    if (!f) throw anysyn::ValidationError(path + ": write failed");
}

void print_probability(double p) {
    std::printf("probability=%s\n", anysyn::format_fixed(p, 6).c_str());
}

int run_synth(const ModelArgs& args, const std::string& method, double epsilon,
              const std::string& out_path, bool strict) {
    LoadedModels in = load_models(args);
    anysyn::SolverConfig solver;
    solver.epsilon = epsilon;

    anysyn::BuildOptions build;
    build.strict = strict;
    build.warnings = &std::cerr;

    anysyn::ComposedSystem system = anysyn::compose_system(in.plant, in.agents);
    anysyn::ProductMdp product = anysyn::build_product(std::move(system), in.dfa, build);
    const std::vector<int> targets = anysyn::accepting_states(product);

    anysyn::ProbVector x;
    if (method == "vi") {
        x = anysyn::value_iteration(product, targets, solver);
    } else {
        anysyn::SccSet sccs =
            anysyn::tarjan_sccs(product.size(), anysyn::product_adjacency(product));
        x = anysyn::block_value_iteration(product, sccs, targets, solver);
    }
    if (!x.converged) {
        std::cerr << "warning: value iteration hit the iteration cap before converging\n";
    }

    anysyn::Policy policy = anysyn::extract_policy(product, x, solver);
    write_file(out_path, anysyn::render_policy(policy));
    print_probability(anysyn::initial_value(product.iota(), x));
    return kExitOk;
}

int run_anytime_cmd(const ModelArgs& args, const std::string& select, double epsilon,
                    std::optional<double> budget_seconds, std::optional<long> budget_states,
                    const std::string& out_dir, std::string metrics_path, bool no_eval,
                    bool strict) {
    LoadedModels in = load_models(args);

    anysyn::AnytimeConfig cfg;
    cfg.solver.epsilon = epsilon;
    cfg.budget_seconds = budget_seconds;
    cfg.budget_states = budget_states;
    cfg.selection = select == "given" ? anysyn::SelectionStrategy::GivenOrder
                                      : anysyn::SelectionStrategy::MinProbability;
    cfg.evaluate_full = !no_eval;
    cfg.build.strict = strict;
    cfg.build.warnings = &std::cerr;

    anysyn::AnytimeResult result = anysyn::run_anytime(in.plant, in.agents, in.dfa, cfg);

    std::filesystem::create_directories(out_dir);
    for (size_t k = 0; k < result.policies.size(); ++k) {
        const std::string path = out_dir + "/policy_k" + std::to_string(k) + ".tsv";
        write_file(path, anysyn::render_policy(result.policies[k]));
    }
    if (metrics_path.empty()) metrics_path = out_dir + "/metrics.csv";
    write_file(metrics_path, anysyn::metrics_csv(result.reports));

    std::printf("%s\n", anysyn::metrics_csv_row(result.reports.back()).c_str());
    return kExitOk;
}

int run_eval(const ModelArgs& args, const std::string& policy_path, double epsilon) {
    LoadedModels in = load_models(args);
    anysyn::Policy policy = anysyn::load_policy(policy_path);
    anysyn::SolverConfig solver;
    solver.epsilon = epsilon;
    print_probability(anysyn::lift_and_evaluate(policy, in.plant, in.agents, in.dfa, solver));
    return kExitOk;
}

int run_simulate(const ModelArgs& args, const std::string& policy_path, long runs, long horizon,
                 std::uint64_t seed) {
    LoadedModels in = load_models(args);
    anysyn::Policy policy = anysyn::load_policy(policy_path);
    anysyn::Mc chain = anysyn::lift_policy(policy, in.plant, in.agents, in.dfa);
    if (horizon <= 0) horizon = 10 * static_cast<long>(chain.states.size());
    anysyn::SimulationResult r =
        anysyn::simulate(chain, anysyn::accepting_marker(), runs, horizon, seed);
    std::printf("estimate=%s stderr=%s runs=%ld\n", anysyn::format_fixed(r.estimate, 6).c_str(),
                anysyn::format_fixed(r.std_error, 6).c_str(), r.runs);
    return kExitOk;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Control policy synthesis against Markov-chain environment agents"};
    app.require_subcommand(1);

    ModelArgs synth_args;
    std::string synth_method = "vi";
    double synth_epsilon = 1e-6;
    std::string synth_out = "policy.tsv";
    bool synth_strict = false;
    CLI::App* synth = app.add_subcommand(
        "synth", "Synthesize an optimal policy for the complete system");
    add_model_options(synth, synth_args);
    synth->add_option("--method", synth_method, "probability solver (vi | scc)")
        ->check(CLI::IsMember({"vi", "scc"}));
    synth->add_option("--epsilon", synth_epsilon, "value-iteration convergence threshold")
        ->check(CLI::PositiveNumber);
    synth->add_option("--out", synth_out, "policy output path (default policy.tsv)");
    synth->add_flag("--strict", synth_strict, "fail on propositions unknown to the model");

    ModelArgs any_args;
    std::string any_select = "min-prob";
    double any_epsilon = 1e-6;
    std::optional<double> any_budget_seconds;
    std::optional<long> any_budget_states;
    std::string any_out_dir = ".";
    std::string any_metrics;
    bool any_no_eval = false;
    bool any_strict = false;
    CLI::App* anytime = app.add_subcommand(
        "anytime", "Incremental synthesis, refining one agent per iteration");
    add_model_options(anytime, any_args);
    anytime->add_option("--select", any_select, "agent selection strategy (min-prob | given)")
        ->check(CLI::IsMember({"min-prob", "given"}));
    anytime->add_option("--epsilon", any_epsilon, "value-iteration convergence threshold")
        ->check(CLI::PositiveNumber);
    anytime->add_option("--budget-seconds", any_budget_seconds, "stop once synthesis time exceeds this");
    anytime->add_option("--budget-states", any_budget_states, "cap on the product state count");
    anytime->add_option("--out-dir", any_out_dir, "directory for policy_k<k>.tsv files");
    anytime->add_option("--metrics", any_metrics, "metrics CSV path (default <out-dir>/metrics.csv)");
    anytime->add_flag("--no-eval", any_no_eval, "skip evaluating policies on the complete system");
    anytime->add_flag("--strict", any_strict, "fail on propositions unknown to the model");

    ModelArgs eval_args;
    std::string eval_policy;
    double eval_epsilon = 1e-6;
    CLI::App* eval = app.add_subcommand(
        "eval", "Evaluate a policy file against the complete system");
    add_model_options(eval, eval_args);
    eval->add_option("--policy", eval_policy, "policy file to evaluate")->required();
    eval->add_option("--epsilon", eval_epsilon, "reachability convergence threshold")
        ->check(CLI::PositiveNumber);

    ModelArgs sim_args;
    std::string sim_policy;
    long sim_runs = 100000;
    long sim_horizon = 0;
    std::uint64_t sim_seed = 0;
    CLI::App* simulate = app.add_subcommand(
        "simulate", "Monte Carlo estimate of a policy's success probability");
    add_model_options(simulate, sim_args);
    simulate->add_option("--policy", sim_policy, "policy file to simulate")->required();
    simulate->add_option("--runs", sim_runs, "number of trajectories (default 100000)")
        ->check(CLI::PositiveNumber);
    simulate->add_option("--horizon", sim_horizon,
                         "steps per trajectory (default 10x the product size)");
    simulate->add_option("--seed", sim_seed, "base seed; runs derive per-run seeds from it");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        if (e.get_exit_code() == 0) return app.exit(e); // --help
        app.exit(e);
        return kExitParse;
    }

    try {
        if (synth->parsed()) {
            return run_synth(synth_args, synth_method, synth_epsilon, synth_out, synth_strict);
        }
        if (anytime->parsed()) {
            return run_anytime_cmd(any_args, any_select, any_epsilon, any_budget_seconds,
                                   any_budget_states, any_out_dir, any_metrics, any_no_eval,
                                   any_strict);
        }
        if (eval->parsed()) return run_eval(eval_args, eval_policy, eval_epsilon);
        if (simulate->parsed()) return run_simulate(sim_args, sim_policy, sim_runs, sim_horizon, sim_seed);
    } catch (const anysyn::ParseError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitParse;
    } catch (const anysyn::ValidationError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitValidation;
    } catch (const std::exception& e) {
        std::cerr << "internal error: " << e.what() << "\n";
        return kExitInternal;
    }
    return kExitInternal;
}

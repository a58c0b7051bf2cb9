#include "anysyn/anytime.hpp"

#include <algorithm>
#include <chrono>
#include <numeric>
#include <ostream>
#include <set>

#include "anysyn/util.hpp"

namespace anysyn {

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
    return std::chrono::duration<double>(Clock::now() - start).count();
}

Mc strip_agent_props(Mc chain, int agent_ns) {
    for (PropSet& label : chain.labels) {
        label.erase(std::remove_if(label.begin(), label.end(),
                                   [&](const Prop& p) { return p.agent == agent_ns; }),
                    label.end());
    }
    return chain;
}

// The full-alphabet check: warn (or fail under strict) only against the union
// alphabet of the complete components, not the abstraction's shrunken one.
void check_alphabet_upfront(const Plant& plant, const std::vector<Mc>& agents, const Dfa& d,
                            const BuildOptions& opts) {
    PropSet alphabet = std::visit([](const auto& p) { return label_alphabet(p); }, plant);
    for (const Mc& a : agents) alphabet = set_union(alphabet, label_alphabet(a));
    PropSet support;
    for (const auto& edges : d.edges) {
        for (const DfaEdge& e : edges) e.guard.collect_support(support);
    }
    PropSet missing;
    std::set_difference(support.begin(), support.end(), alphabet.begin(), alphabet.end(),
                        std::back_inserter(missing));
    if (missing.empty()) return;
    if (opts.strict) {
        throw ValidationError("dfa references propositions absent from the model alphabet: " +
                              to_string(missing));
    }
    if (opts.warnings) {
        *opts.warnings << "warning: dfa propositions " << to_string(missing)
                       << " never appear in the model; they read as false\n";
    }
}

} // namespace

int select_next_agent(const Mc& induced_chain, const std::vector<Mc>& remaining, const Dfa& d,
                      const SolverConfig& cfg) {
    if (remaining.empty()) throw std::invalid_argument("select_next_agent: no agents left");
    if (remaining.size() == 1) return 0;

    std::vector<double> scores(remaining.size(), 0.0);
    parallel_for(static_cast<long>(remaining.size()), synth_threads(), [&](long i) {
        const Mc& candidate = remaining[i];
        // The chain still carries the candidate's pinned label; swap it for
        // the full model's labels before composing.
        Mc stripped = strip_agent_props(induced_chain, candidate.agent);
        Mc composed = compose_mc_pair(stripped, candidate);
        McProduct prod = mc_dfa_product(composed, d);
        ProbVector x = mc_reachability(prod.chain, prod.accepting, cfg);
        scores[i] = initial_value(prod.chain.initial, x);
    });

    int best = 0;
    for (size_t i = 1; i < scores.size(); ++i) {
        if (scores[i] < scores[best]) best = static_cast<int>(i);
    }
    return best;
}

AnytimeResult run_anytime(const Plant& plant, const std::vector<Mc>& agents, const Dfa& d,
                          const AnytimeConfig& cfg) {
    if (cfg.budget_seconds && *cfg.budget_seconds < 0) {
        throw std::invalid_argument("run_anytime: negative time budget");
    }
    if (cfg.budget_states && *cfg.budget_states < 0) {
        throw std::invalid_argument("run_anytime: negative state budget");
    }
    {
        std::set<std::string> names{std::visit([](const auto& p) { return p.name; }, plant)};
        for (const Mc& a : agents) {
            if (!names.insert(a.name).second) {
                throw ValidationError("duplicate component name '" + a.name + "'");
            }
        }
    }
    check_alphabet_upfront(plant, agents, d, cfg.build);

    const int n = static_cast<int>(agents.size());
    AnytimeResult result;
    double elapsed = 0.0; // cumulative synthesis time; evaluation not counted

    // Iteration 0: all agents stationary. SCCs of every full agent are
    // computed once here; later iterations only derive.
    IterationReport report;
    auto t0 = Clock::now();
    std::vector<Mc> stationary;
    stationary.reserve(agents.size());
    for (const Mc& a : agents) stationary.push_back(make_stationary(a));
    ComposedSystem abstract = compose_system(plant, stationary, std::vector<bool>(agents.size(), true));
    report.build_seconds = seconds_since(t0);

    t0 = Clock::now();
    std::vector<SccSet> agent_sccs;
    agent_sccs.reserve(agents.size());
    for (const Mc& a : agents) {
        agent_sccs.push_back(tarjan_sccs(static_cast<int>(a.states.size()), adjacency(a)));
    }
    SccSet system_sccs = tarjan_sccs(static_cast<int>(abstract.mdp.states.size()),
                                     adjacency(abstract.mdp));
    report.scc_seconds = seconds_since(t0);

    t0 = Clock::now();
    ProductMdp product = build_product(std::move(abstract), d);
    report.build_seconds += seconds_since(t0);

    t0 = Clock::now();
    SccSet partition = product_partition(system_sccs, product);
    report.scc_seconds += seconds_since(t0);

    std::vector<int> remaining(n);
    std::iota(remaining.begin(), remaining.end(), 0);

    Mc chain;
    int iteration = 0;
    while (true) {
        t0 = Clock::now();
        ProbVector x = block_value_iteration(product, partition, accepting_states(product),
                                             cfg.solver);
        report.solve_seconds = seconds_since(t0);

        t0 = Clock::now();
        Policy pol = extract_policy(product, x, cfg.solver);
        chain = induce_chain(product, pol);
        report.policy_seconds = seconds_since(t0);

        report.iteration = iteration;
        report.system_states = product.system_size();
        report.product_states = product.size();
        report.abstract_probability = initial_value(product.iota(), x);
        elapsed += report.build_seconds + report.scc_seconds + report.solve_seconds +
                   report.policy_seconds + report.select_seconds;
        report.elapsed_seconds = elapsed;
        if (cfg.evaluate_full) {
            report.full_probability = lift_and_evaluate(pol, plant, agents, d, cfg.solver);
        }
        result.policies.push_back(std::move(pol));
        result.reports.push_back(report);

        if (remaining.empty()) break;
        if (cfg.budget_seconds && elapsed > *cfg.budget_seconds) break;
        if (cfg.budget_states) {
            long min_size = agents[remaining[0]].states.size();
            for (int l : remaining) {
                min_size = std::min<long>(min_size, agents[l].states.size());
            }
            if (static_cast<long>(product.size()) * min_size > *cfg.budget_states) break;
        }

        report = IterationReport{};
        t0 = Clock::now();
        size_t pick_pos = 0;
        if (cfg.selection == SelectionStrategy::MinProbability) {
            std::vector<Mc> candidates;
            candidates.reserve(remaining.size());
            for (int l : remaining) candidates.push_back(agents[l]);
            pick_pos = static_cast<size_t>(select_next_agent(chain, candidates, d, cfg.solver));
        }
        const int pick = remaining[pick_pos];
        report.select_seconds = seconds_since(t0);

        if (cfg.budget_states &&
            static_cast<long>(product.size()) * static_cast<long>(agents[pick].states.size()) >
                *cfg.budget_states) {
            break;
        }

        t0 = Clock::now();
        const TupleSpace parent_space = product.system.space;
        product = refine_product(product, agents[pick], pick + 1);
        report.build_seconds = seconds_since(t0);

        t0 = Clock::now();
        system_sccs = derive_sccs(system_sccs, agent_sccs[pick], parent_space, pick + 1);
        partition = product_partition(system_sccs, product);
        report.scc_seconds = seconds_since(t0);

        report.agent_added = agents[pick].name;
        remaining.erase(remaining.begin() + pick_pos);
        ++iteration;
    }
    return result;
}

std::string metrics_csv_header() {
    return "iteration,agent_added,system_states,product_states,build_s,scc_s,solve_s,policy_s,"
           "select_s,abstract_prob,full_prob,elapsed_s";
}

std::string metrics_csv_row(const IterationReport& r) {
    std::string out = std::to_string(r.iteration) + "," + r.agent_added + "," +
                      std::to_string(r.system_states) + "," + std::to_string(r.product_states);
    out += "," + format_fixed(r.build_seconds, 4);
    out += "," + format_fixed(r.scc_seconds, 4);
    out += "," + format_fixed(r.solve_seconds, 4);
    out += "," + format_fixed(r.policy_seconds, 4);
    out += "," + format_fixed(r.select_seconds, 4);
    out += "," + format_fixed(r.abstract_probability, 6);
    out += ",";
    if (r.full_probability) out += format_fixed(*r.full_probability, 6);
    out += "," + format_fixed(r.elapsed_seconds, 4);
    return out;
}

std::string metrics_csv(const std::vector<IterationReport>& reports) {
    std::string out = metrics_csv_header() + "\n";
    for (const IterationReport& r : reports) out += metrics_csv_row(r) + "\n";
    return out;
}

} // namespace anysyn

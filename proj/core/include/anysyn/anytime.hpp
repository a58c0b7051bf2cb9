#ifndef ANYSYN_ANYTIME_HPP
#define ANYSYN_ANYTIME_HPP

#include <optional>
#include <string>
#include <vector>

#include "anysyn/policy.hpp"

namespace anysyn {

enum class SelectionStrategy { MinProbability, GivenOrder };

struct AnytimeConfig {
    std::optional<double> budget_seconds;
    std::optional<long> budget_states; // cap on the product state count
    SelectionStrategy selection = SelectionStrategy::MinProbability;
    SolverConfig solver;
    /// Evaluate every policy against the complete system. The evaluation is
    /// excluded from budget accounting.
    bool evaluate_full = true;
    /// Alphabet check applied once against the full components; the inner
    /// abstractions legitimately drop labels and stay silent.
    BuildOptions build;
};

struct IterationReport {
    int iteration = 0;
    std::string agent_added; // empty for iteration 0
    long system_states = 0;
    long product_states = 0;
    double build_seconds = 0.0;
    double scc_seconds = 0.0;
    double solve_seconds = 0.0;
    double policy_seconds = 0.0;
    double select_seconds = 0.0;
    double abstract_probability = 0.0;
    std::optional<double> full_probability;
    double elapsed_seconds = 0.0; // cumulative synthesis time, evaluation excluded
};

struct AnytimeResult {
    std::vector<Policy> policies;
    std::vector<IterationReport> reports;
};

/// Scores every remaining agent by composing it with the current policy's
/// induced chain and verifying the specification on the product; returns the
/// index (into `remaining`) of the minimum, ties broken by position.
int select_next_agent(const Mc& induced_chain, const std::vector<Mc>& remaining, const Dfa& d,
                      const SolverConfig& cfg = {});

/// The incremental synthesis loop: starts from the all-stationary
/// abstraction, then refines one agent per iteration (incremental product,
/// derived SCCs, block-ordered solve) until every agent is full or a budget
/// is exceeded. Iteration 0 always completes.
AnytimeResult run_anytime(const Plant& plant, const std::vector<Mc>& agents, const Dfa& d,
                          const AnytimeConfig& cfg = {});

std::string metrics_csv_header();
std::string metrics_csv_row(const IterationReport& r);
std::string metrics_csv(const std::vector<IterationReport>& reports);

} // namespace anysyn

#endif

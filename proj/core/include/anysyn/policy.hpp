#ifndef ANYSYN_POLICY_HPP
#define ANYSYN_POLICY_HPP

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "anysyn/solve.hpp"

namespace anysyn {

/// Memoryless control policy over the product it was synthesized on. The
/// roster records which agents the policy observes; abstracted agents are
/// pinned to a fixed state and contribute no observation.
struct Policy {
    std::vector<ComponentInfo> roster; // plant first, then agents in order
    TupleSpace space;                  // over the roster dimensions
    std::vector<std::string> dfa_states;
    std::vector<std::string> actions;
    std::vector<int> choice; // [product index] -> action index

    int dfa_size() const { return static_cast<int>(dfa_states.size()); }
    int size() const { return static_cast<int>(choice.size()); }
};

/// Greedy extraction from a converged probability vector: among the actions
/// achieving the state value (within 10 epsilon), pick the declaration-order
/// least one that moves a step closer to the accepting set.
Policy extract_policy(const ProductMdp& p, const ProbVector& x, const SolverConfig& cfg = {});

/// Reserved proposition marking accepting states on induced chains.
Prop accepting_marker();

/// The finite Markov chain induced by a memoryless policy on its product.
/// Accepting product states additionally carry the accepting marker.
Mc induce_chain(const ProductMdp& p, const Policy& pol);

/// Builds the full composition and product and induces the chain of the
/// policy applied to it: each product state is projected onto the policy's
/// observed components (abstracted agents project to their pinned state).
/// Accepting states carry the accepting marker.
Mc lift_policy(const Policy& pol, const Plant& plant, const std::vector<Mc>& agents, const Dfa& d);

/// Reachability of the accepting set in the lifted chain, weighted by the
/// initial distribution.
double lift_and_evaluate(const Policy& pol, const Plant& plant, const std::vector<Mc>& agents,
                         const Dfa& d, const SolverConfig& cfg = {});

struct SimulationResult {
    double estimate = 0.0;
    double std_error = 0.0;
    long runs = 0;
};

/// Monte Carlo estimate of the probability of hitting a marker-labeled state
/// within `horizon` steps. Deterministic for a fixed seed: run i draws from
/// its own generator seeded by mix(seed, i), so results do not depend on the
/// worker thread count.
SimulationResult simulate(const Mc& chain, const Prop& marker, long runs, long horizon,
                          std::uint64_t seed);

/// Policy file round-trip (TSV; one header line, one row per product state).
std::string render_policy(const Policy& pol);
Policy parse_policy(std::string_view text);
Policy load_policy(const std::string& path);

} // namespace anysyn

#endif

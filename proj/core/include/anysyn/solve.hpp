#ifndef ANYSYN_SOLVE_HPP
#define ANYSYN_SOLVE_HPP

#include <iosfwd>
#include <vector>

#include "anysyn/product.hpp"
#include "anysyn/scc.hpp"

namespace anysyn {

struct SolverConfig {
    double epsilon = 1e-6;
    int max_iterations = 100000;
};

/// Maximal reachability probabilities per state, plus convergence data.
struct ProbVector {
    std::vector<double> values;
    int iterations = 0;
    bool converged = false;
};

/// Plain value iteration for max reachability of `targets` (sorted product
/// state indices). Synchronous updates; stops when the max change drops
/// below epsilon. Non-convergence is reported through the flag.
ProbVector value_iteration(const ProductMdp& p, const std::vector<int>& targets,
                           const SolverConfig& cfg = {});

/// Block-ordered value iteration: processes `blocks` in their stored order,
/// iterating only within the active block and reading frozen values for
/// states outside it. `blocks` must partition the product space.
ProbVector block_value_iteration(const ProductMdp& p, const SccSet& blocks,
                                 const std::vector<int>& targets,
                                 const SolverConfig& cfg = {},
                                 std::ostream* trace = nullptr);

/// Reachability in a Markov chain (single implicit action).
ProbVector mc_reachability(const Mc& m, const std::vector<int>& targets,
                           const SolverConfig& cfg = {});

/// Expected value of x under a sparse initial distribution.
double initial_value(const SparseRow& iota, const ProbVector& x);

} // namespace anysyn

#endif

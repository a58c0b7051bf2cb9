#include "anysyn/solve.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>

#include "anysyn/errors.hpp"

namespace anysyn {

namespace {

std::vector<char> target_mask(int n, const std::vector<int>& targets) {
    std::vector<char> mask(n, 0);
    for (int t : targets) {
        if (t < 0 || t >= n) throw std::invalid_argument("target state out of range");
        mask[t] = 1;
    }
    return mask;
}

// One synchronous update of x over the given product states; returns the
// largest change. Target states stay at 1.
double product_sweep(const ProductMdp& p, const std::vector<char>& is_target,
                     const std::vector<int>& states, const std::vector<double>& x,
                     std::vector<double>& next) {
    const int nq = p.dfa_size();
    const int ns = p.system_size();
    const Mdp& m = p.system.mdp;
    double delta = 0.0;
    for (int sp : states) {
        double value;
        if (is_target[sp]) {
            value = 1.0;
        } else {
            const int s = sp / nq;
            const int q = sp % nq;
            const int* gate_row = p.gate.data() + static_cast<size_t>(q) * ns;
            value = 0.0;
            for (const SparseRow& row : m.rows[s]) {
                if (row.empty()) continue;
                double acc = 0.0;
                for (const auto& [t, pt] : row) acc += pt * x[t * nq + gate_row[t]];
                value = std::max(value, acc);
            }
            // Row sums carry rounding slack of a few ulp; probabilities stay
            // capped at one.
            value = std::min(value, 1.0);
        }
        next[sp] = value;
        delta = std::max(delta, std::abs(value - x[sp]));
    }
    return delta;
}

} // namespace

ProbVector value_iteration(const ProductMdp& p, const std::vector<int>& targets,
                           const SolverConfig& cfg) {
    const int n = p.size();
    const std::vector<char> is_target = target_mask(n, targets);

    ProbVector result;
    result.values.assign(n, 0.0);
    for (int t : targets) result.values[t] = 1.0;

    std::vector<int> states(n);
    for (int i = 0; i < n; ++i) states[i] = i;

    std::vector<double> next(n, 0.0);
    while (result.iterations < cfg.max_iterations) {
        double delta = product_sweep(p, is_target, states, result.values, next);
        result.values.swap(next);
        ++result.iterations;
        if (delta < cfg.epsilon) {
            result.converged = true;
            break;
        }
    }
    return result;
}

ProbVector block_value_iteration(const ProductMdp& p, const SccSet& blocks,
                                 const std::vector<int>& targets, const SolverConfig& cfg,
                                 std::ostream* trace) {
    const int n = p.size();
    if (blocks.state_count() != n) {
        throw ValidationError("block_value_iteration: partition does not cover the product space");
    }
    {
        std::vector<char> seen(n, 0);
        for (const auto& block : blocks.blocks) {
            for (int sp : block) {
                if (sp < 0 || sp >= n || seen[sp]) {
                    throw ValidationError(
                        "block_value_iteration: partition overlaps or leaves the space");
                }
                seen[sp] = 1;
            }
        }
        if (std::count(seen.begin(), seen.end(), 1) != n) {
            throw ValidationError("block_value_iteration: partition does not cover every state");
        }
    }

    const std::vector<char> is_target = target_mask(n, targets);

    ProbVector result;
    result.values.assign(n, 0.0);
    for (int t : targets) result.values[t] = 1.0;
    result.converged = true;

    std::vector<double> next = result.values;
    for (int b : blocks.order) {
        const std::vector<int>& states = blocks.blocks[b];
        int iters = 0;
        double delta = 0.0;
        bool block_converged = false;
        while (iters < cfg.max_iterations) {
            delta = product_sweep(p, is_target, states, result.values, next);
            for (int sp : states) result.values[sp] = next[sp];
            ++iters;
            if (delta < cfg.epsilon) {
                block_converged = true;
                break;
            }
        }
        result.iterations += iters;
        if (!block_converged) result.converged = false;
        if (trace) {
            *trace << "block " << b << " iters " << iters << " residual " << delta << "\n";
        }
    }
    return result;
}

ProbVector mc_reachability(const Mc& m, const std::vector<int>& targets, const SolverConfig& cfg) {
    const int n = static_cast<int>(m.states.size());
    const std::vector<char> is_target = target_mask(n, targets);

    ProbVector result;
    result.values.assign(n, 0.0);
    for (int t : targets) result.values[t] = 1.0;

    std::vector<double> next(n, 0.0);
    while (result.iterations < cfg.max_iterations) {
        double delta = 0.0;
        for (int s = 0; s < n; ++s) {
            double value;
            if (is_target[s]) {
                value = 1.0;
            } else {
                value = 0.0;
                for (const auto& [t, pt] : m.rows[s]) value += pt * result.values[t];
                value = std::min(value, 1.0);
            }
            next[s] = value;
            delta = std::max(delta, std::abs(value - result.values[s]));
        }
        result.values.swap(next);
        ++result.iterations;
        if (delta < cfg.epsilon) {
            result.converged = true;
            break;
        }
    }
    return result;
}

double initial_value(const SparseRow& iota, const ProbVector& x) {
    double acc = 0.0;
    for (const auto& [s, p] : iota) acc += p * x.values[s];
    return acc;
}

} // namespace anysyn

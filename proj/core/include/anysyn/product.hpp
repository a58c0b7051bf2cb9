#ifndef ANYSYN_PRODUCT_HPP
#define ANYSYN_PRODUCT_HPP

#include <iosfwd>
#include <string>
#include <vector>

#include "anysyn/compose.hpp"
#include "anysyn/dfa.hpp"

namespace anysyn {

struct BuildOptions {
    /// Propositions used by the DFA but absent from the system's label
    /// alphabet normally read as false with a one-time warning; under strict
    /// they are a hard error.
    bool strict = false;
    std::ostream* warnings = nullptr; // null silences the warning
};

/// Product of a composed system and the specification automaton.
///
/// Product state <s, q> has index s * |Q| + q over the full S x Q space
/// (unreachable states are retained). The intermediate transition function
/// and intermediate initial distribution do not depend on the automaton
/// component, so they are stored once as the rows and initial distribution
/// of `system`; the gated functions apply the successor table on top.
struct ProductMdp {
    ComposedSystem system;
    Dfa dfa;
    std::vector<int> gate; // [q * |S| + s'] = successor of q on L(s')

    int system_size() const { return static_cast<int>(system.mdp.states.size()); }
    int dfa_size() const { return static_cast<int>(dfa.states.size()); }
    int size() const { return system_size() * dfa_size(); }

    int index_of(int s, int q) const { return s * dfa_size() + q; }
    int system_state_of(int sp) const { return sp / dfa_size(); }
    int dfa_state_of(int sp) const { return sp % dfa_size(); }

    const std::vector<std::string>& actions() const { return system.mdp.actions; }
    bool enabled(int sp, int action) const {
        return system.mdp.enabled(system_state_of(sp), action);
    }
    const PropSet& label(int sp) const { return system.mdp.labels[system_state_of(sp)]; }
    bool is_accepting(int sp) const { return dfa.is_accepting(dfa_state_of(sp)); }

    /// Gated transition row of P_p: (target product index, probability).
    SparseRow row(int sp, int action) const;
    /// Intermediate transition probability (independent of the q components).
    double p_tilde(int sp, int action, int tp) const;
    /// Gated transition probability.
    double p(int sp, int action, int tp) const;

    /// Gated initial distribution over product states.
    SparseRow iota() const;
    /// Intermediate initial probability (independent of the q component).
    double iota_tilde(int sp) const;

    std::string state_name(int sp) const; // <s0,s1,...,sN|q>
};

/// Full S x Q product per the gated construction; also precomputes the
/// successor table. `system` is taken by value and moved in.
ProductMdp build_product(ComposedSystem system, const Dfa& d, const BuildOptions& opts = {});

/// Replaces the pinned component at tuple `position` by the full agent,
/// multiplying the stored intermediate functions per the incremental update
/// and re-gating against the updated labels. The flat system is never
/// recomposed from its components.
ProductMdp refine_product(const ProductMdp& p, const Mc& agent, int position);

/// B_p: all product states whose automaton component is accepting.
std::vector<int> accepting_states(const ProductMdp& p);

/// Product of a Markov chain with the automaton: the gated chain plus its
/// accepting state set.
struct McProduct {
    Mc chain;
    std::vector<int> accepting;
};
McProduct mc_dfa_product(const Mc& m, const Dfa& d, const BuildOptions& opts = {});

/// Debug dump in the MDP file format with composite state names.
std::string render_product_debug(const ProductMdp& p);

} // namespace anysyn

#endif

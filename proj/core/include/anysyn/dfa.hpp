#ifndef ANYSYN_DFA_HPP
#define ANYSYN_DFA_HPP

#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "anysyn/guard.hpp"

namespace anysyn {

struct DfaEdge {
    Guard guard;
    int target = 0;
};

/// Specification automaton over namespaced propositions. Validation enforces
/// determinism and completeness: for every state and every valuation of the
/// propositions its outgoing guards mention, exactly one guard is true.
struct Dfa {
    std::vector<std::string> states;
    int initial = 0;
    std::vector<int> accepting;              // sorted state indices, non-empty
    std::vector<std::vector<DfaEdge>> edges; // per source state
    std::vector<std::pair<std::string, Guard>> macros; // as declared

    int state_index(std::string_view id) const;
    bool is_accepting(int q) const;
};

/// Cap on the number of distinct support propositions per state for the
/// exhaustive determinism/completeness check.
inline constexpr int kMaxGuardSupport = 20;

/// Determinism, completeness and F non-empty. Overlap and incompleteness
/// errors carry a witness valuation in the message.
void validate(const Dfa& d);

/// The unique successor of q on the letter `labels`.
int dfa_successor(const Dfa& d, int q, const PropSet& labels);

} // namespace anysyn

#endif

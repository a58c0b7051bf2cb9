#include "anysyn/dfa.hpp"

#include <algorithm>

#include "anysyn/errors.hpp"

namespace anysyn {

int Dfa::state_index(std::string_view id) const {
    for (size_t i = 0; i < states.size(); ++i) {
        if (states[i] == id) return static_cast<int>(i);
    }
    return -1;
}

bool Dfa::is_accepting(int q) const {
    return std::binary_search(accepting.begin(), accepting.end(), q);
}

void validate(const Dfa& d) {
    if (d.states.empty()) throw ValidationError("dfa: no states");
    if (d.accepting.empty()) throw ValidationError("dfa: empty accepting set");

    // Determinism and completeness, per source state, by exhaustive
    // enumeration over that state's guard-support propositions.
    for (size_t q = 0; q < d.states.size(); ++q) {
        PropSet support;
        for (const DfaEdge& e : d.edges[q]) e.guard.collect_support(support);
        if (support.size() > static_cast<size_t>(kMaxGuardSupport)) {
            throw ValidationError("dfa: state " + d.states[q] + " guards mention " +
                                  std::to_string(support.size()) +
                                  " propositions, exceeding the enumeration cap of " +
                                  std::to_string(kMaxGuardSupport));
        }
        const std::uint32_t count = 1u << support.size();
        for (std::uint32_t mask = 0; mask < count; ++mask) {
            auto holds = [&](const Prop& p) -> bool {
                auto it = std::lower_bound(support.begin(), support.end(), p);
                if (it == support.end() || !(*it == p)) return false;
                return ((mask >> (it - support.begin())) & 1u) != 0;
            };
            int matches = 0;
            for (const DfaEdge& e : d.edges[q]) {
                if (eval_guard(e.guard, holds)) ++matches;
            }
            if (matches == 1) continue;
            PropSet witness;
            for (size_t b = 0; b < support.size(); ++b) {
                if ((mask >> b) & 1u) witness.push_back(support[b]);
            }
            if (matches == 0) {
                throw ValidationError("dfa: state " + d.states[q] +
                                      " has no guard true for valuation " +
                                      to_string(witness));
            }
            throw ValidationError("dfa: state " + d.states[q] + " has " +
                                  std::to_string(matches) +
                                  " guards simultaneously true for valuation " +
                                  to_string(witness));
        }
    }
}

int dfa_successor(const Dfa& d, int q, const PropSet& labels) {
    for (const DfaEdge& e : d.edges[q]) {
        if (eval_guard(e.guard, labels)) return e.target;
    }
    // Unreachable for validated automata.
    throw ValidationError("dfa: state " + d.states[q] + " has no guard true for letter " +
                          to_string(labels));
}

} // namespace anysyn

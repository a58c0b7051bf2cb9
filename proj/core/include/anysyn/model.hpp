#ifndef ANYSYN_MODEL_HPP
#define ANYSYN_MODEL_HPP

#include <string>
#include <string_view>
#include <utility>
#include <variant>
#include <vector>

#include "anysyn/errors.hpp"
#include "anysyn/prop.hpp"

namespace anysyn {

/// Sparse probability row: (state index, probability), sorted by index.
/// Zero-probability entries are never stored.
using SparseRow = std::vector<std::pair<int, double>>;

/// Tolerance for stochasticity checks (row sums and initial distributions).
inline constexpr double kProbTolerance = 1e-9;

double row_sum(const SparseRow& row);
double row_value(const SparseRow& row, int index);

/// Deterministic finite transition system: at most one successor per
/// (state, action) and at least one enabled action per state.
struct Dfts {
    std::string name;
    int agent = 0;
    std::vector<std::string> states;
    std::vector<std::string> actions;
    std::vector<std::vector<int>> next; // [state][action] -> target index or -1
    int initial = -1;
    std::vector<PropSet> labels; // per state

    int state_index(std::string_view id) const;
    int action_index(std::string_view id) const;
};

/// Discrete-time Markov chain.
struct Mc {
    std::string name;
    int agent = 0;
    std::vector<std::string> states;
    std::vector<SparseRow> rows; // per state
    SparseRow initial;
    std::vector<PropSet> labels;

    int state_index(std::string_view id) const;
};

/// Markov decision process. An action is enabled in a state iff its row is
/// non-empty; non-empty rows sum to 1 within kProbTolerance.
struct Mdp {
    std::string name;
    int agent = 0;
    std::vector<std::string> states;
    std::vector<std::string> actions;
    std::vector<std::vector<SparseRow>> rows; // [state][action]
    SparseRow initial;
    std::vector<PropSet> labels;

    int state_index(std::string_view id) const;
    int action_index(std::string_view id) const;
    bool enabled(int state, int action) const { return !rows[state][action].empty(); }
    std::vector<int> enabled_actions(int state) const;
};

using Component = std::variant<Dfts, Mc, Mdp>;

/// Throw ValidationError on any violated model invariant.
void validate(const Dfts& t);
void validate(const Mc& m);
void validate(const Mdp& m);

/// Union of all propositions appearing in the component's labels.
PropSet label_alphabet(const Dfts& t);
PropSet label_alphabet(const Mc& m);
PropSet label_alphabet(const Mdp& m);

const std::string& component_name(const Component& c);

} // namespace anysyn

#endif

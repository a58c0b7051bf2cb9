#include "anysyn/model.hpp"

#include <cmath>

namespace anysyn {

double row_sum(const SparseRow& row) {
    double s = 0.0;
    for (const auto& [_, p] : row) s += p;
    return s;
}

double row_value(const SparseRow& row, int index) {
    for (const auto& [i, p] : row) {
        if (i == index) return p;
        if (i > index) break;
    }
    return 0.0;
}

namespace {

int find_id(const std::vector<std::string>& ids, std::string_view id) {
    for (size_t i = 0; i < ids.size(); ++i) {
        if (ids[i] == id) return static_cast<int>(i);
    }
    return -1;
}

void check_probabilities(const SparseRow& row, const std::string& what) {
    for (const auto& [_, p] : row) {
        if (!(p >= 0.0) || p > 1.0 + kProbTolerance) {
            throw ValidationError(what + ": probability " + std::to_string(p) +
                                  " outside [0,1]");
        }
    }
}

void check_initial(const SparseRow& initial, const std::string& name) {
    check_probabilities(initial, "component " + name + " initial distribution");
    double s = row_sum(initial);
    if (std::abs(s - 1.0) > kProbTolerance) {
        throw ValidationError("component " + name + ": initial distribution sums to " +
                              std::to_string(s) + ", expected 1");
    }
}

} // namespace

int Dfts::state_index(std::string_view id) const { return find_id(states, id); }
int Dfts::action_index(std::string_view id) const { return find_id(actions, id); }
int Mc::state_index(std::string_view id) const { return find_id(states, id); }
int Mdp::state_index(std::string_view id) const { return find_id(states, id); }
int Mdp::action_index(std::string_view id) const { return find_id(actions, id); }

std::vector<int> Mdp::enabled_actions(int state) const {
    std::vector<int> out;
    for (size_t a = 0; a < actions.size(); ++a) {
        if (!rows[state][a].empty()) out.push_back(static_cast<int>(a));
    }
    return out;
}

void validate(const Dfts& t) {
    if (t.states.empty()) throw ValidationError("component " + t.name + ": no states");
    if (t.initial < 0 || t.initial >= static_cast<int>(t.states.size())) {
        throw ValidationError("component " + t.name + ": missing or invalid initial state");
    }
    for (size_t s = 0; s < t.states.size(); ++s) {
        bool any = false;
        for (size_t a = 0; a < t.actions.size(); ++a) {
            if (t.next[s][a] >= 0) any = true;
        }
        if (!any) {
            throw ValidationError("component " + t.name + ": state " + t.states[s] +
                                  " has no enabled action");
        }
    }
}

void validate(const Mc& m) {
    if (m.states.empty()) throw ValidationError("component " + m.name + ": no states");
    for (size_t s = 0; s < m.states.size(); ++s) {
        check_probabilities(m.rows[s], "component " + m.name + " state " + m.states[s]);
        double sum = row_sum(m.rows[s]);
        if (std::abs(sum - 1.0) > kProbTolerance) {
            throw ValidationError("component " + m.name + ": row of state " + m.states[s] +
                                  " sums to " + std::to_string(sum) + ", expected 1");
        }
    }
    check_initial(m.initial, m.name);
}

void validate(const Mdp& m) {
    if (m.states.empty()) throw ValidationError("component " + m.name + ": no states");
    for (size_t s = 0; s < m.states.size(); ++s) {
        bool any = false;
        for (size_t a = 0; a < m.actions.size(); ++a) {
            const SparseRow& row = m.rows[s][a];
            if (row.empty()) continue;
            any = true;
            check_probabilities(row, "component " + m.name + " state " + m.states[s]);
            double sum = row_sum(row);
            if (std::abs(sum - 1.0) > kProbTolerance) {
                throw ValidationError("component " + m.name + ": row of state " + m.states[s] +
                                      " action " + m.actions[a] + " sums to " +
                                      std::to_string(sum) + ", expected 0 or 1");
            }
        }
        if (!any) {
            throw ValidationError("component " + m.name + ": state " + m.states[s] +
                                  " has no enabled action");
        }
    }
    check_initial(m.initial, m.name);
}

namespace {

PropSet alphabet_of(const std::vector<PropSet>& labels) {
    PropSet out;
    for (const PropSet& l : labels) out = set_union(out, l);
    return out;
}

} // namespace

PropSet label_alphabet(const Dfts& t) { return alphabet_of(t.labels); }
PropSet label_alphabet(const Mc& m) { return alphabet_of(m.labels); }
PropSet label_alphabet(const Mdp& m) { return alphabet_of(m.labels); }

const std::string& component_name(const Component& c) {
    return std::visit([](const auto& x) -> const std::string& { return x.name; }, c);
}

} // namespace anysyn

#include "anysyn/compose.hpp"

#include <algorithm>

#include "anysyn/errors.hpp"

namespace anysyn {

TupleSpace::TupleSpace(std::vector<int> dims) : dims_(std::move(dims)) {
    strides_.assign(dims_.size(), 1);
    for (int i = static_cast<int>(dims_.size()) - 2; i >= 0; --i) {
        strides_[i] = strides_[i + 1] * dims_[i + 1];
    }
    size_ = dims_.empty() ? 1 : strides_[0] * dims_[0];
}

int TupleSpace::encode(const CompositeState& tuple) const {
    int index = 0;
    for (size_t i = 0; i < dims_.size(); ++i) index += tuple[i] * strides_[i];
    return index;
}

CompositeState TupleSpace::decode(int index) const {
    CompositeState tuple(dims_.size());
    for (size_t i = 0; i < dims_.size(); ++i) {
        tuple[i] = (index / strides_[i]) % dims_[i];
    }
    return tuple;
}

int TupleSpace::component(int index, int position) const {
    return (index / strides_[position]) % dims_[position];
}

int TupleSpace::replace(int index, int position, int value) const {
    return index + (value - component(index, position)) * strides_[position];
}

namespace {

void check_disjoint_props(const PropSet& a, const PropSet& b, const std::string& a_name,
                          const std::string& b_name) {
    PropSet overlap;
    std::set_intersection(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(overlap));
    if (!overlap.empty()) {
        throw ValidationError("components " + a_name + " and " + b_name +
                              " share propositions " + to_string(overlap));
    }
}

std::string pair_state_name(const std::string& a, const std::string& b) { return a + "_" + b; }

} // namespace

Mc compose_mc_pair(const Mc& a, const Mc& b) {
    check_disjoint_props(label_alphabet(a), label_alphabet(b), a.name, b.name);

    const int nb = static_cast<int>(b.states.size());
    Mc out;
    out.name = a.name + "||" + b.name;
    out.agent = a.agent;
    out.states.reserve(a.states.size() * b.states.size());
    out.labels.reserve(out.states.capacity());
    for (const std::string& sa : a.states) {
        for (const std::string& sb : b.states) out.states.push_back(pair_state_name(sa, sb));
    }
    for (size_t sa = 0; sa < a.states.size(); ++sa) {
        for (size_t sb = 0; sb < b.states.size(); ++sb) {
            out.labels.push_back(set_union(a.labels[sa], b.labels[sb]));
        }
    }
    out.rows.assign(out.states.size(), {});
    for (size_t sa = 0; sa < a.states.size(); ++sa) {
        for (size_t sb = 0; sb < b.states.size(); ++sb) {
            SparseRow& row = out.rows[sa * nb + sb];
            for (const auto& [ta, pa] : a.rows[sa]) {
                for (const auto& [tb, pb] : b.rows[sb]) {
                    row.emplace_back(ta * nb + tb, pa * pb);
                }
            }
            std::sort(row.begin(), row.end());
        }
    }
    for (const auto& [sa, pa] : a.initial) {
        for (const auto& [sb, pb] : b.initial) {
            out.initial.emplace_back(sa * nb + sb, pa * pb);
        }
    }
    std::sort(out.initial.begin(), out.initial.end());
    return out;
}

Mdp compose_plant_mc(const Mdp& plant, const Mc& agent) {
    check_disjoint_props(label_alphabet(plant), label_alphabet(agent), plant.name, agent.name);

    const int nb = static_cast<int>(agent.states.size());
    Mdp out;
    out.name = plant.name + "||" + agent.name;
    out.agent = plant.agent;
    out.actions = plant.actions;
    out.states.reserve(plant.states.size() * agent.states.size());
    for (const std::string& sp : plant.states) {
        for (const std::string& sa : agent.states) out.states.push_back(pair_state_name(sp, sa));
    }
    for (size_t sp = 0; sp < plant.states.size(); ++sp) {
        for (size_t sa = 0; sa < agent.states.size(); ++sa) {
            out.labels.push_back(set_union(plant.labels[sp], agent.labels[sa]));
        }
    }
    out.rows.assign(out.states.size(), std::vector<SparseRow>(out.actions.size()));
    for (size_t sp = 0; sp < plant.states.size(); ++sp) {
        for (size_t a = 0; a < plant.actions.size(); ++a) {
            const SparseRow& plant_row = plant.rows[sp][a];
            if (plant_row.empty()) continue;
            for (size_t sa = 0; sa < agent.states.size(); ++sa) {
                SparseRow& row = out.rows[sp * nb + sa][a];
                for (const auto& [tp, pp] : plant_row) {
                    for (const auto& [ta, pa] : agent.rows[sa]) {
                        row.emplace_back(tp * nb + ta, pp * pa);
                    }
                }
                std::sort(row.begin(), row.end());
            }
        }
    }
    for (const auto& [sp, pp] : plant.initial) {
        for (const auto& [sa, pa] : agent.initial) {
            out.initial.emplace_back(sp * nb + sa, pp * pa);
        }
    }
    std::sort(out.initial.begin(), out.initial.end());
    return out;
}

Mdp compose_plant_mc(const Dfts& plant, const Mc& agent) {
    return compose_plant_mc(dfts_to_mdp(plant), agent);
}

Mdp dfts_to_mdp(const Dfts& t) {
    Mdp m;
    m.name = t.name;
    m.agent = t.agent;
    m.states = t.states;
    m.actions = t.actions;
    m.labels = t.labels;
    m.initial = {{t.initial, 1.0}};
    m.rows.assign(m.states.size(), std::vector<SparseRow>(m.actions.size()));
    for (size_t s = 0; s < t.states.size(); ++s) {
        for (size_t a = 0; a < t.actions.size(); ++a) {
            if (t.next[s][a] >= 0) m.rows[s][a] = {{t.next[s][a], 1.0}};
        }
    }
    return m;
}

Mc make_stationary(const Mc& agent, const std::optional<std::string>& pinned) {
    int pin = -1;
    if (pinned) {
        pin = agent.state_index(*pinned);
        if (pin < 0) {
            throw ValidationError("component " + agent.name + ": unknown pinned state '" +
                                  *pinned + "'");
        }
    } else {
        // Most likely initial state; entries are index-sorted, so the first
        // maximum implements the declaration-order tie-break.
        double best = -1.0;
        for (const auto& [s, p] : agent.initial) {
            if (p > best) {
                best = p;
                pin = s;
            }
        }
    }
    Mc out;
    out.name = agent.name;
    out.agent = agent.agent;
    out.states = {agent.states[pin]};
    out.rows = {{{0, 1.0}}};
    out.initial = {{0, 1.0}};
    out.labels = {agent.labels[pin]};
    return out;
}

ComposedSystem compose_system(const Plant& plant, const std::vector<Mc>& agents,
                              const std::vector<bool>& pinned) {
    if (!pinned.empty() && pinned.size() != agents.size()) {
        throw std::invalid_argument("compose_system: pinned flags do not match agent count");
    }

    ComposedSystem sys;
    std::visit(
        [&](const auto& p) {
            ComponentInfo info;
            info.name = p.name;
            info.agent = p.agent;
            info.states = p.states;
            info.labels = p.labels;
            sys.components.push_back(std::move(info));
        },
        plant);
    for (size_t i = 0; i < agents.size(); ++i) {
        const Mc& a = agents[i];
        ComponentInfo info;
        info.name = a.name;
        info.agent = a.agent;
        info.states = a.states;
        info.labels = a.labels;
        if (!pinned.empty() && pinned[i]) {
            if (a.states.size() != 1) {
                throw ValidationError("component " + a.name +
                                      " is marked pinned but has more than one state");
            }
            info.pinned = true;
            info.pinned_state = a.states[0];
        }
        sys.components.push_back(std::move(info));
    }

    std::vector<int> dims;
    for (const ComponentInfo& c : sys.components) dims.push_back(static_cast<int>(c.states.size()));
    sys.space = TupleSpace(std::move(dims));

    Mdp acc = std::holds_alternative<Dfts>(plant) ? dfts_to_mdp(std::get<Dfts>(plant))
                                                  : std::get<Mdp>(plant);
    for (const Mc& a : agents) acc = compose_plant_mc(acc, a);
    sys.mdp = std::move(acc);
    return sys;
}

} // namespace anysyn

#include "anysyn/product.hpp"

#include <algorithm>
#include <ostream>

#include "anysyn/errors.hpp"

namespace anysyn {

namespace {

std::vector<int> build_gate(const Mdp& system, const Dfa& d) {
    const int ns = static_cast<int>(system.states.size());
    const int nq = static_cast<int>(d.states.size());
    std::vector<int> gate(static_cast<size_t>(nq) * ns);
    for (int q = 0; q < nq; ++q) {
        for (int s = 0; s < ns; ++s) {
            gate[static_cast<size_t>(q) * ns + s] = dfa_successor(d, q, system.labels[s]);
        }
    }
    return gate;
}

void check_dfa_alphabet(const Mdp& system, const Dfa& d, const BuildOptions& opts) {
    PropSet dfa_support;
    for (const auto& edges : d.edges) {
        for (const DfaEdge& e : edges) e.guard.collect_support(dfa_support);
    }
    PropSet alphabet = label_alphabet(system);
    PropSet missing;
    std::set_difference(dfa_support.begin(), dfa_support.end(), alphabet.begin(), alphabet.end(),
                        std::back_inserter(missing));
    if (missing.empty()) return;
    if (opts.strict) {
        throw ValidationError("dfa references propositions absent from the model alphabet: " +
                              to_string(missing));
    }
    if (opts.warnings) {
        *opts.warnings << "warning: dfa propositions " << to_string(missing)
                       << " never appear in the model; they read as false\n";
    }
}

} // namespace

SparseRow ProductMdp::row(int sp, int action) const {
    const int s = system_state_of(sp);
    const int q = dfa_state_of(sp);
    const int ns = system_size();
    SparseRow out;
    const SparseRow& sys_row = system.mdp.rows[s][action];
    out.reserve(sys_row.size());
    for (const auto& [t, p] : sys_row) {
        out.emplace_back(index_of(t, gate[static_cast<size_t>(q) * ns + t]), p);
    }
    std::sort(out.begin(), out.end());
    return out;
}

double ProductMdp::p_tilde(int sp, int action, int tp) const {
    return row_value(system.mdp.rows[system_state_of(sp)][action], system_state_of(tp));
}

double ProductMdp::p(int sp, int action, int tp) const {
    const int q = dfa_state_of(sp);
    const int t = system_state_of(tp);
    if (dfa_state_of(tp) != gate[static_cast<size_t>(q) * system_size() + t]) return 0.0;
    return p_tilde(sp, action, tp);
}

SparseRow ProductMdp::iota() const {
    const int ns = system_size();
    SparseRow out;
    out.reserve(system.mdp.initial.size());
    for (const auto& [s, p] : system.mdp.initial) {
        out.emplace_back(index_of(s, gate[static_cast<size_t>(dfa.initial) * ns + s]), p);
    }
    std::sort(out.begin(), out.end());
    return out;
}

double ProductMdp::iota_tilde(int sp) const {
    return row_value(system.mdp.initial, system_state_of(sp));
}

std::string ProductMdp::state_name(int sp) const {
    const CompositeState tuple = system.space.decode(system_state_of(sp));
    std::string out = "<";
    for (size_t i = 0; i < tuple.size(); ++i) {
        if (i > 0) out += ",";
        out += system.components[i].states[tuple[i]];
    }
    out += "|" + dfa.states[dfa_state_of(sp)] + ">";
    return out;
}

ProductMdp build_product(ComposedSystem system, const Dfa& d, const BuildOptions& opts) {
    check_dfa_alphabet(system.mdp, d, opts);
    ProductMdp p;
    p.system = std::move(system);
    p.dfa = d;
    p.gate = build_gate(p.system.mdp, p.dfa);
    return p;
}

ProductMdp refine_product(const ProductMdp& p, const Mc& agent, int position) {
    const auto& components = p.system.components;
    if (position < 1 || position >= static_cast<int>(components.size())) {
        throw ValidationError("refine_product: agent position " + std::to_string(position) +
                              " out of range");
    }
    const ComponentInfo& pinned_info = components[position];
    if (!pinned_info.pinned) {
        throw ValidationError("refine_product: agent " + pinned_info.name + " is already full");
    }
    if (pinned_info.agent != agent.agent || pinned_info.name != agent.name) {
        throw ValidationError("refine_product: component at position " + std::to_string(position) +
                              " is " + pinned_info.name + "@" + std::to_string(pinned_info.agent) +
                              ", not " + agent.name + "@" + std::to_string(agent.agent));
    }
    if (agent.state_index(pinned_info.pinned_state) < 0) {
        throw ValidationError("refine_product: agent " + agent.name + " lacks the pinned state " +
                              pinned_info.pinned_state);
    }

    PropSet agent_alphabet = label_alphabet(agent);
    PropSet others;
    for (size_t i = 0; i < components.size(); ++i) {
        if (static_cast<int>(i) == position) continue;
        for (const PropSet& l : components[i].labels) others = set_union(others, l);
    }
    PropSet overlap;
    std::set_intersection(agent_alphabet.begin(), agent_alphabet.end(), others.begin(),
                          others.end(), std::back_inserter(overlap));
    if (!overlap.empty()) {
        throw ValidationError("refine_product: agent " + agent.name +
                              " shares propositions with other components: " + to_string(overlap));
    }

    const Mdp& old_mdp = p.system.mdp;
    const int old_n = static_cast<int>(old_mdp.states.size());
    const int agent_n = static_cast<int>(agent.states.size());
    const int agent_ns = agent.agent;

    ComposedSystem next;
    next.components = components;
    next.components[position].states = agent.states;
    next.components[position].labels = agent.labels;
    next.components[position].pinned = false;
    next.components[position].pinned_state.clear();

    std::vector<int> dims = p.system.space.dims();
    dims[position] = agent_n;
    next.space = TupleSpace(std::move(dims));

    // Index of the refined state for (old state, agent local state). Old
    // tuples hold 0 at `position`, so the refined index is a linear offset.
    const int stride = [&] {
        CompositeState probe(next.space.arity(), 0);
        probe[position] = 1;
        return next.space.encode(probe);
    }();
    auto refined_index = [&](int old_state, int r) {
        CompositeState tuple = p.system.space.decode(old_state);
        tuple[position] = r;
        return next.space.encode(tuple);
    };

    Mdp& mdp = next.mdp;
    mdp.name.clear();
    for (size_t i = 0; i < next.components.size(); ++i) {
        if (i > 0) mdp.name += "||";
        mdp.name += next.components[i].name;
    }
    mdp.agent = old_mdp.agent;
    mdp.actions = old_mdp.actions;

    const int new_n = next.space.size();
    mdp.states.resize(new_n);
    mdp.labels.resize(new_n);
    const PropSet& pinned_label = pinned_info.labels[0];
    for (int s = 0; s < old_n; ++s) {
        const int base = refined_index(s, 0);
        for (int r = 0; r < agent_n; ++r) {
            const int ns = base + r * stride;
            mdp.states[ns] = old_mdp.states[s] + "_" + agent.states[r];

            // Swap the refined component's label contribution.
            PropSet label;
            label.reserve(old_mdp.labels[s].size() + agent.labels[r].size());
            for (const Prop& pr : old_mdp.labels[s]) {
                if (pr.agent != agent_ns || !contains(pinned_label, pr)) label.push_back(pr);
            }
            for (const Prop& pr : agent.labels[r]) insert(label, pr);
            mdp.labels[ns] = std::move(label);
        }
    }

    // Intermediate transition function: multiply stored rows by agent rows.
    mdp.rows.assign(new_n, std::vector<SparseRow>(mdp.actions.size()));
    for (int s = 0; s < old_n; ++s) {
        const int src_base = refined_index(s, 0);
        for (size_t a = 0; a < mdp.actions.size(); ++a) {
            const SparseRow& old_row = old_mdp.rows[s][a];
            if (old_row.empty()) continue;
            for (int r = 0; r < agent_n; ++r) {
                SparseRow& row = mdp.rows[src_base + r * stride][a];
                row.reserve(old_row.size() * agent.rows[r].size());
                for (const auto& [t, pt] : old_row) {
                    const int dst_base = refined_index(t, 0);
                    for (const auto& [r2, pr2] : agent.rows[r]) {
                        row.emplace_back(dst_base + r2 * stride, pt * pr2);
                    }
                }
                std::sort(row.begin(), row.end());
            }
        }
    }

    // Intermediate initial distribution.
    for (const auto& [s, ps] : old_mdp.initial) {
        const int base = refined_index(s, 0);
        for (const auto& [r, pr] : agent.initial) {
            mdp.initial.emplace_back(base + r * stride, ps * pr);
        }
    }
    std::sort(mdp.initial.begin(), mdp.initial.end());

    ProductMdp out;
    out.system = std::move(next);
    out.dfa = p.dfa;
    out.gate = build_gate(out.system.mdp, out.dfa);
    return out;
}

std::vector<int> accepting_states(const ProductMdp& p) {
    std::vector<int> out;
    const int nq = p.dfa_size();
    out.reserve(static_cast<size_t>(p.system_size()) * p.dfa.accepting.size());
    for (int s = 0; s < p.system_size(); ++s) {
        for (int q : p.dfa.accepting) out.push_back(s * nq + q);
    }
    return out;
}

McProduct mc_dfa_product(const Mc& m, const Dfa& d, const BuildOptions& opts)
{
    Mdp as_mdp;
    as_mdp.name = m.name;
    as_mdp.agent = m.agent;
    as_mdp.states = m.states;
    as_mdp.actions = {"step"};
    as_mdp.labels = m.labels;
    as_mdp.initial = m.initial;
    as_mdp.rows.reserve(m.states.size());
    for (const SparseRow& row : m.rows) as_mdp.rows.push_back({row});

    check_dfa_alphabet(as_mdp, d, opts);
    const std::vector<int> gate = build_gate(as_mdp, d);

    const int ns = static_cast<int>(m.states.size());
    const int nq = static_cast<int>(d.states.size());
    McProduct out;
    out.chain.name = m.name + "(x)dfa";
    out.chain.agent = m.agent;
    out.chain.states.reserve(static_cast<size_t>(ns) * nq);
    for (int s = 0; s < ns; ++s) {
        for (int q = 0; q < nq; ++q) {
            out.chain.states.push_back(m.states[s] + "_" + d.states[q]);
            out.chain.labels.push_back(m.labels[s]);
            if (d.is_accepting(q)) out.accepting.push_back(s * nq + q);
        }
    }
    out.chain.rows.assign(out.chain.states.size(), {});
    for (int s = 0; s < ns; ++s) {
        for (int q = 0; q < nq; ++q) {
            SparseRow& row = out.chain.rows[static_cast<size_t>(s) * nq + q];
            for (const auto& [t, pt] : m.rows[s]) {
                row.emplace_back(t * nq + gate[static_cast<size_t>(q) * ns + t], pt);
            }
            std::sort(row.begin(), row.end());
        }
    }
    for (const auto& [s, ps] : m.initial) {
        out.chain.initial.emplace_back(s * nq + gate[static_cast<size_t>(d.initial) * ns + s], ps);
    }
    std::sort(out.chain.initial.begin(), out.chain.initial.end());
    return out;
}

std::string render_product_debug(const ProductMdp& p) {
    std::string out;
    out += "kind mdp\n";
    out += "name " + p.system.mdp.name + "(x)dfa\n";
    out += "states";
    for (int sp = 0; sp < p.size(); ++sp) out += " " + p.state_name(sp);
    out += "\n";
    for (const auto& [sp, pr] : p.iota()) {
        out += "init " + p.state_name(sp) + " " + std::to_string(pr) + "\n";
    }
    for (int sp = 0; sp < p.size(); ++sp) {
        for (size_t a = 0; a < p.actions().size(); ++a) {
            if (!p.enabled(sp, static_cast<int>(a))) continue;
            for (const auto& [tp, pr] : p.row(sp, static_cast<int>(a))) {
                out += "trans " + p.state_name(sp) + " " + p.actions()[a] + " " +
                       p.state_name(tp) + " " + std::to_string(pr) + "\n";
            }
        }
    }
    for (int sp = 0; sp < p.size(); ++sp) {
        if (p.label(sp).empty()) continue;
        out += "label " + p.state_name(sp);
        for (const Prop& pr : p.label(sp)) out += " " + to_string(pr);
        out += "\n";
    }
    return out;
}

} // namespace anysyn

#include "anysyn/policy.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <deque>
#include <fstream>
#include <random>
#include <sstream>

#include "anysyn/errors.hpp"
#include "anysyn/util.hpp"

namespace anysyn {

namespace {

constexpr int kUnreachable = -1;

std::vector<double> action_values(const ProductMdp& p, const ProbVector& x, int sp) {
    const int nq = p.dfa_size();
    const int ns = p.system_size();
    const int s = sp / nq;
    const int q = sp % nq;
    const int* gate_row = p.gate.data() + static_cast<size_t>(q) * ns;
    std::vector<double> out(p.actions().size(), -1.0);
    for (size_t a = 0; a < p.actions().size(); ++a) {
        const SparseRow& row = p.system.mdp.rows[s][a];
        if (row.empty()) continue;
        double acc = 0.0;
        for (const auto& [t, pt] : row) acc += pt * x.values[t * nq + gate_row[t]];
        out[a] = acc;
    }
    return out;
}

Mc induce_chain_impl(const ProductMdp& p, const std::vector<int>& choice) {
    const int n = p.size();
    Mc chain;
    chain.name = p.system.mdp.name + "(controlled)";
    chain.states.reserve(n);
    chain.rows.reserve(n);
    chain.labels.reserve(n);
    const Prop marker = accepting_marker();
    for (int sp = 0; sp < n; ++sp) {
        chain.states.push_back(p.state_name(sp));
        chain.rows.push_back(p.row(sp, choice[sp]));
        PropSet label = p.label(sp);
        if (p.is_accepting(sp)) insert(label, marker);
        chain.labels.push_back(std::move(label));
    }
    chain.initial = p.iota();
    return chain;
}

} // namespace

Prop accepting_marker() { return Prop{"_accept", 0}; }

Policy extract_policy(const ProductMdp& p, const ProbVector& x, const SolverConfig& cfg) {
    const int n = p.size();
    const int nq = p.dfa_size();
    const double eta = 10.0 * cfg.epsilon;

    // Optimal-action sets: every enabled action achieving the state value
    // within eta (x is only an epsilon-accurate fixed point).
    std::vector<std::vector<int>> act_max(n);
    for (int sp = 0; sp < n; ++sp) {
        const std::vector<double> values = action_values(p, x, sp);
        for (size_t a = 0; a < values.size(); ++a) {
            if (values[a] >= 0.0 && std::abs(values[a] - x.values[sp]) <= eta) {
                act_max[sp].push_back(static_cast<int>(a));
            }
        }
    }

    // Shortest distance to the accepting set along optimal actions, by
    // multi-source BFS over reversed edges.
    std::vector<std::vector<int>> reverse(n);
    for (int sp = 0; sp < n; ++sp) {
        const int s = sp / nq;
        const int q = sp % nq;
        const int* gate_row = p.gate.data() + static_cast<size_t>(q) * p.system_size();
        for (int a : act_max[sp]) {
            for (const auto& [t, _] : p.system.mdp.rows[s][a]) {
                reverse[t * nq + gate_row[t]].push_back(sp);
            }
        }
    }
    std::vector<int> dist(n, kUnreachable);
    std::deque<int> frontier;
    for (int sp = 0; sp < n; ++sp) {
        if (p.is_accepting(sp)) {
            dist[sp] = 0;
            frontier.push_back(sp);
        }
    }
    while (!frontier.empty()) {
        int tp = frontier.front();
        frontier.pop_front();
        for (int sp : reverse[tp]) {
            if (dist[sp] == kUnreachable) {
                dist[sp] = dist[tp] + 1;
                frontier.push_back(sp);
            }
        }
    }

    Policy pol;
    pol.roster = p.system.components;
    pol.space = p.system.space;
    pol.dfa_states = p.dfa.states;
    pol.actions = p.actions();
    pol.choice.assign(n, -1);

    for (int sp = 0; sp < n; ++sp) {
        const int s = sp / nq;
        if (p.is_accepting(sp) || x.values[sp] <= eta) {
            // Value-irrelevant states take the least enabled action.
            for (size_t a = 0; a < p.actions().size(); ++a) {
                if (p.system.mdp.enabled(s, static_cast<int>(a))) {
                    pol.choice[sp] = static_cast<int>(a);
                    break;
                }
            }
            continue;
        }
        if (dist[sp] == kUnreachable) {
            throw ValidationError("extract_policy: state " + p.state_name(sp) + " has value " +
                                  std::to_string(x.values[sp]) +
                                  " but no optimal action approaches the accepting set "
                                  "(inconsistent probability vector)");
        }
        const int* gate_row = p.gate.data() + static_cast<size_t>(sp % nq) * p.system_size();
        for (int a : act_max[sp]) {
            bool decreases = false;
            for (const auto& [t, _] : p.system.mdp.rows[s][a]) {
                if (dist[t * nq + gate_row[t]] == dist[sp] - 1) {
                    decreases = true;
                    break;
                }
            }
            if (decreases) {
                pol.choice[sp] = a;
                break;
            }
        }
        if (pol.choice[sp] < 0) {
            throw ValidationError("extract_policy: state " + p.state_name(sp) +
                                  " has no optimal action with a distance-decreasing successor");
        }
    }
    return pol;
}

Mc induce_chain(const ProductMdp& p, const Policy& pol) {
    if (pol.space.dims() != p.system.space.dims() || pol.size() != p.size()) {
        throw ValidationError("induce_chain: policy does not match the product's state space");
    }
    return induce_chain_impl(p, pol.choice);
}

Mc lift_policy(const Policy& pol, const Plant& plant, const std::vector<Mc>& agents,
               const Dfa& d) {
    // Roster check: every roster component must be supplied, full components
    // with identical state lists, pinned ones containing the pinned state.
    const std::string& plant_name = std::visit([](const auto& x) { return x.name; }, plant);
    if (pol.roster.empty() || pol.roster[0].name != plant_name) {
        throw ValidationError("policy roster names plant '" +
                              (pol.roster.empty() ? std::string("?") : pol.roster[0].name) +
                              "' but '" + plant_name + "' was supplied");
    }
    if (pol.roster.size() != agents.size() + 1) {
        throw ValidationError("policy roster lists " + std::to_string(pol.roster.size() - 1) +
                              " agents but " + std::to_string(agents.size()) + " were supplied");
    }
    std::vector<int> supplied_of_roster(pol.roster.size(), -1);
    for (size_t i = 1; i < pol.roster.size(); ++i) {
        const ComponentInfo& entry = pol.roster[i];
        for (size_t j = 0; j < agents.size(); ++j) {
            if (agents[j].name == entry.name) {
                supplied_of_roster[i] = static_cast<int>(j);
                break;
            }
        }
        if (supplied_of_roster[i] < 0) {
            throw ValidationError("policy roster references unknown agent '" + entry.name + "'");
        }
        const Mc& supplied = agents[supplied_of_roster[i]];
        if (entry.pinned) {
            if (supplied.state_index(entry.pinned_state) < 0) {
                throw ValidationError("agent " + entry.name + " lacks pinned state '" +
                                      entry.pinned_state + "' named by the policy");
            }
        } else if (entry.states != supplied.states) {
            throw ValidationError("agent " + entry.name +
                                  " does not match the policy's state list");
        }
    }
    if (pol.dfa_states != d.states) {
        throw ValidationError("policy was synthesized against a different automaton");
    }

    ComposedSystem full = compose_system(plant, agents);
    ProductMdp fullp = build_product(std::move(full), d);
    if (pol.roster[0].states != fullp.system.components[0].states) {
        throw ValidationError("plant does not match the policy's state list");
    }

    std::vector<int> action_of(pol.actions.size(), -1);
    for (size_t a = 0; a < pol.actions.size(); ++a) {
        for (size_t fa = 0; fa < fullp.actions().size(); ++fa) {
            if (fullp.actions()[fa] == pol.actions[a]) {
                action_of[a] = static_cast<int>(fa);
                break;
            }
        }
        if (action_of[a] < 0) {
            throw ValidationError("policy action '" + pol.actions[a] +
                                  "' does not exist in the supplied plant");
        }
    }

    const int nq = fullp.dfa_size();
    std::vector<int> choice(fullp.size(), -1);
    for (int sp = 0; sp < fullp.size(); ++sp) {
        const CompositeState tuple = fullp.system.space.decode(sp / nq);
        CompositeState abstract(pol.roster.size());
        abstract[0] = tuple[0];
        for (size_t i = 1; i < pol.roster.size(); ++i) {
            abstract[i] = pol.roster[i].pinned ? 0 : tuple[1 + supplied_of_roster[i]];
        }
        const int ap = pol.space.encode(abstract) * nq + sp % nq;
        choice[sp] = action_of[pol.choice[ap]];
    }

    return induce_chain_impl(fullp, choice);
}

double lift_and_evaluate(const Policy& pol, const Plant& plant, const std::vector<Mc>& agents,
                         const Dfa& d, const SolverConfig& cfg) {
    Mc chain = lift_policy(pol, plant, agents, d);
    const Prop marker = accepting_marker();
    std::vector<int> targets;
    for (size_t s = 0; s < chain.states.size(); ++s) {
        if (contains(chain.labels[s], marker)) targets.push_back(static_cast<int>(s));
    }
    ProbVector x = mc_reachability(chain, targets, cfg);
    return initial_value(chain.initial, x);
}

namespace {

int sample(const SparseRow& row, double u) {
    double acc = 0.0;
    for (const auto& [t, p] : row) {
        acc += p;
        if (u < acc) return t;
    }
    return row.empty() ? -1 : row.back().first;
}

} // namespace

SimulationResult simulate(const Mc& chain, const Prop& marker, long runs, long horizon,
                          std::uint64_t seed) {
    if (runs < 1) throw std::invalid_argument("simulate: runs must be >= 1");
    if (horizon < 1) throw std::invalid_argument("simulate: horizon must be >= 1");

    const int n = static_cast<int>(chain.states.size());
    std::vector<char> is_marker(n, 0);
    for (int s = 0; s < n; ++s) {
        if (contains(chain.labels[s], marker)) is_marker[s] = 1;
    }

    // States that cannot reach a marker state are rejecting sinks; runs
    // entering one count as failures immediately.
    std::vector<char> can_reach = is_marker;
    {
        std::vector<std::vector<int>> reverse(n);
        std::vector<int> frontier;
        for (int s = 0; s < n; ++s) {
            if (is_marker[s]) frontier.push_back(s);
            for (const auto& [t, _] : chain.rows[s]) reverse[t].push_back(s);
        }
        while (!frontier.empty()) {
            int t = frontier.back();
            frontier.pop_back();
            for (int s : reverse[t]) {
                if (!can_reach[s]) {
                    can_reach[s] = 1;
                    frontier.push_back(s);
                }
            }
        }
    }

    std::atomic<long> successes{0};
    parallel_for(runs, synth_threads(), [&](long run) {
        std::mt19937_64 rng(mix_seed(seed, static_cast<std::uint64_t>(run)));
        auto uniform = [&rng] { return static_cast<double>(rng() >> 11) * 0x1.0p-53; };
        int state = sample(chain.initial, uniform());
        bool hit = state >= 0 && is_marker[state];
        for (long step = 0; !hit && step < horizon && can_reach[state]; ++step) {
            state = sample(chain.rows[state], uniform());
            hit = is_marker[state];
        }
        if (hit) successes.fetch_add(1, std::memory_order_relaxed);
    });

    SimulationResult result;
    result.runs = runs;
    result.estimate = static_cast<double>(successes.load()) / static_cast<double>(runs);
    result.std_error =
        std::sqrt(result.estimate * (1.0 - result.estimate) / static_cast<double>(runs));
    return result;
}

// ---------------------------------------------------------------------------
// Policy files

std::string render_policy(const Policy& pol) {
    std::string out = "#policy roster=";
    for (size_t i = 0; i < pol.roster.size(); ++i) {
        if (i > 0) out += ",";
        out += pol.roster[i].name;
        out += pol.roster[i].pinned ? ":pinned:" + pol.roster[i].pinned_state : ":full";
    }
    out += "\n";

    const int nq = pol.dfa_size();
    for (int sp = 0; sp < pol.size(); ++sp) {
        const CompositeState tuple = pol.space.decode(sp / nq);
        for (size_t i = 0; i < pol.roster.size(); ++i) {
            if (pol.roster[i].pinned) continue;
            out += pol.roster[i].states[tuple[i]];
            out += "\t";
        }
        out += pol.dfa_states[sp % nq];
        out += "\t";
        out += pol.actions[pol.choice[sp]];
        out += "\n";
    }
    return out;
}

namespace {

std::vector<std::string> split(const std::string& s, char sep) {
    std::vector<std::string> out;
    std::string token;
    for (char c : s) {
        if (c == sep) {
            out.push_back(token);
            token.clear();
        } else {
            token += c;
        }
    }
    out.push_back(token);
    return out;
}

} // namespace

Policy parse_policy(std::string_view text) {
    std::istringstream in{std::string(text)};
    std::string header;
    if (!std::getline(in, header)) throw ParseError("empty policy file");
    const std::string prefix = "#policy roster=";
    if (header.rfind(prefix, 0) != 0) {
        throw ParseError("policy file must start with '#policy roster=...'", 1);
    }

    Policy pol;
    for (const std::string& entry : split(header.substr(prefix.size()), ',')) {
        std::vector<std::string> parts = split(entry, ':');
        ComponentInfo info;
        info.agent = -1; // namespace not recorded in the file
        if (parts.size() == 2 && parts[1] == "full") {
            info.name = parts[0];
        } else if (parts.size() == 3 && parts[1] == "pinned" && !parts[2].empty()) {
            info.name = parts[0];
            info.pinned = true;
            info.pinned_state = parts[2];
            info.states = {parts[2]};
        } else {
            throw ParseError("bad roster entry '" + entry + "'", 1);
        }
        if (info.name.empty()) throw ParseError("bad roster entry '" + entry + "'", 1);
        pol.roster.push_back(std::move(info));
    }
    if (pol.roster.empty() || pol.roster[0].pinned) {
        throw ParseError("policy roster must start with the full plant", 1);
    }

    std::vector<int> observed;
    for (size_t i = 0; i < pol.roster.size(); ++i) {
        if (!pol.roster[i].pinned) observed.push_back(static_cast<int>(i));
    }
    const size_t columns = observed.size() + 2;

    std::vector<std::vector<std::string>> rows;
    std::string line;
    int number = 1;
    while (std::getline(in, line)) {
        ++number;
        if (line.empty()) continue;
        std::vector<std::string> cells = split(line, '\t');
        if (cells.size() != columns) {
            throw ParseError("expected " + std::to_string(columns) + " columns, found " +
                                 std::to_string(cells.size()),
                             number);
        }
        rows.push_back(std::move(cells));
    }
    if (rows.empty()) throw ParseError("policy file lists no states");

    // The rows enumerate the product space in index order, so the automaton
    // column cycles fastest, then observed components right to left.
    const size_t q_col = observed.size();
    for (const auto& row : rows) {
        if (row[q_col] == rows[0][q_col] && &row != &rows[0]) break;
        pol.dfa_states.push_back(row[q_col]);
    }
    const size_t nq = pol.dfa_states.size();
    if (nq == 0 || rows.size() % nq != 0) throw ParseError("inconsistent automaton column");

    size_t stride = nq;
    for (int c = static_cast<int>(observed.size()) - 1; c >= 0; --c) {
        ComponentInfo& info = pol.roster[observed[c]];
        for (size_t j = 0; j * stride < rows.size(); ++j) {
            const std::string& value = rows[j * stride][c];
            if (!info.states.empty() && value == info.states[0]) break;
            info.states.push_back(value);
        }
        stride *= info.states.size();
    }
    if (stride != rows.size()) throw ParseError("row count does not match the roster shape");

    std::vector<int> dims;
    for (const ComponentInfo& info : pol.roster) {
        dims.push_back(static_cast<int>(info.states.size()));
    }
    pol.space = TupleSpace(std::move(dims));

    // Validate every cell against the reconstructed shape and read choices.
    pol.choice.reserve(rows.size());
    for (size_t r = 0; r < rows.size(); ++r) {
        const CompositeState tuple = pol.space.decode(static_cast<int>(r / nq));
        for (size_t c = 0; c < observed.size(); ++c) {
            const ComponentInfo& info = pol.roster[observed[c]];
            if (rows[r][c] != info.states[tuple[observed[c]]]) {
                throw ParseError("row " + std::to_string(r) + " column " + std::to_string(c) +
                                 " breaks the product enumeration order");
            }
        }
        if (rows[r][q_col] != pol.dfa_states[r % nq]) {
            throw ParseError("row " + std::to_string(r) + " breaks the automaton cycle");
        }
        const std::string& action = rows[r][q_col + 1];
        int a = -1;
        for (size_t i = 0; i < pol.actions.size(); ++i) {
            if (pol.actions[i] == action) a = static_cast<int>(i);
        }
        if (a < 0) {
            pol.actions.push_back(action);
            a = static_cast<int>(pol.actions.size()) - 1;
        }
        pol.choice.push_back(a);
    }
    return pol;
}

Policy load_policy(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ParseError(path + ": cannot open file");
    std::ostringstream buf;
    buf << in.rdbuf();
    try {
        return parse_policy(buf.str());
    } catch (const ParseError& e) {
        throw ParseError(path + ": " + e.what());
    }
}

} // namespace anysyn

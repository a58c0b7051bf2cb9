#include "support.hpp"

#include <sys/wait.h>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <random>
#include <sstream>
#include <stdexcept>

namespace testsupport {

using namespace anysyn;

std::string models_dir() { return ANYSYN_MODELS_DIR; }
std::string model_path(const std::string& file) { return models_dir() + "/" + file; }

Dfts fixture_vehicle() {
    return std::get<Dfts>(load_component(model_path("vehicle.mdl")));
}

Mc fixture_ped(int i) {
    return std::get<Mc>(load_component(model_path("ped" + std::to_string(i) + ".mdl")));
}

std::vector<Mc> fixture_peds() {
    std::vector<Mc> out;
    for (int i = 1; i <= 5; ++i) out.push_back(fixture_ped(i));
    return out;
}

Dfa fixture_dfa() { return load_dfa(model_path("crossing.dfa")); }

namespace {

int rand_int(std::mt19937_64& rng, int lo, int hi) {
    return lo + static_cast<int>(rng() % static_cast<std::uint64_t>(hi - lo + 1));
}

double rand_unit(std::mt19937_64& rng) {
    return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

std::vector<std::string> state_names(int n) {
    std::vector<std::string> out;
    for (int i = 0; i < n; ++i) out.push_back("s" + std::to_string(i));
    return out;
}

std::vector<PropSet> random_labels(std::mt19937_64& rng, int n, int agent) {
    const std::vector<std::string> bases{"p", "r"};
    std::vector<PropSet> labels(n);
    for (int s = 0; s < n; ++s) {
        for (const std::string& base : bases) {
            if (rand_unit(rng) < 0.4) insert(labels[s], Prop{base, agent});
        }
    }
    return labels;
}

SparseRow random_row(std::mt19937_64& rng, int n) {
    // 1..min(3,n) outcomes with normalized random weights.
    int outcomes = rand_int(rng, 1, std::min(3, n));
    std::vector<int> picks;
    while (static_cast<int>(picks.size()) < outcomes) {
        int t = rand_int(rng, 0, n - 1);
        if (std::find(picks.begin(), picks.end(), t) == picks.end()) picks.push_back(t);
    }
    std::sort(picks.begin(), picks.end());
    std::vector<double> weights;
    double total = 0.0;
    for (size_t i = 0; i < picks.size(); ++i) {
        weights.push_back(0.05 + rand_unit(rng));
        total += weights.back();
    }
    SparseRow row;
    for (size_t i = 0; i < picks.size(); ++i) row.emplace_back(picks[i], weights[i] / total);
    return row;
}

Mc random_mc(std::mt19937_64& rng, const std::string& name, int agent) {
    Mc m;
    m.name = name;
    m.agent = agent;
    const int n = rand_int(rng, 1, 4);
    m.states = state_names(n);
    for (int s = 0; s < n; ++s) m.rows.push_back(random_row(rng, n));
    m.initial = {{rand_int(rng, 0, n - 1), 1.0}};
    if (n > 1 && rand_unit(rng) < 0.3) {
        int a = 0;
        int b = rand_int(rng, 1, n - 1);
        m.initial = {{a, 0.5}, {b, 0.5}};
    }
    m.labels = random_labels(rng, n, agent);
    validate(m);
    return m;
}

Plant random_plant(std::mt19937_64& rng) {
    const int n = rand_int(rng, 1, 4);
    const int n_actions = rand_int(rng, 1, 2);
    std::vector<std::string> actions;
    for (int a = 0; a < n_actions; ++a) actions.push_back(std::string(1, char('a' + a)));

    if (rand_unit(rng) < 0.5) {
        Dfts t;
        t.name = "plant";
        t.agent = 0;
        t.states = state_names(n);
        t.actions = actions;
        t.next.assign(n, std::vector<int>(n_actions, -1));
        for (int s = 0; s < n; ++s) {
            for (int a = 0; a < n_actions; ++a) {
                if (rand_unit(rng) < 0.6) t.next[s][a] = rand_int(rng, 0, n - 1);
            }
            if (*std::max_element(t.next[s].begin(), t.next[s].end()) < 0) {
                t.next[s][rand_int(rng, 0, n_actions - 1)] = rand_int(rng, 0, n - 1);
            }
        }
        t.initial = rand_int(rng, 0, n - 1);
        t.labels = random_labels(rng, n, 0);
        validate(t);
        return t;
    }

    Mdp m;
    m.name = "plant";
    m.agent = 0;
    m.states = state_names(n);
    m.actions = actions;
    m.rows.assign(n, std::vector<SparseRow>(n_actions));
    for (int s = 0; s < n; ++s) {
        bool any = false;
        for (int a = 0; a < n_actions; ++a) {
            if (rand_unit(rng) < 0.6) {
                m.rows[s][a] = random_row(rng, n);
                any = true;
            }
        }
        if (!any) m.rows[s][rand_int(rng, 0, n_actions - 1)] = random_row(rng, n);
    }
    m.initial = {{rand_int(rng, 0, n - 1), 1.0}};
    m.labels = random_labels(rng, n, 0);
    validate(m);
    return m;
}

// Deterministic and complete by construction: for each state, every
// valuation over the support is assigned one target; guards are the
// per-target disjunctions of minterms.
Dfa random_dfa(std::mt19937_64& rng, const PropSet& alphabet) {
    Dfa d;
    const int n = rand_int(rng, 1, 4);
    for (int q = 0; q < n; ++q) d.states.push_back("q" + std::to_string(q));
    d.initial = rand_int(rng, 0, n - 1);

    const int accept_count = rand_int(rng, 1, n);
    std::vector<int> all(n);
    for (int q = 0; q < n; ++q) all[q] = q;
    std::shuffle(all.begin(), all.end(), rng);
    d.accepting.assign(all.begin(), all.begin() + accept_count);
    std::sort(d.accepting.begin(), d.accepting.end());

    d.edges.assign(n, {});
    for (int q = 0; q < n; ++q) {
        PropSet support;
        if (!alphabet.empty()) {
            int k = rand_int(rng, 0, std::min<int>(2, static_cast<int>(alphabet.size())));
            while (static_cast<int>(support.size()) < k) {
                insert(support, alphabet[rand_int(rng, 0, static_cast<int>(alphabet.size()) - 1)]);
            }
        }
        const std::uint32_t count = 1u << support.size();
        std::vector<std::vector<std::uint32_t>> minterms_of(n);
        for (std::uint32_t mask = 0; mask < count; ++mask) {
            minterms_of[rand_int(rng, 0, n - 1)].push_back(mask);
        }
        for (int target = 0; target < n; ++target) {
            if (minterms_of[target].empty()) continue;
            std::vector<Guard> terms;
            for (std::uint32_t mask : minterms_of[target]) {
                std::vector<Guard> literals;
                for (size_t b = 0; b < support.size(); ++b) {
                    Guard lit = Guard::literal(support[b]);
                    if (!((mask >> b) & 1u)) lit = Guard::negate(std::move(lit));
                    literals.push_back(std::move(lit));
                }
                if (literals.empty()) {
                    terms.push_back(Guard::constant(true));
                } else {
                    terms.push_back(Guard::conjunction(std::move(literals)));
                }
            }
            d.edges[q].push_back(DfaEdge{Guard::disjunction(std::move(terms)), target});
        }
    }
    validate(d);
    return d;
}

} // namespace

RandomInstance make_random_instance(std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    RandomInstance inst;
    inst.plant = random_plant(rng);
    const int n_agents = rand_int(rng, 1, 3);
    for (int i = 1; i <= n_agents; ++i) {
        inst.agents.push_back(random_mc(rng, "agent" + std::to_string(i), i));
    }
    PropSet alphabet = std::visit([](const auto& p) { return label_alphabet(p); }, inst.plant);
    for (const Mc& a : inst.agents) alphabet = set_union(alphabet, label_alphabet(a));
    inst.dfa = random_dfa(rng, alphabet);
    return inst;
}

std::vector<double> mc_reach_exact(const Mc& m, const std::vector<int>& targets) {
    const int n = static_cast<int>(m.states.size());
    std::vector<char> is_target(n, 0);
    for (int t : targets) is_target[t] = 1;

    // Restrict to states with a path into the target set.
    std::vector<char> can_reach = is_target;
    std::vector<std::vector<int>> reverse(n);
    for (int s = 0; s < n; ++s) {
        for (const auto& [t, _] : m.rows[s]) reverse[t].push_back(s);
    }
    std::vector<int> frontier(targets.begin(), targets.end());
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

    std::vector<int> unknown;
    std::vector<int> column(n, -1);
    for (int s = 0; s < n; ++s) {
        if (can_reach[s] && !is_target[s]) {
            column[s] = static_cast<int>(unknown.size());
            unknown.push_back(s);
        }
    }
    const int k = static_cast<int>(unknown.size());

    // (I - P_UU) x = P_UT * 1, solved by Gaussian elimination with pivoting.
    std::vector<std::vector<double>> a(k, std::vector<double>(k + 1, 0.0));
    for (int i = 0; i < k; ++i) {
        a[i][column[unknown[i]]] += 1.0;
        for (const auto& [t, p] : m.rows[unknown[i]]) {
            if (is_target[t]) {
                a[i][k] += p;
            } else if (column[t] >= 0) {
                a[i][column[t]] -= p;
            }
        }
    }
    for (int col = 0; col < k; ++col) {
        int pivot = col;
        for (int r = col + 1; r < k; ++r) {
            if (std::abs(a[r][col]) > std::abs(a[pivot][col])) pivot = r;
        }
        std::swap(a[col], a[pivot]);
        if (std::abs(a[col][col]) < 1e-14) throw std::runtime_error("singular reachability system");
        for (int r = 0; r < k; ++r) {
            if (r == col) continue;
            double f = a[r][col] / a[col][col];
            if (f == 0.0) continue;
            for (int c = col; c <= k; ++c) a[r][c] -= f * a[col][c];
        }
    }

    std::vector<double> x(n, 0.0);
    for (int t : targets) x[t] = 1.0;
    for (int i = 0; i < k; ++i) x[unknown[i]] = a[i][k] / a[i][i];
    return x;
}

std::string cli_path() { return ANYSYN_CLI_PATH; }

CliResult run_cli(const std::string& args, const std::string& env) {
    CliResult result;
    std::string command = std::string(ANYSYN_CLI_PATH) + " " + args;
    if (!env.empty()) command = "env " + env + " " + command;
    FILE* pipe = popen(command.c_str(), "r");
    if (!pipe) throw std::runtime_error("popen failed for: " + command);
    char buf[4096];
    size_t got;
    while ((got = fread(buf, 1, sizeof(buf), pipe)) > 0) result.output.append(buf, got);
    int status = pclose(pipe);
    result.exit_code = (status >= 0 && WIFEXITED(status)) ? WEXITSTATUS(status) : -1;
    return result;
}

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

} // namespace testsupport

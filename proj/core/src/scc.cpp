#include "anysyn/scc.hpp"

#include <algorithm>
#include <queue>
#include <set>

#include "anysyn/errors.hpp"

namespace anysyn {

namespace {

void add_edge(std::vector<std::vector<int>>& adj, int u, int v) {
    auto& row = adj[u];
    if (std::find(row.begin(), row.end(), v) == row.end()) row.push_back(v);
}

// Stable linearization of the precedence pairs (a before b), ties broken by
// the smallest state contained in a block.
std::vector<int> topo_order(const std::vector<std::vector<int>>& blocks,
                            const std::vector<std::pair<int, int>>& precedence) {
    const int m = static_cast<int>(blocks.size());
    std::vector<std::vector<int>> succ(m);
    std::vector<int> indegree(m, 0);
    for (const auto& [a, b] : precedence) {
        succ[a].push_back(b);
        ++indegree[b];
    }
    auto key = [&](int b) { return blocks[b].empty() ? -1 : blocks[b].front(); };
    auto cmp = [&](int a, int b) { return key(a) > key(b); };
    std::priority_queue<int, std::vector<int>, decltype(cmp)> ready(cmp);
    for (int b = 0; b < m; ++b) {
        if (indegree[b] == 0) ready.push(b);
    }
    std::vector<int> order;
    order.reserve(m);
    while (!ready.empty()) {
        int b = ready.top();
        ready.pop();
        order.push_back(b);
        for (int nb : succ[b]) {
            if (--indegree[nb] == 0) ready.push(nb);
        }
    }
    if (static_cast<int>(order.size()) != m) {
        throw ValidationError("scc precedence contains a cycle");
    }
    return order;
}

void finalize(SccSet& s, const std::vector<std::vector<int>>& adj) {
    // Edge-induced precedence: target's block precedes the source's block.
    std::set<std::pair<int, int>> pairs;
    for (size_t u = 0; u < adj.size(); ++u) {
        for (int v : adj[u]) {
            int bu = s.block_index[u];
            int bv = s.block_index[v];
            if (bu != bv) pairs.emplace(bv, bu);
        }
    }
    s.precedence.assign(pairs.begin(), pairs.end());
    s.order = topo_order(s.blocks, s.precedence);
}

} // namespace

std::vector<std::vector<int>> adjacency(const Mc& m) {
    std::vector<std::vector<int>> adj(m.states.size());
    for (size_t s = 0; s < m.states.size(); ++s) {
        for (const auto& [t, _] : m.rows[s]) add_edge(adj, static_cast<int>(s), t);
    }
    return adj;
}

std::vector<std::vector<int>> adjacency(const Mdp& m) {
    std::vector<std::vector<int>> adj(m.states.size());
    for (size_t s = 0; s < m.states.size(); ++s) {
        for (const auto& per_action : m.rows[s]) {
            for (const auto& [t, _] : per_action) add_edge(adj, static_cast<int>(s), t);
        }
    }
    return adj;
}

std::vector<std::vector<int>> product_adjacency(const ProductMdp& p) {
    const int nq = p.dfa_size();
    const int ns = p.system_size();
    std::vector<std::vector<int>> adj(static_cast<size_t>(p.size()));
    for (int s = 0; s < ns; ++s) {
        for (int q = 0; q < nq; ++q) {
            auto& row = adj[static_cast<size_t>(s) * nq + q];
            for (const auto& per_action : p.system.mdp.rows[s]) {
                for (const auto& [t, _] : per_action) {
                    int tp = t * nq + p.gate[static_cast<size_t>(q) * ns + t];
                    if (std::find(row.begin(), row.end(), tp) == row.end()) row.push_back(tp);
                }
            }
        }
    }
    return adj;
}

SccSet tarjan_sccs(int state_count, const std::vector<std::vector<int>>& adj) {
    SccSet out;
    out.block_index.assign(state_count, -1);
    out.state_self_loop.assign(state_count, 0);

    std::vector<int> number(state_count, -1);
    std::vector<int> lowlink(state_count, 0);
    std::vector<char> on_stack(state_count, 0);
    std::vector<int> stack;
    int next_number = 0;

    // Iterative DFS: each frame remembers how far it got through its edges.
    struct Frame {
        int vertex;
        size_t edge;
    };
    std::vector<Frame> dfs;

    for (int root = 0; root < state_count; ++root) {
        if (number[root] != -1) continue;
        dfs.push_back({root, 0});
        while (!dfs.empty()) {
            Frame& f = dfs.back();
            const int v = f.vertex;
            if (f.edge == 0) {
                number[v] = lowlink[v] = next_number++;
                stack.push_back(v);
                on_stack[v] = 1;
            }
            bool descended = false;
            while (f.edge < adj[v].size()) {
                int w = adj[v][f.edge++];
                if (w == v) out.state_self_loop[v] = 1;
                if (number[w] == -1) {
                    dfs.push_back({w, 0});
                    descended = true;
                    break;
                }
                if (on_stack[w]) lowlink[v] = std::min(lowlink[v], number[w]);
            }
            if (descended) continue;
            if (lowlink[v] == number[v]) {
                std::vector<int> block;
                int w;
                do {
                    w = stack.back();
                    stack.pop_back();
                    on_stack[w] = 0;
                    out.block_index[w] = static_cast<int>(out.blocks.size());
                    block.push_back(w);
                } while (w != v);
                std::sort(block.begin(), block.end());
                out.blocks.push_back(std::move(block));
            }
            dfs.pop_back();
            if (!dfs.empty()) {
                lowlink[dfs.back().vertex] = std::min(lowlink[dfs.back().vertex], lowlink[v]);
            }
        }
    }

    out.derived_from.assign(out.blocks.size(), {-1, -1});
    finalize(out, adj);
    return out;
}

SccSet derive_sccs(const SccSet& parent, const SccSet& agent, const TupleSpace& parent_space,
                   int position) {
    if (position < 0 || position >= parent_space.arity() || parent_space.dims()[position] != 1) {
        throw ValidationError("derive_sccs: position " + std::to_string(position) +
                              " is not a singleton dimension of the parent space");
    }
    if (parent.state_count() != parent_space.size()) {
        throw ValidationError("derive_sccs: parent blocks do not cover the parent space");
    }

    std::vector<int> dims = parent_space.dims();
    const int agent_n = agent.state_count();
    dims[position] = agent_n;
    TupleSpace refined(dims);

    auto refined_index = [&](int parent_state, int r) {
        CompositeState tuple = parent_space.decode(parent_state);
        tuple[position] = r;
        return refined.encode(tuple);
    };

    SccSet out;
    out.block_index.assign(refined.size(), -1);
    out.state_self_loop.assign(refined.size(), 0);

    for (int pb = 0; pb < parent.block_count(); ++pb) {
        const auto& pblock = parent.blocks[pb];
        const bool parent_trivial = pblock.size() == 1 && !parent.state_self_loop[pblock[0]];
        for (int ab = 0; ab < agent.block_count(); ++ab) {
            const auto& ablock = agent.blocks[ab];
            const bool agent_trivial = ablock.size() == 1 && !agent.state_self_loop[ablock[0]];
            if (parent_trivial || agent_trivial) {
                // Every combined state forms its own (transient) block.
                for (int s : pblock) {
                    for (int r : ablock) {
                        std::vector<int> block{refined_index(s, r)};
                        out.block_index[block[0]] = static_cast<int>(out.blocks.size());
                        out.blocks.push_back(std::move(block));
                        out.derived_from.emplace_back(pb, ab);
                    }
                }
            } else {
                std::vector<int> block;
                block.reserve(pblock.size() * ablock.size());
                for (int s : pblock) {
                    for (int r : ablock) block.push_back(refined_index(s, r));
                }
                std::sort(block.begin(), block.end());
                for (int st : block) out.block_index[st] = static_cast<int>(out.blocks.size());
                out.blocks.push_back(std::move(block));
                out.derived_from.emplace_back(pb, ab);
            }
        }
    }

    // Self-loops multiply: the combined state loops iff both parents do.
    for (int s = 0; s < parent.state_count(); ++s) {
        if (!parent.state_self_loop[s]) continue;
        for (int r = 0; r < agent_n; ++r) {
            if (agent.state_self_loop[r]) out.state_self_loop[refined_index(s, r)] = 1;
        }
    }

    // Candidate precedence: both parent pairs related (reflexively), not both
    // equal. A superset of the edge-induced relation and still acyclic.
    std::set<std::pair<int, int>> parent_prec(parent.precedence.begin(), parent.precedence.end());
    std::set<std::pair<int, int>> agent_prec(agent.precedence.begin(), agent.precedence.end());
    auto leq = [](const std::set<std::pair<int, int>>& prec, int a, int b) {
        return a == b || prec.count({a, b}) > 0;
    };
    const int m = out.block_count();
    for (int b1 = 0; b1 < m; ++b1) {
        const auto [p1, a1] = out.derived_from[b1];
        for (int b2 = 0; b2 < m; ++b2) {
            if (b1 == b2) continue;
            const auto [p2, a2] = out.derived_from[b2];
            // Split singletons of one pair stay unordered: they cannot reach
            // each other (the trivial side contributes no edge).
            if (p1 == p2 && a1 == a2) continue;
            if (leq(parent_prec, p1, p2) && leq(agent_prec, a1, a2)) {
                out.precedence.emplace_back(b1, b2);
            }
        }
    }
    out.order = topo_order(out.blocks, out.precedence);
    return out;
}

SccSet product_partition(const SccSet& system, const ProductMdp& p) {
    if (system.state_count() != p.system_size()) {
        throw ValidationError("product_partition: system blocks do not cover the system space");
    }
    const int nq = p.dfa_size();
    const int ns = p.system_size();

    SccSet out;
    out.block_index.assign(p.size(), -1);
    out.blocks.reserve(system.block_count());
    for (int b = 0; b < system.block_count(); ++b) {
        std::vector<int> block;
        block.reserve(system.blocks[b].size() * nq);
        for (int s : system.blocks[b]) {
            for (int q = 0; q < nq; ++q) block.push_back(s * nq + q);
        }
        std::sort(block.begin(), block.end());
        for (int sp : block) out.block_index[sp] = b;
        out.blocks.push_back(std::move(block));
    }
    out.derived_from.assign(out.blocks.size(), {-1, -1});
    out.precedence = system.precedence;
    out.order = system.order;

    out.state_self_loop.assign(p.size(), 0);
    for (int s = 0; s < ns; ++s) {
        for (int q = 0; q < nq; ++q) {
            if (p.gate[static_cast<size_t>(q) * ns + s] != q) continue;
            for (const auto& per_action : p.system.mdp.rows[s]) {
                if (row_value(per_action, s) > 0.0) {
                    out.state_self_loop[static_cast<size_t>(s) * nq + q] = 1;
                    break;
                }
            }
        }
    }
    return out;
}

std::string render_sccs(const SccSet& s) {
    std::string out;
    for (int b = 0; b < s.block_count(); ++b) {
        out += "scc " + std::to_string(b);
        if (s.derived_from[b].first >= 0) {
            out += " derived-from " + std::to_string(s.derived_from[b].first) + "," +
                   std::to_string(s.derived_from[b].second);
        }
        out += " :";
        for (int st : s.blocks[b]) out += " " + std::to_string(st);
        out += "\n";
    }
    return out;
}

} // namespace anysyn

#ifndef ANYSYN_SCC_HPP
#define ANYSYN_SCC_HPP

#include <string>
#include <utility>
#include <vector>

#include "anysyn/product.hpp"

namespace anysyn {

/// SCC decomposition of a state space, or a coarser partition that closes
/// over SCCs, with the successor-induced precedence and a processing order.
struct SccSet {
    std::vector<std::vector<int>> blocks;     // disjoint cover; members sorted
    std::vector<int> block_index;             // per state: owning block
    std::vector<std::pair<int, int>> derived_from; // per block; (-1,-1) when direct
    /// Pairs (i, j): block i precedes block j (j has an edge into i, or the
    /// derived candidate relation implies it).
    std::vector<std::pair<int, int>> precedence;
    /// Permutation of block indices; i appears before j whenever i precedes j.
    std::vector<int> order;
    std::vector<char> state_self_loop; // per state

    int state_count() const { return static_cast<int>(block_index.size()); }
    int block_count() const { return static_cast<int>(blocks.size()); }
};

/// Positive-probability edges under any action.
std::vector<std::vector<int>> adjacency(const Mc& m);
std::vector<std::vector<int>> adjacency(const Mdp& m);
std::vector<std::vector<int>> product_adjacency(const ProductMdp& p);

/// Maximal SCCs via an iterative Tarjan pass. Precedence holds the
/// edge-induced pairs; the order is the stable linearization with ties
/// broken by smallest contained state index.
SccSet tarjan_sccs(int state_count, const std::vector<std::vector<int>>& adj);

/// SCCs of the refined system from the SCCs of the parent system and of the
/// agent replacing tuple `position` (which must be a singleton dimension of
/// `parent_space`). Singleton parent or agent blocks without self-loops
/// split into singleton blocks; every other pair yields one product block.
/// Precedence is the candidate relation over the derivation tags.
SccSet derive_sccs(const SccSet& parent, const SccSet& agent,
                   const TupleSpace& parent_space, int position);

/// Partition of the product space into blocks (system SCC) x Q, inheriting
/// the system precedence and order. Each block closes over every product
/// SCC it touches.
SccSet product_partition(const SccSet& system, const ProductMdp& p);

/// Debug dump: one line per block.
std::string render_sccs(const SccSet& s);

} // namespace anysyn

#endif

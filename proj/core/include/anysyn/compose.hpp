#ifndef ANYSYN_COMPOSE_HPP
#define ANYSYN_COMPOSE_HPP

#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "anysyn/model.hpp"

namespace anysyn {

/// Composite state of a synchronous composition: one local state index per
/// component, plant first, agents in their declared order.
using CompositeState = std::vector<int>;

/// Mixed-radix index space over composite states. Enumeration is row-major
/// over component orders: the last component varies fastest.
class TupleSpace {
public:
    TupleSpace() = default;
    explicit TupleSpace(std::vector<int> dims);

    int size() const { return size_; }
    int arity() const { return static_cast<int>(dims_.size()); }
    const std::vector<int>& dims() const { return dims_; }

    int encode(const CompositeState& tuple) const;
    CompositeState decode(int index) const;
    /// Local state of one component without decoding the whole tuple.
    int component(int index, int position) const;
    /// Index of the tuple with position `position` replaced by `value`.
    int replace(int index, int position, int value) const;

private:
    std::vector<int> dims_;
    std::vector<int> strides_;
    int size_ = 1;
};

/// Where each tuple position of a composed system came from.
struct ComponentInfo {
    std::string name;
    int agent = 0;                    // prop namespace index
    std::vector<std::string> states;  // local state names (one entry when pinned)
    std::vector<PropSet> labels;      // local labels per state
    bool pinned = false;
    std::string pinned_state;         // original state id, set when pinned
};

/// A composed system together with its tuple bookkeeping. `mdp` is the flat
/// synchronous composition; its state i corresponds to space.decode(i).
struct ComposedSystem {
    Mdp mdp;
    TupleSpace space;
    std::vector<ComponentInfo> components;
};

using Plant = std::variant<Dfts, Mdp>;

/// Synchronous parallel composition of two Markov chains: probabilities and
/// initial distributions multiply, labels union.
Mc compose_mc_pair(const Mc& a, const Mc& b);

/// Synchronous parallel composition of a plant with a Markov chain.
Mdp compose_plant_mc(const Dfts& plant, const Mc& agent);
Mdp compose_plant_mc(const Mdp& plant, const Mc& agent);

/// Unit-probability MDP embedding of a DFTS (same graph).
Mdp dfts_to_mdp(const Dfts& t);

/// One-state abstraction of an agent: pinned at `pinned` (default: the most
/// likely initial state, ties broken by declaration order), self-probability
/// one, keeping the pinned state's label.
Mc make_stationary(const Mc& agent, const std::optional<std::string>& pinned = {});

/// Left fold of the pairwise compositions over all components, with
/// composite-state bookkeeping. Component propositions must be pairwise
/// disjoint, which prop namespacing guarantees for parsed inputs.
/// `pinned[i]`, when given, marks agent i as a stationary abstraction
/// (it must then be a one-state chain).
ComposedSystem compose_system(const Plant& plant, const std::vector<Mc>& agents,
                              const std::vector<bool>& pinned = {});

} // namespace anysyn

#endif

#ifndef ANYSYN_GUARD_HPP
#define ANYSYN_GUARD_HPP

#include <functional>
#include <vector>

#include "anysyn/prop.hpp"

namespace anysyn {

/// Boolean guard expression over namespaced propositions. Macro references
/// are expanded at parse time, so a tree only ever contains constants,
/// literals and the three connectives.
class Guard {
public:
    enum class Kind { True, False, Literal, Not, And, Or };

    Guard() = default;

    static Guard constant(bool value);
    static Guard literal(Prop p);
    static Guard negate(Guard operand);
    static Guard conjunction(std::vector<Guard> terms);
    static Guard disjunction(std::vector<Guard> terms);

    Kind kind() const { return kind_; }
    const Prop& prop() const { return prop_; }
    const std::vector<Guard>& children() const { return children_; }

    /// Appends every proposition occurring in the expression to `out`.
    void collect_support(PropSet& out) const;

    std::string to_string() const;

private:
    Kind kind_ = Kind::True;
    Prop prop_;
    std::vector<Guard> children_;
};

/// Standard boolean semantics; a literal holds iff its prop is in `labels`.
bool eval_guard(const Guard& g, const PropSet& labels);

/// Evaluation against an arbitrary valuation.
bool eval_guard(const Guard& g, const std::function<bool(const Prop&)>& holds);

} // namespace anysyn

#endif

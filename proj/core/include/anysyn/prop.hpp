#ifndef ANYSYN_PROP_HPP
#define ANYSYN_PROP_HPP

#include <string>
#include <vector>

namespace anysyn {

/// Atomic proposition namespaced by the component that owns it (0 = plant).
/// Rendered as `base@agent`; two props are equal iff both fields are equal.
struct Prop {
    std::string base;
    int agent = 0;

    friend bool operator==(const Prop& a, const Prop& b) {
        return a.agent == b.agent && a.base == b.base;
    }
    friend bool operator<(const Prop& a, const Prop& b) {
        if (a.agent != b.agent) return a.agent < b.agent;
        return a.base < b.base;
    }
};

std::string to_string(const Prop& p);

/// A set of propositions, kept sorted and duplicate-free.
using PropSet = std::vector<Prop>;

bool contains(const PropSet& set, const Prop& p);
void insert(PropSet& set, const Prop& p);
PropSet set_union(const PropSet& a, const PropSet& b);

/// Renders as `{a@0,b@1}`; the empty set renders as `{}`.
std::string to_string(const PropSet& set);

} // namespace anysyn

#endif

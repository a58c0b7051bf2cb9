#include "anysyn/prop.hpp"

#include <algorithm>

namespace anysyn {

std::string to_string(const Prop& p) {
    return p.base + "@" + std::to_string(p.agent);
}

bool contains(const PropSet& set, const Prop& p) {
    return std::binary_search(set.begin(), set.end(), p);
}

void insert(PropSet& set, const Prop& p) {
    auto it = std::lower_bound(set.begin(), set.end(), p);
    if (it == set.end() || !(*it == p)) set.insert(it, p);
}

PropSet set_union(const PropSet& a, const PropSet& b) {
    PropSet out;
    out.reserve(a.size() + b.size());
    std::set_union(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out));
    return out;
}

std::string to_string(const PropSet& set) {
    std::string out = "{";
    for (size_t i = 0; i < set.size(); ++i) {
        if (i > 0) out += ",";
        out += to_string(set[i]);
    }
    out += "}";
    return out;
}

} // namespace anysyn

#include "anysyn/guard.hpp"

#include <algorithm>
#include <utility>

namespace anysyn {

Guard Guard::constant(bool value) {
    Guard g;
    g.kind_ = value ? Kind::True : Kind::False;
    return g;
}

Guard Guard::literal(Prop p) {
    Guard g;
    g.kind_ = Kind::Literal;
    g.prop_ = std::move(p);
    return g;
}

Guard Guard::negate(Guard operand) {
    Guard g;
    g.kind_ = Kind::Not;
    g.children_.push_back(std::move(operand));
    return g;
}

Guard Guard::conjunction(std::vector<Guard> terms) {
    if (terms.size() == 1) return std::move(terms.front());
    Guard g;
    g.kind_ = Kind::And;
    g.children_ = std::move(terms);
    return g;
}

Guard Guard::disjunction(std::vector<Guard> terms) {
    if (terms.size() == 1) return std::move(terms.front());
    Guard g;
    g.kind_ = Kind::Or;
    g.children_ = std::move(terms);
    return g;
}

void Guard::collect_support(PropSet& out) const {
    switch (kind_) {
    case Kind::Literal:
        insert(out, prop_);
        break;
    case Kind::Not:
    case Kind::And:
    case Kind::Or:
        for (const Guard& c : children_) c.collect_support(out);
        break;
    default:
        break;
    }
}

namespace {

// Parenthesize children whose connective binds looser than the parent's.
std::string child_string(const Guard& c, Guard::Kind parent) {
    bool parens = false;
    if (parent == Guard::Kind::Not) {
        parens = c.kind() == Guard::Kind::And || c.kind() == Guard::Kind::Or;
    } else if (parent == Guard::Kind::And) {
        parens = c.kind() == Guard::Kind::Or;
    }
    std::string s = c.to_string();
    return parens ? "(" + s + ")" : s;
}

} // namespace

std::string Guard::to_string() const {
    switch (kind_) {
    case Kind::True:
        return "true";
    case Kind::False:
        return "false";
    case Kind::Literal:
        return anysyn::to_string(prop_);
    case Kind::Not:
        return "!" + child_string(children_[0], kind_);
    case Kind::And: {
        std::string out;
        for (size_t i = 0; i < children_.size(); ++i) {
            if (i > 0) out += " & ";
            out += child_string(children_[i], kind_);
        }
        return out;
    }
    case Kind::Or: {
        std::string out;
        for (size_t i = 0; i < children_.size(); ++i) {
            if (i > 0) out += " | ";
            out += child_string(children_[i], kind_);
        }
        return out;
    }
    }
    return {};
}

bool eval_guard(const Guard& g, const std::function<bool(const Prop&)>& holds) {
    switch (g.kind()) {
    case Guard::Kind::True:
        return true;
    case Guard::Kind::False:
        return false;
    case Guard::Kind::Literal:
        return holds(g.prop());
    case Guard::Kind::Not:
        return !eval_guard(g.children()[0], holds);
    case Guard::Kind::And:
        return std::all_of(g.children().begin(), g.children().end(),
                           [&](const Guard& c) { return eval_guard(c, holds); });
    case Guard::Kind::Or:
        return std::any_of(g.children().begin(), g.children().end(),
                           [&](const Guard& c) { return eval_guard(c, holds); });
    }
    return false;
}

bool eval_guard(const Guard& g, const PropSet& labels) {
    return eval_guard(g, [&](const Prop& p) { return contains(labels, p); });
}

} // namespace anysyn

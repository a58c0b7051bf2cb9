#include <doctest.h>

#include "anysyn/compose.hpp"
#include "anysyn/dfa.hpp"
#include "support.hpp"

using namespace anysyn;

namespace {

PropSet labels(std::initializer_list<Prop> props) {
    PropSet out;
    for (const Prop& p : props) insert(out, p);
    return out;
}

const Guard& fixture_col() {
    static const Dfa d = testsupport::fixture_dfa();
    return d.macros[0].second;
}

} // namespace

TEST_CASE("conjunction with negation follows boolean semantics") {
    Guard g = Guard::conjunction(
        {Guard::literal(Prop{"a", 1}), Guard::negate(Guard::literal(Prop{"b", 1}))});
    CHECK(eval_guard(g, labels({Prop{"a", 1}})));
    CHECK_FALSE(eval_guard(g, labels({Prop{"a", 1}, Prop{"b", 1}})));
    CHECK_FALSE(eval_guard(g, labels({})));
}

TEST_CASE("collision macro fires when the vehicle shares the crossing cell") {
    CHECK(eval_guard(fixture_col(), labels({Prop{"c2", 0}, Prop{"c2", 5}})));
    CHECK(eval_guard(fixture_col(), labels({Prop{"c2", 0}, Prop{"c2", 1}, Prop{"c1", 2}})));
    CHECK_FALSE(eval_guard(fixture_col(), labels({Prop{"c2", 0}})));
    CHECK_FALSE(eval_guard(fixture_col(), labels({Prop{"c2", 1}, Prop{"c2", 2}})));
    CHECK_FALSE(eval_guard(fixture_col(), labels({Prop{"c0", 0}, Prop{"c2", 5}})));
}

TEST_CASE("constants and support collection") {
    CHECK(eval_guard(Guard::constant(true), labels({})));
    CHECK_FALSE(eval_guard(Guard::constant(false), labels({Prop{"a", 1}})));

    PropSet support;
    fixture_col().collect_support(support);
    CHECK(support.size() == 6); // c2 for the vehicle and each pedestrian
    CHECK(contains(support, Prop{"c2", 0}));
    CHECK(contains(support, Prop{"c2", 5}));
}

TEST_CASE("exactly one guard fires for every reachable fixture letter") {
    const Dfa d = testsupport::fixture_dfa();
    ComposedSystem sys =
        compose_system(testsupport::fixture_vehicle(), testsupport::fixture_peds());
    for (const PropSet& letter : sys.mdp.labels) {
        for (size_t q = 0; q < d.states.size(); ++q) {
            int matches = 0;
            for (const DfaEdge& e : d.edges[q]) {
                if (eval_guard(e.guard, letter)) ++matches;
            }
            CHECK(matches == 1);
        }
    }
}

TEST_CASE("guards render back to parseable text") {
    Guard g = Guard::disjunction(
        {Guard::conjunction({Guard::literal(Prop{"a", 1}), Guard::literal(Prop{"b", 2})}),
         Guard::negate(Guard::literal(Prop{"c", 0}))});
    CHECK(g.to_string() == "a@1 & b@2 | !c@0");
}

#include <doctest.h>

#include <random>

#include "anysyn/product.hpp"
#include "support.hpp"

using namespace anysyn;

namespace {

ProductMdp fixture_full_product() {
    ComposedSystem sys =
        compose_system(testsupport::fixture_vehicle(), testsupport::fixture_peds());
    return build_product(std::move(sys), testsupport::fixture_dfa());
}

ProductMdp fixture_abstract_product() {
    std::vector<Mc> stationary;
    for (const Mc& p : testsupport::fixture_peds()) stationary.push_back(make_stationary(p));
    ComposedSystem sys = compose_system(testsupport::fixture_vehicle(), stationary,
                                        std::vector<bool>(stationary.size(), true));
    return build_product(std::move(sys), testsupport::fixture_dfa());
}

} // namespace

TEST_CASE("dfa successor follows the guards") {
    Dfa d = testsupport::fixture_dfa();
    PropSet initial_labels;
    insert(initial_labels, Prop{"c0", 0});
    for (int i = 1; i <= 5; ++i) insert(initial_labels, Prop{"c1", i});
    CHECK(dfa_successor(d, 0, initial_labels) == 0);

    PropSet done;
    insert(done, Prop{"c4", 0});
    insert(done, Prop{"c1", 1});
    CHECK(dfa_successor(d, 0, done) == 1);

    CHECK(dfa_successor(d, 1, initial_labels) == 1);
    CHECK(dfa_successor(d, 1, done) == 1);

    PropSet collision;
    insert(collision, Prop{"c2", 0});
    insert(collision, Prop{"c2", 3});
    CHECK(dfa_successor(d, 0, collision) == 2);
}

TEST_CASE("full fixture product has 2187 states and 729 accepting states") {
    ProductMdp p = fixture_full_product();
    CHECK(p.size() == 2187);
    CHECK(p.system_size() == 729);
    CHECK(accepting_states(p).size() == 729);

    // All initial mass on <(c0,c1,...,c1), q0>.
    SparseRow iota = p.iota();
    REQUIRE(iota.size() == 1);
    CHECK(iota[0].second == 1.0);
    CHECK(p.dfa_state_of(iota[0].first) == 0);
    CompositeState tuple = p.system.space.decode(p.system_state_of(iota[0].first));
    CHECK(tuple == CompositeState{0, 0, 0, 0, 0, 0});
    CHECK(p.iota_tilde(iota[0].first) == 1.0);
}

TEST_CASE("abstract product accepts once per composite state") {
    ProductMdp p = fixture_abstract_product();
    std::vector<int> acc = accepting_states(p);
    REQUIRE(acc.size() == 3);
    for (int sp : acc) CHECK(p.dfa_state_of(sp) == 1);
}

TEST_CASE("accepting set is every state when F covers the automaton") {
    Dfa d = testsupport::fixture_dfa();
    d.accepting = {0, 1, 2};
    ComposedSystem sys = compose_system(testsupport::fixture_vehicle(), {});
    ProductMdp p = build_product(std::move(sys), d);
    CHECK(accepting_states(p).size() == static_cast<size_t>(p.size()));
}

TEST_CASE("gated rows agree with the intermediate function") {
    ProductMdp p = fixture_full_product();
    const int nq = p.dfa_size();
    for (int sp = 0; sp < p.size(); sp += 7) {
        for (size_t a = 0; a < p.actions().size(); ++a) {
            if (!p.enabled(sp, static_cast<int>(a))) continue;
            double sum = 0.0;
            for (const auto& [tp, prob] : p.row(sp, static_cast<int>(a))) {
                // Every stored target respects the successor gate.
                const int t = p.system_state_of(tp);
                CHECK(p.dfa_state_of(tp) ==
                      p.gate[static_cast<size_t>(p.dfa_state_of(sp)) * p.system_size() + t]);
                CHECK(p.p(sp, static_cast<int>(a), tp) == prob);
                CHECK(p.p_tilde(sp, static_cast<int>(a), tp) == prob);
                // Off-gate automaton states carry probability zero.
                const int off = p.index_of(t, (p.dfa_state_of(tp) + 1) % nq);
                CHECK(p.p(sp, static_cast<int>(a), off) == 0.0);
                sum += prob;
            }
            CHECK(sum == doctest::Approx(1.0).epsilon(1e-9));
        }
    }
}

TEST_CASE("refinement grows the abstract product one agent at a time") {
    ProductMdp abstract = fixture_abstract_product();
    CHECK(abstract.size() == 9);

    ProductMdp refined = refine_product(abstract, testsupport::fixture_ped(1), 1);
    CHECK(refined.size() == 27);
    CHECK(refined.system_size() == 9);
    CHECK_FALSE(refined.system.components[1].pinned);
    CHECK(refined.system.components[2].pinned);

    // The refined intermediate function multiplies the parent entry by the
    // agent step: vehicle go from (c0, c1 ...) while ped1 moves c1 -> c2.
    const int nq = refined.dfa_size();
    const int src = refined.system.space.encode({0, 0, 0, 0, 0, 0});
    const int dst = refined.system.space.encode({1, 1, 0, 0, 0, 0});
    const int go = 1;
    CHECK(refined.p_tilde(src * nq, go, dst * nq) == doctest::Approx(0.4).epsilon(1e-12));

    CHECK_THROWS_WITH_AS(refine_product(refined, testsupport::fixture_ped(1), 1),
                         doctest::Contains("already full"), ValidationError);
    CHECK_THROWS_AS(refine_product(refined, testsupport::fixture_ped(2), 99), ValidationError);
    CHECK_THROWS_AS(refine_product(refined, testsupport::fixture_ped(2), 3), ValidationError);
}

TEST_CASE("refinement labels swap the pinned contribution") {
    ProductMdp abstract = fixture_abstract_product();
    ProductMdp refined = refine_product(abstract, testsupport::fixture_ped(5), 5);
    const int s = refined.system.space.encode({1, 0, 0, 0, 0, 1}); // vehicle c2, ped5 c2
    PropSet expected;
    insert(expected, Prop{"c2", 0});
    for (int i = 1; i <= 4; ++i) insert(expected, Prop{"c1", i});
    insert(expected, Prop{"c2", 5});
    CHECK(refined.system.mdp.labels[s] == expected);
}

TEST_CASE("refinement chains reproduce the monolithic product") {
    std::mt19937_64 seeds(777);
    for (int it = 0; it < 30; ++it) {
        testsupport::RandomInstance inst = testsupport::make_random_instance(seeds());

        ComposedSystem full = compose_system(inst.plant, inst.agents);
        ProductMdp direct = build_product(std::move(full), inst.dfa);

        std::vector<Mc> stationary;
        for (const Mc& a : inst.agents) stationary.push_back(make_stationary(a));
        ComposedSystem abstract = compose_system(inst.plant, stationary,
                                                 std::vector<bool>(stationary.size(), true));
        ProductMdp incremental = build_product(std::move(abstract), inst.dfa);
        // Refine in a scrambled order; tuple identity fixes the bijection.
        std::vector<int> order(inst.agents.size());
        for (size_t i = 0; i < order.size(); ++i) order[i] = static_cast<int>(i);
        std::shuffle(order.begin(), order.end(), seeds);
        for (int l : order) {
            incremental = refine_product(incremental, inst.agents[l], l + 1);
        }

        REQUIRE(incremental.size() == direct.size());
        REQUIRE(incremental.system.space.dims() == direct.system.space.dims());
        const int nq = direct.dfa_size();
        for (int s = 0; s < direct.system_size(); ++s) {
            CHECK(incremental.system.mdp.labels[s] == direct.system.mdp.labels[s]);
            for (int q = 0; q < nq; ++q) {
                CHECK(incremental.gate[static_cast<size_t>(q) * direct.system_size() + s] ==
                      direct.gate[static_cast<size_t>(q) * direct.system_size() + s]);
            }
            for (size_t a = 0; a < direct.actions().size(); ++a) {
                const SparseRow& dr = direct.system.mdp.rows[s][a];
                const SparseRow& ir = incremental.system.mdp.rows[s][a];
                REQUIRE(dr.size() == ir.size());
                for (size_t e = 0; e < dr.size(); ++e) {
                    CHECK(dr[e].first == ir[e].first);
                    CHECK(ir[e].second == doctest::Approx(dr[e].second).epsilon(1e-12));
                }
            }
        }
        REQUIRE(incremental.system.mdp.initial.size() == direct.system.mdp.initial.size());
        for (size_t e = 0; e < direct.system.mdp.initial.size(); ++e) {
            CHECK(incremental.system.mdp.initial[e].first == direct.system.mdp.initial[e].first);
            CHECK(incremental.system.mdp.initial[e].second ==
                  doctest::Approx(direct.system.mdp.initial[e].second).epsilon(1e-12));
        }
    }
}

TEST_CASE("mc product gates the chain against the automaton") {
    Mc ped1 = testsupport::fixture_ped(1);
    Dfa d = parse_dfa("kind dfa\nstates w d\ninit w\naccept d\n"
                      "trans w d c3@1\ntrans w w !c3@1\ntrans d d true\n");
    McProduct prod = mc_dfa_product(ped1, d);
    CHECK(prod.chain.states.size() == 6);
    CHECK(prod.accepting.size() == 3);
    for (const SparseRow& row : prod.chain.rows) {
        CHECK(row_sum(row) == doctest::Approx(1.0).epsilon(1e-9));
    }
}

TEST_CASE("strict builds reject unknown dfa propositions") {
    std::vector<Mc> one{testsupport::fixture_ped(1)};
    ComposedSystem sys = compose_system(testsupport::fixture_vehicle(), one);
    BuildOptions strict;
    strict.strict = true;
    CHECK_THROWS_WITH_AS(build_product(std::move(sys), testsupport::fixture_dfa(), strict),
                         doctest::Contains("c2@2"), ValidationError);
}

TEST_CASE("product debug dump names composite states") {
    ProductMdp p = fixture_abstract_product();
    std::string dump = render_product_debug(p);
    CHECK(dump.find("kind mdp") == 0);
    CHECK(dump.find("<c0,c1,c1,c1,c1,c1|q0>") != std::string::npos);
}

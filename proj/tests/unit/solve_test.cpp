#include <doctest.h>

#include <random>
#include <sstream>

#include "anysyn/solve.hpp"
#include "support.hpp"

using namespace anysyn;

namespace {

Mdp mc_as_mdp(const Mc& m) {
    Mdp out;
    out.name = m.name;
    out.agent = m.agent;
    out.states = m.states;
    out.actions = {"step"};
    out.labels = m.labels;
    out.initial = m.initial;
    for (const SparseRow& row : m.rows) out.rows.push_back({row});
    return out;
}

Dfa trivial_dfa() {
    return parse_dfa("kind dfa\nstates q0\ninit q0\naccept q0\ntrans q0 q0 true\n");
}

ProductMdp fixture_ped5_product() {
    std::vector<Mc> one{testsupport::fixture_ped(5)};
    ComposedSystem sys = compose_system(testsupport::fixture_vehicle(), one);
    return build_product(std::move(sys), testsupport::fixture_dfa());
}

std::vector<int> labeled_states(const ProductMdp& p, const Prop& prop) {
    std::vector<int> out;
    for (int sp = 0; sp < p.size(); ++sp) {
        if (contains(p.label(sp), prop)) out.push_back(sp);
    }
    return out;
}

} // namespace

TEST_CASE("absorbing chain reaches its sink from everywhere") {
    Mc ped1 = testsupport::fixture_ped(1);
    ComposedSystem sys = compose_system(mc_as_mdp(ped1), {});
    ProductMdp p = build_product(std::move(sys), trivial_dfa());
    ProbVector x = value_iteration(p, labeled_states(p, Prop{"c3", 1}));
    CHECK(x.converged);
    for (double v : x.values) CHECK(v == doctest::Approx(1.0).epsilon(1e-5));

    // The independent linear-solve oracle agrees.
    std::vector<double> exact = testsupport::mc_reach_exact(ped1, {2});
    for (double v : exact) CHECK(v == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("crossing against the wandering pedestrian yields 0.8") {
    ProductMdp p = fixture_ped5_product();
    SolverConfig cfg;
    cfg.epsilon = 1e-9;
    ProbVector x = value_iteration(p, accepting_states(p), cfg);
    CHECK(x.converged);
    CHECK(initial_value(p.iota(), x) == doctest::Approx(0.8).epsilon(1e-6));
}

TEST_CASE("accepting states stay at one from the first iterate on") {
    ProductMdp p = fixture_ped5_product();
    const std::vector<int> targets = accepting_states(p);
    for (int sweeps : {1, 2, 5}) {
        SolverConfig cfg;
        cfg.max_iterations = sweeps;
        ProbVector x = value_iteration(p, targets, cfg);
        for (int t : targets) CHECK(x.values[t] == 1.0);
    }
}

TEST_CASE("iterates increase monotonically within the unit interval") {
    ProductMdp p = fixture_ped5_product();
    const std::vector<int> targets = accepting_states(p);
    std::vector<double> previous(p.size(), 0.0);
    for (int sweeps = 1; sweeps <= 30; ++sweeps) {
        SolverConfig cfg;
        cfg.max_iterations = sweeps;
        ProbVector x = value_iteration(p, targets, cfg);
        for (int sp = 0; sp < p.size(); ++sp) {
            CHECK(x.values[sp] >= previous[sp] - 1e-15);
            CHECK(x.values[sp] >= 0.0);
            CHECK(x.values[sp] <= 1.0);
        }
        previous = x.values;
    }
}

TEST_CASE("converged vectors satisfy the fixed-point residual bound") {
    std::mt19937_64 seeds(555);
    for (int it = 0; it < 20; ++it) {
        testsupport::RandomInstance inst = testsupport::make_random_instance(seeds());
        ComposedSystem sys = compose_system(inst.plant, inst.agents);
        ProductMdp p = build_product(std::move(sys), inst.dfa);
        const std::vector<int> targets = accepting_states(p);
        SolverConfig cfg;
        ProbVector x = value_iteration(p, targets, cfg);
        REQUIRE(x.converged);

        std::vector<char> is_target(p.size(), 0);
        for (int t : targets) is_target[t] = 1;
        for (int sp = 0; sp < p.size(); ++sp) {
            if (is_target[sp]) {
                CHECK(x.values[sp] == 1.0);
                continue;
            }
            double best = 0.0;
            for (size_t a = 0; a < p.actions().size(); ++a) {
                if (!p.enabled(sp, static_cast<int>(a))) continue;
                double acc = 0.0;
                for (const auto& [tp, prob] : p.row(sp, static_cast<int>(a))) {
                    acc += prob * x.values[tp];
                }
                best = std::max(best, acc);
            }
            CHECK(std::abs(x.values[sp] - best) <= 10 * cfg.epsilon);
        }
    }
}

TEST_CASE("block solver matches plain value iteration on the fixture") {
    ComposedSystem sys =
        compose_system(testsupport::fixture_vehicle(), testsupport::fixture_peds());
    SccSet system = tarjan_sccs(static_cast<int>(sys.mdp.states.size()), adjacency(sys.mdp));
    ProductMdp p = build_product(std::move(sys), testsupport::fixture_dfa());
    SccSet partition = product_partition(system, p);
    const std::vector<int> targets = accepting_states(p);

    SolverConfig cfg;
    cfg.epsilon = 1e-9;
    ProbVector plain = value_iteration(p, targets, cfg);
    ProbVector blocked = block_value_iteration(p, partition, targets, cfg);
    REQUIRE(plain.converged);
    REQUIRE(blocked.converged);
    CHECK(initial_value(p.iota(), blocked) == doctest::Approx(0.8).epsilon(1e-6));
    for (int sp = 0; sp < p.size(); ++sp) {
        CHECK(std::abs(plain.values[sp] - blocked.values[sp]) <= 10 * cfg.epsilon);
    }
}

TEST_CASE("single-block partition reproduces plain value iteration exactly") {
    ProductMdp p = fixture_ped5_product();
    SccSet whole;
    whole.blocks = {std::vector<int>(p.size())};
    for (int sp = 0; sp < p.size(); ++sp) whole.blocks[0][sp] = sp;
    whole.block_index.assign(p.size(), 0);
    whole.derived_from = {{-1, -1}};
    whole.order = {0};
    whole.state_self_loop.assign(p.size(), 0);

    const std::vector<int> targets = accepting_states(p);
    ProbVector plain = value_iteration(p, targets);
    ProbVector blocked = block_value_iteration(p, whole, targets);
    CHECK(plain.iterations == blocked.iterations);
    CHECK(plain.values == blocked.values);
}

TEST_CASE("block and plain solvers agree on randomized instances") {
    std::mt19937_64 seeds(808);
    for (int it = 0; it < 30; ++it) {
        testsupport::RandomInstance inst = testsupport::make_random_instance(seeds());
        ComposedSystem sys = compose_system(inst.plant, inst.agents);
        SccSet system = tarjan_sccs(static_cast<int>(sys.mdp.states.size()), adjacency(sys.mdp));
        ProductMdp p = build_product(std::move(sys), inst.dfa);
        SccSet partition = product_partition(system, p);
        const std::vector<int> targets = accepting_states(p);

        SolverConfig cfg;
        ProbVector plain = value_iteration(p, targets, cfg);
        ProbVector blocked = block_value_iteration(p, partition, targets, cfg);
        for (int sp = 0; sp < p.size(); ++sp) {
            CHECK(std::abs(plain.values[sp] - blocked.values[sp]) <= 10 * cfg.epsilon);
        }
    }
}

TEST_CASE("invalid partitions are rejected") {
    ProductMdp p = fixture_ped5_product();
    SccSet bad;
    bad.blocks = {{0, 1}};
    bad.block_index.assign(p.size(), 0);
    bad.derived_from = {{-1, -1}};
    bad.order = {0};
    bad.state_self_loop.assign(p.size(), 0);
    CHECK_THROWS_AS(block_value_iteration(p, bad, accepting_states(p)), ValidationError);
}

TEST_CASE("block trace reports one line per block") {
    Mc ped1 = testsupport::fixture_ped(1);
    ComposedSystem sys = compose_system(mc_as_mdp(ped1), {});
    SccSet system = tarjan_sccs(3, adjacency(sys.mdp));
    ProductMdp p = build_product(std::move(sys), trivial_dfa());
    SccSet partition = product_partition(system, p);
    std::ostringstream trace;
    block_value_iteration(p, partition, labeled_states(p, Prop{"c3", 1}), {}, &trace);
    const std::string text = trace.str();
    CHECK(text.find("block ") == 0);
    CHECK(std::count(text.begin(), text.end(), '\n') == 3);
}

TEST_CASE("chain reachability handles absorbing, recurrent and unreachable targets") {
    SolverConfig cfg;
    cfg.epsilon = 1e-9;
    Mc ped1 = testsupport::fixture_ped(1);
    ProbVector x1 = mc_reachability(ped1, {2}, cfg);
    for (double v : x1.values) CHECK(v == doctest::Approx(1.0).epsilon(1e-6));

    Mc ped5 = testsupport::fixture_ped(5);
    ProbVector x5 = mc_reachability(ped5, {2}, cfg);
    for (double v : x5.values) CHECK(v == doctest::Approx(1.0).epsilon(1e-6));
    std::vector<double> exact = testsupport::mc_reach_exact(ped5, {2});
    for (size_t s = 0; s < exact.size(); ++s) {
        CHECK(x5.values[s] == doctest::Approx(exact[s]).epsilon(1e-6));
    }

    // A target with no incoming edges is unreachable from the rest.
    Mc split;
    split.name = "split";
    split.agent = 1;
    split.states = {"a", "b"};
    split.rows = {{{0, 1.0}}, {{1, 1.0}}};
    split.initial = {{0, 1.0}};
    split.labels = {{}, {}};
    ProbVector x = mc_reachability(split, {1}, cfg);
    CHECK(x.values[0] == 0.0);
    CHECK(x.values[1] == 1.0);
}

TEST_CASE("iteration caps surface as non-convergence") {
    ProductMdp p = fixture_ped5_product();
    SolverConfig cfg;
    cfg.max_iterations = 2;
    ProbVector x = value_iteration(p, accepting_states(p), cfg);
    CHECK_FALSE(x.converged);
    CHECK(x.iterations == 2);
}

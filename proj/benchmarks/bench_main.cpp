#include <benchmark/benchmark.h>

#include "anysyn/anytime.hpp"
#include "anysyn/parse.hpp"
#include "anysyn/policy.hpp"
#include "anysyn/scc.hpp"

using namespace anysyn;

namespace {

std::string models_dir() { return ANYSYN_MODELS_DIR; }

Dfts load_vehicle() {
    return std::get<Dfts>(load_component(models_dir() + "/vehicle.mdl"));
}

std::vector<Mc> load_peds() {
    std::vector<Mc> out;
    for (int i = 1; i <= 5; ++i) {
        out.push_back(std::get<Mc>(load_component(models_dir() + "/ped" + std::to_string(i) + ".mdl")));
    }
    return out;
}

Dfa load_spec() { return load_dfa(models_dir() + "/crossing.dfa"); }

ProductMdp full_product() {
    return build_product(compose_system(Plant{load_vehicle()}, load_peds()), load_spec());
}

void BM_ComposeFullSystem(benchmark::State& state) {
    Plant vehicle{load_vehicle()};
    std::vector<Mc> peds = load_peds();
    for (auto _ : state) {
        benchmark::DoNotOptimize(compose_system(vehicle, peds));
    }
}
BENCHMARK(BM_ComposeFullSystem);

void BM_BuildProduct(benchmark::State& state) {
    Plant vehicle{load_vehicle()};
    std::vector<Mc> peds = load_peds();
    Dfa spec = load_spec();
    for (auto _ : state) {
        benchmark::DoNotOptimize(build_product(compose_system(vehicle, peds), spec));
    }
}
BENCHMARK(BM_BuildProduct);

void BM_RefineProductChain(benchmark::State& state) {
    Plant vehicle{load_vehicle()};
    std::vector<Mc> peds = load_peds();
    Dfa spec = load_spec();
    std::vector<Mc> stationary;
    for (const Mc& p : peds) stationary.push_back(make_stationary(p));
    ProductMdp abstract = build_product(
        compose_system(vehicle, stationary, std::vector<bool>(stationary.size(), true)), spec);
    for (auto _ : state) {
        ProductMdp p = abstract;
        for (int l = 0; l < 5; ++l) p = refine_product(p, peds[l], l + 1);
        benchmark::DoNotOptimize(p);
    }
}
BENCHMARK(BM_RefineProductChain);

void BM_ValueIteration(benchmark::State& state) {
    ProductMdp p = full_product();
    std::vector<int> targets = accepting_states(p);
    for (auto _ : state) {
        benchmark::DoNotOptimize(value_iteration(p, targets));
    }
}
BENCHMARK(BM_ValueIteration);

void BM_BlockValueIteration(benchmark::State& state) {
    Plant vehicle{load_vehicle()};
    std::vector<Mc> peds = load_peds();
    ComposedSystem sys = compose_system(vehicle, peds);
    SccSet system = tarjan_sccs(static_cast<int>(sys.mdp.states.size()), adjacency(sys.mdp));
    ProductMdp p = build_product(std::move(sys), load_spec());
    SccSet partition = product_partition(system, p);
    std::vector<int> targets = accepting_states(p);
    for (auto _ : state) {
        benchmark::DoNotOptimize(block_value_iteration(p, partition, targets));
    }
}
BENCHMARK(BM_BlockValueIteration);

void BM_TarjanOnProduct(benchmark::State& state) {
    ProductMdp p = full_product();
    auto adj = product_adjacency(p);
    for (auto _ : state) {
        benchmark::DoNotOptimize(tarjan_sccs(p.size(), adj));
    }
}
BENCHMARK(BM_TarjanOnProduct);

void BM_AnytimeGivenOrder(benchmark::State& state) {
    Plant vehicle{load_vehicle()};
    std::vector<Mc> peds = load_peds();
    Dfa spec = load_spec();
    AnytimeConfig cfg;
    cfg.selection = SelectionStrategy::GivenOrder;
    cfg.evaluate_full = false;
    for (auto _ : state) {
        benchmark::DoNotOptimize(run_anytime(vehicle, peds, spec, cfg));
    }
}
BENCHMARK(BM_AnytimeGivenOrder);

void BM_Simulate10k(benchmark::State& state) {
    Plant vehicle{load_vehicle()};
    std::vector<Mc> peds = load_peds();
    Dfa spec = load_spec();
    ProductMdp p = build_product(compose_system(vehicle, peds), spec);
    ProbVector x = value_iteration(p, accepting_states(p));
    Policy pol = extract_policy(p, x);
    Mc chain = induce_chain(p, pol);
    for (auto _ : state) {
        benchmark::DoNotOptimize(simulate(chain, accepting_marker(), 10000, 1000, 7));
    }
}
BENCHMARK(BM_Simulate10k);

} // namespace

BENCHMARK_MAIN();

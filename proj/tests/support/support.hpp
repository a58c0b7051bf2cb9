#ifndef ANYSYN_TESTS_SUPPORT_HPP
#define ANYSYN_TESTS_SUPPORT_HPP

#include <cstdint>
#include <string>
#include <vector>

#include "anysyn/anytime.hpp"
#include "anysyn/parse.hpp"
#include "anysyn/policy.hpp"
#include "anysyn/scc.hpp"

namespace testsupport {

std::string models_dir();
std::string model_path(const std::string& file);

anysyn::Dfts fixture_vehicle();
anysyn::Mc fixture_ped(int i); // 1..5
std::vector<anysyn::Mc> fixture_peds();
anysyn::Dfa fixture_dfa();

/// Random synthesis instance: plant <= 4 states, 1..3 agents of <= 4 states,
/// DFA <= 4 states, generated deterministic and complete by construction.
struct RandomInstance {
    anysyn::Plant plant;
    std::vector<anysyn::Mc> agents;
    anysyn::Dfa dfa;
};
RandomInstance make_random_instance(std::uint64_t seed);

/// Exact MC reachability by graph pruning plus dense Gaussian elimination;
/// an independent route from the iterative solvers.
std::vector<double> mc_reach_exact(const anysyn::Mc& m, const std::vector<int>& targets);

struct CliResult {
    int exit_code = -1;
    std::string output; // stdout only
};
/// Runs the CLI with the given argument string appended; `env` prefixes the
/// command with environment assignments (for example "SYNTH_THREADS=4").
CliResult run_cli(const std::string& args, const std::string& env = "");
std::string cli_path();

std::string read_file(const std::string& path);

} // namespace testsupport

#endif

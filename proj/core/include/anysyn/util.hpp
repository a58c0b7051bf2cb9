#ifndef ANYSYN_UTIL_HPP
#define ANYSYN_UTIL_HPP

#include <cstdint>
#include <functional>
#include <string>

namespace anysyn {

/// Worker cap from SYNTH_THREADS (default 1 = fully sequential). Read once.
int synth_threads();

/// Runs fn(0..count-1), splitting across at most `threads` workers. Callers
/// must make the result independent of the partitioning.
void parallel_for(long count, int threads, const std::function<void(long)>& fn);

std::uint64_t splitmix64(std::uint64_t& state);
std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t index);

/// Locale-independent fixed-point formatting.
std::string format_fixed(double value, int decimals);

} // namespace anysyn

#endif

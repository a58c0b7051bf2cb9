#include "anysyn/util.hpp"

#include <cstdio>
#include <cstdlib>
#include <exception>
#include <mutex>
#include <thread>
#include <vector>

namespace anysyn {

int synth_threads() {
    static const int cached = [] {
        const char* env = std::getenv("SYNTH_THREADS");
        if (!env) return 1;
        int n = std::atoi(env);
        if (n < 1) return 1;
        unsigned hw = std::thread::hardware_concurrency();
        if (hw > 0 && n > static_cast<int>(hw)) n = static_cast<int>(hw);
        return n;
    }();
    return cached;
}

void parallel_for(long count, int threads, const std::function<void(long)>& fn) {
    if (count <= 0) return;
    if (threads <= 1 || count == 1) {
        for (long i = 0; i < count; ++i) fn(i);
        return;
    }
    long workers = std::min<long>(threads, count);
    std::exception_ptr first_error;
    std::mutex error_mutex;
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (long w = 0; w < workers; ++w) {
        pool.emplace_back([&, w] {
            try {
                for (long i = w; i < count; i += workers) fn(i);
            } catch (...) {
                std::lock_guard<std::mutex> lock(error_mutex);
                if (!first_error) first_error = std::current_exception();
            }
        });
    }
    for (auto& t : pool) t.join();
    if (first_error) std::rethrow_exception(first_error);
}

std::uint64_t splitmix64(std::uint64_t& state) {
    std::uint64_t z = (state += 0x9E3779B97F4A7C15ULL);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}

std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t index) {
    std::uint64_t state = seed ^ (0x9E3779B97F4A7C15ULL * (index + 1));
    return splitmix64(state);
}

std::string format_fixed(double value, int decimals) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.*f", decimals, value);
    return buf;
}

} // namespace anysyn

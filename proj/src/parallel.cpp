#include "leafsep/parallel.hpp"

#include <atomic>
#include <cstdlib>
#include <thread>
#include <vector>

namespace leafsep {

int workerCount() {
    static const int count = [] {
        if (const char* env = std::getenv("LEAFSEP_THREADS")) {
            const int n = std::atoi(env);
            if (n >= 1) return n;
        }
        const unsigned hw = std::thread::hardware_concurrency();
        return hw > 0 ? static_cast<int>(hw) : 1;
    }();
    return count;
}

void parallelFor(int n, const std::function<void(int)>& fn) {
    const int workers = std::min(workerCount(), n);
    if (workers <= 1) {
        for (int i = 0; i < n; ++i) fn(i);
        return;
    }
    std::atomic<int> next{0};
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (int w = 0; w < workers; ++w) {
        pool.emplace_back([&] {
            constexpr int kChunk = 64;
            for (;;) {
                const int begin = next.fetch_add(kChunk);
                if (begin >= n) return;
                const int end = std::min(begin + kChunk, n);
                for (int i = begin; i < end; ++i) fn(i);
            }
        });
    }
    for (auto& t : pool) t.join();
}

}  // namespace leafsep

#include "rieszlab/parallel.hpp"

#include <algorithm>
#include <atomic>
#include <cstdlib>
#include <exception>
#include <mutex>
#include <thread>
#include <vector>

namespace rieszlab {

namespace {

std::atomic<int> g_override{0};

// Nested parallel_for calls run serially inside the enclosing workers; the
// outermost loop already owns the hardware and fan-out would only add
// oversubscription (results are identical either way by construction).
thread_local bool t_inside_parallel = false;

int default_threads() {
    if (const char* env = std::getenv("RIESZLAB_THREADS")) {
        const int v = std::atoi(env);
        if (v >= 1) return v;
    }
    const unsigned hw = std::thread::hardware_concurrency();
    return hw > 0 ? static_cast<int>(hw) : 1;
}

}  // namespace

int max_threads() {
    const int o = g_override.load();
    return o >= 1 ? o : default_threads();
}

void set_max_threads(int n) { g_override.store(n >= 1 ? n : 0); }

void parallel_for(std::size_t n, const std::function<void(std::size_t)>& fn) {
    if (n == 0) return;
    const std::size_t workers =
        std::min<std::size_t>(static_cast<std::size_t>(max_threads()), n);
    if (workers <= 1 || n < 2 || t_inside_parallel) {
        for (std::size_t i = 0; i < n; ++i) fn(i);
        return;
    }

    std::mutex err_mutex;
    std::exception_ptr first_error;
    auto run_block = [&](std::size_t lo, std::size_t hi) {
        t_inside_parallel = true;
        try {
            for (std::size_t i = lo; i < hi; ++i) fn(i);
        } catch (...) {
            std::lock_guard<std::mutex> lock(err_mutex);
            if (!first_error) first_error = std::current_exception();
        }
        t_inside_parallel = false;
    };

    std::vector<std::thread> threads;
    threads.reserve(workers - 1);
    const std::size_t chunk = (n + workers - 1) / workers;
    for (std::size_t w = 1; w < workers; ++w) {
        const std::size_t lo = w * chunk;
        if (lo >= n) break;
        threads.emplace_back(run_block, lo, std::min(n, lo + chunk));
    }
    run_block(0, std::min(n, chunk));
    for (auto& t : threads) t.join();
    if (first_error) std::rethrow_exception(first_error);
}

}  // namespace rieszlab

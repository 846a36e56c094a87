#ifndef IMSPELAB_PARALLEL_HPP
#define IMSPELAB_PARALLEL_HPP

#include <atomic>
#include <functional>
#include <thread>
#include <vector>

#include <mpfr.h>

namespace imspelab {

// Index-ordered parallelism: workers pull indices from a shared counter and
// write results into index-addressed slots, so output is identical for any
// worker count. `fn` must handle its own errors (record them in its slot);
// an escaping exception terminates the program.
inline void parallel_for(long n, int jobs, const std::function<void(long)>& fn) {
    if (jobs > 1 && !mpfr_buildopt_tls_p())
        jobs = 1; // extended-precision library built without TLS caches
    if (jobs > n) jobs = static_cast<int>(n);
    if (jobs <= 1) {
        for (long i = 0; i < n; ++i) fn(i);
        return;
    }
    std::atomic<long> next{0};
    std::vector<std::thread> pool;
    pool.reserve(static_cast<size_t>(jobs));
    for (int w = 0; w < jobs; ++w) {
        pool.emplace_back([&] {
            for (;;) {
                const long i = next.fetch_add(1);
                if (i >= n) break;
                fn(i);
            }
        });
    }
    for (auto& t : pool) t.join();
}

} // namespace imspelab

#endif

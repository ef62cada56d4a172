#ifndef PFQED_SCENARIO_PARALLEL_HPP
#define PFQED_SCENARIO_PARALLEL_HPP

#include <algorithm>
#include <atomic>
#include <exception>
#include <mutex>
#include <thread>
#include <vector>

namespace pfqed::scenario {

/// out[i] = fn(i) for i < n on up to `threads` workers. Results land in
/// index order regardless of scheduling; the first exception is rethrown
/// after all workers stop.
template <class Fn>
auto parallel_map(std::size_t n, std::size_t threads, Fn&& fn) -> std::vector<decltype(fn(std::size_t{}))>
{
    std::vector<decltype(fn(std::size_t{}))> out(n);
    std::atomic<std::size_t> next{0};
    std::atomic<bool> stop{false};
    std::exception_ptr failure;
    std::mutex m;
    auto worker = [&] {
        for(std::size_t i = next++; i < n && !stop; i = next++)
        {
            try
            {
                out[i] = fn(i);
            }
            catch(...)
            {
                std::lock_guard lock(m);
                if(!failure) failure = std::current_exception();
                stop = true;
            }
        }
    };
    const std::size_t t = std::max<std::size_t>(1, std::min(threads, n));
    if(t == 1)
    {
        worker();
    }
    else
    {
        std::vector<std::thread> pool;
        for(std::size_t k = 0; k < t; ++k) pool.emplace_back(worker);
        for(auto& th : pool) th.join();
    }
    if(failure) std::rethrow_exception(failure);
    return out;
}

} // namespace pfqed::scenario

#endif // PFQED_SCENARIO_PARALLEL_HPP

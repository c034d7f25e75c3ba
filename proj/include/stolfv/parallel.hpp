#pragma once

#include <algorithm>
#include <atomic>
#include <cstddef>
#include <exception>
#include <functional>
#include <thread>
#include <vector>

namespace stolfv {

/// Runs fn(0..n-1) on up to `threads` workers (0 = hardware concurrency) and
/// returns the results in index order. With `errors` given, errors[k] holds the
/// exception thrown by fn(k); otherwise the lowest-index one is rethrown after
/// all workers finish.
template <class T>
std::vector<T> parallel_map(std::size_t n, const std::function<T(std::size_t)>& fn, unsigned threads,
                            std::vector<std::exception_ptr>* errors = nullptr) {
    std::vector<T> out(n);
    std::vector<std::exception_ptr> err(n);
    std::atomic<std::size_t> next{0};
    auto worker = [&] {
        for (std::size_t k = next++; k < n; k = next++) {
            try {
                out[k] = fn(k);
            } catch (...) {
                err[k] = std::current_exception();
            }
        }
    };
    if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());
    threads = static_cast<unsigned>(std::min<std::size_t>(threads, std::max<std::size_t>(n, 1)));
    if (threads <= 1) {
        worker();
    } else {
        std::vector<std::thread> pool;
        for (unsigned t = 0; t < threads; ++t) pool.emplace_back(worker);
        for (auto& th : pool) th.join();
    }
    if (errors) {
        *errors = std::move(err);
    } else {
        for (auto& e : err) {
            if (e) std::rethrow_exception(e);
        }
    }
    return out;
}

}  // namespace stolfv

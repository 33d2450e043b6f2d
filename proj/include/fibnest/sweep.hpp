#pragma once

#include <atomic>
#include <exception>
#include <optional>
#include <thread>
#include <vector>

#include "fibnest/errors.hpp"

// Deterministic fan-out: apply fn to every item, possibly on several
// threads, and assemble results strictly by input index. Exceptions are
// captured per item and the lowest-index one is rethrown after all workers
// finish, so failure behavior does not depend on scheduling either.

namespace fibnest {

template <typename In, typename Fn>
auto parallel_map(const std::vector<In>& items, Fn fn, long workers)
    -> std::vector<decltype(fn(items.front()))> {
    using Out = decltype(fn(items.front()));
    if (workers < 1) throw domain_error("worker count must be >= 1");

    std::vector<std::optional<Out>> slots(items.size());
    std::vector<std::exception_ptr> errors(items.size());

    if (workers == 1 || items.size() <= 1) {
        for (std::size_t i = 0; i < items.size(); ++i) slots[i] = fn(items[i]);
    } else {
        std::atomic<std::size_t> next{0};
        auto work = [&] {
            for (;;) {
                std::size_t i = next.fetch_add(1);
                if (i >= items.size()) return;
                try {
                    slots[i] = fn(items[i]);
                } catch (...) {
                    errors[i] = std::current_exception();
                }
            }
        };
        std::vector<std::thread> pool;
        long n = std::min<long>(workers, static_cast<long>(items.size()));
        pool.reserve(static_cast<std::size_t>(n));
        for (long t = 0; t < n; ++t) pool.emplace_back(work);
        for (std::thread& t : pool) t.join();
        for (const std::exception_ptr& e : errors)
            if (e) std::rethrow_exception(e);
    }

    std::vector<Out> out;
    out.reserve(items.size());
    for (std::optional<Out>& s : slots) out.push_back(std::move(*s));
    return out;
}

} // namespace fibnest

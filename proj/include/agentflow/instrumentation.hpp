// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <atomic>
#include <cstdint>

// Process-wide counters bumped every time a combinator is evaluated.
// Tests use them to check that higher-level orchestration goes through the
// kernel rather than around it.

namespace agentflow::instrumentation {

enum class Combinator : std::uint8_t {
    Then,
    Map,
    Apply,
    AsyncThen,
    Gather,
    Transform,
    count_,
};

struct Snapshot {
    std::uint64_t then = 0;
    std::uint64_t map = 0;
    std::uint64_t apply = 0;
    std::uint64_t async_then = 0;
    std::uint64_t gather = 0;
    std::uint64_t transform = 0;

    friend Snapshot operator-(const Snapshot& a, const Snapshot& b)
    {
        return {a.then - b.then,
                a.map - b.map,
                a.apply - b.apply,
                a.async_then - b.async_then,
                a.gather - b.gather,
                a.transform - b.transform};
    }
};

namespace detail {
inline std::atomic<std::uint64_t>* counters() noexcept
{
    static std::atomic<std::uint64_t> table[static_cast<std::size_t>(Combinator::count_)] {};
    return table;
}
} // namespace detail

inline void record(Combinator c) noexcept
{
    detail::counters()[static_cast<std::size_t>(c)].fetch_add(1, std::memory_order_relaxed);
}

inline std::uint64_t count(Combinator c) noexcept
{
    return detail::counters()[static_cast<std::size_t>(c)].load(std::memory_order_relaxed);
}

inline Snapshot snapshot() noexcept
{
    return {count(Combinator::Then),
            count(Combinator::Map),
            count(Combinator::Apply),
            count(Combinator::AsyncThen),
            count(Combinator::Gather),
            count(Combinator::Transform)};
}

} // namespace agentflow::instrumentation

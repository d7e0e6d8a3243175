// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <algorithm>
#include <cstddef>
#include <string>
#include <utility>
#include <vector>

namespace agentflow::agent {

/// The agent's memory: the task plus an append-only history log.
class AgentState {
public:
    AgentState() = default;
    explicit AgentState(std::string task, std::vector<std::string> history = {})
        : task_(std::move(task))
        , history_(std::move(history))
    {
    }

    [[nodiscard]] const std::string& task() const noexcept { return task_; }
    [[nodiscard]] const std::vector<std::string>& history() const noexcept { return history_; }

    [[nodiscard]] AgentState with_history(std::string entry) const
    {
        AgentState next = *this;
        next.history_.push_back(std::move(entry));
        return next;
    }

    friend bool operator==(const AgentState&, const AgentState&) = default;

private:
    std::string task_;
    std::vector<std::string> history_;
};

/// True when `later`'s history starts with all of `earlier`'s entries.
inline bool extends(const AgentState& later, const AgentState& earlier)
{
    const auto& a = earlier.history();
    const auto& b = later.history();
    return b.size() >= a.size() && std::equal(a.begin(), a.end(), b.begin());
}

/**
 * Merge strategy for gathered agent states that forked from a common parent.
 *
 * Keeps the longest shared history prefix once, then appends every state's
 * own entries in input order. The task is taken from the first state.
 */
inline AgentState merge_histories(const std::vector<AgentState>& states)
{
    if (states.empty()) {
        return {};
    }
    std::size_t common = states.front().history().size();
    for (const auto& s : states) {
        const auto& h = s.history();
        const auto& first = states.front().history();
        std::size_t i = 0;
        while (i < common && i < h.size() && h[i] == first[i]) {
            ++i;
        }
        common = i;
    }
    const auto& first = states.front().history();
    std::vector<std::string> merged(first.begin(), first.begin() + static_cast<std::ptrdiff_t>(common));
    for (const auto& s : states) {
        const auto& h = s.history();
        merged.insert(merged.end(), h.begin() + static_cast<std::ptrdiff_t>(common), h.end());
    }
    return AgentState(states.front().task(), std::move(merged));
}

} // namespace agentflow::agent

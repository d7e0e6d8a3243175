// SPDX-License-Identifier: Apache-2.0

#pragma once

#include "agentflow/agent/state.hpp"
#include "agentflow/agent/tools.hpp"
#include "agentflow/async_flow.hpp"
#include "agentflow/flow.hpp"

#include <chrono>
#include <memory>
#include <optional>
#include <string>
#include <thread>
#include <utility>
#include <vector>

namespace agentflow::agent {

struct FetchConfig {
    std::chrono::milliseconds latency {100};
    bool fail = false;
};

struct BriefingOptions {
    FetchConfig news;
    FetchConfig weather;
    FetchConfig stocks;
};

/**
 * Daily-briefing agent: three independent fetches (news, weather, stocks)
 * gathered concurrently, then one synthesis step.
 *
 * Each fetch sleeps for its configured latency on whatever thread the
 * executor gives it, then calls the matching registry tool. A fetch with
 * `fail` set reports a ToolExecution error naming the step.
 */
class Briefing {
public:
    explicit Briefing(BriefingOptions options = {},
                      std::shared_ptr<const ToolRegistry> registry = std::make_shared<const ToolRegistry>(default_registry()))
        : options_(options)
        , registry_(std::move(registry))
    {
    }

    [[nodiscard]] Flow<AgentState, std::string> fetch_news(const AgentState& state, const std::string& query) const
    {
        return fetch("news", options_.news, state, query);
    }

    [[nodiscard]] Flow<AgentState, std::string> fetch_weather(const AgentState& state, const std::string& query) const
    {
        return fetch("weather", options_.weather, state, query);
    }

    [[nodiscard]] Flow<AgentState, std::string> fetch_stocks(const AgentState& state, const std::string& query) const
    {
        return fetch("stocks", options_.stocks, state, query);
    }

    /// One bullet per gathered payload, in the order given.
    static Flow<AgentState, std::string> synthesize(const AgentState& state, const std::vector<std::string>& values)
    {
        std::string text = "Daily Briefing";
        for (const auto& v : values) {
            text += "\n- " + v;
        }
        return success(state.with_history("Synthesized daily briefing."), std::move(text));
    }

    /// The three fetch flows, each seeded with (state, query), in news/weather/stocks order.
    [[nodiscard]] std::vector<AsyncFlow<AgentState, std::string>> fetch_flows(const AgentState& state,
                                                                              const std::string& query) const
    {
        auto self = *this;
        return {
            async::start(state, query).then([self](const AgentState& s, const std::string& q) { return self.fetch_news(s, q); }),
            async::start(state, query).then([self](const AgentState& s, const std::string& q) { return self.fetch_weather(s, q); }),
            async::start(state, query).then([self](const AgentState& s, const std::string& q) { return self.fetch_stocks(s, q); }),
        };
    }

    /// gather(fetches) then synthesize. Without a merge strategy the
    /// synthesized state descends from the stocks fetch alone.
    [[nodiscard]] AsyncFlow<AgentState, std::string>
    daily_briefing(const AgentState& state,
                   const std::string& query,
                   std::optional<MergeStrategy<AgentState>> merge = std::nullopt) const
    {
        return async::gather(fetch_flows(state, query), std::move(merge)).then(&Briefing::synthesize);
    }

private:
    Flow<AgentState, std::string>
    fetch(const std::string& source, const FetchConfig& config, const AgentState& state, const std::string& query) const
    {
        if (config.latency.count() > 0) {
            std::this_thread::sleep_for(config.latency);
        }
        const std::string step = "fetch_" + source;
        if (config.fail) {
            return failure<std::string>(state.with_history(step + " failed."),
                                        ErrorInfo(ErrorKind::ToolExecution, step + ": " + source + " service unavailable"));
        }
        ToolResult r = registry_->run(state, ToolCall(step, source, {{"query", query}}));
        if (r.is_error) {
            return failure<std::string>(state.with_history(step + " failed."),
                                        ErrorInfo(ErrorKind::ToolExecution, step + ": " + r.content));
        }
        AgentState next = state.with_history("Fetched " + source + ": " + r.content);
        return success(std::move(next), std::move(r.content));
    }

    BriefingOptions options_;
    std::shared_ptr<const ToolRegistry> registry_;
};

} // namespace agentflow::agent

// SPDX-License-Identifier: Apache-2.0

#pragma once

#include "agentflow/agent/state.hpp"

#include <nlohmann/json.hpp>

#include <atomic>
#include <functional>
#include <map>
#include <memory>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace agentflow::agent {

/// Tool request: `tool_id` tracks the request, `arguments` is a JSON object.
class ToolCall {
public:
    ToolCall(std::string tool_id, std::string name, nlohmann::json arguments = nlohmann::json::object())
        : tool_id_(std::move(tool_id))
        , name_(std::move(name))
        , arguments_(std::move(arguments))
    {
        if (tool_id_.empty()) {
            throw std::invalid_argument("ToolCall tool_id must not be empty");
        }
        if (name_.empty()) {
            throw std::invalid_argument("ToolCall name must not be empty");
        }
        if (!arguments_.is_object()) {
            throw std::invalid_argument("ToolCall arguments must be a JSON object");
        }
    }

    [[nodiscard]] const std::string& tool_id() const noexcept { return tool_id_; }
    [[nodiscard]] const std::string& name() const noexcept { return name_; }
    [[nodiscard]] const nlohmann::json& arguments() const noexcept { return arguments_; }

    /// Top-level string argument, or `fallback` when absent or not a string.
    [[nodiscard]] std::string argument(const std::string& key, std::string fallback = {}) const
    {
        auto it = arguments_.find(key);
        if (it == arguments_.end() || !it->is_string()) {
            return fallback;
        }
        return it->get<std::string>();
    }

    friend bool operator==(const ToolCall&, const ToolCall&) = default;

private:
    std::string tool_id_;
    std::string name_;
    nlohmann::json arguments_;
};

struct ToolResult {
    std::string tool_id;
    std::string content;
    bool is_error = false;

    friend bool operator==(const ToolResult&, const ToolResult&) = default;
};

using Tool = std::function<ToolResult(const AgentState&, const ToolCall&)>;

/// Produces "tool-1", "tool-2", ... for one pipeline run.
class ToolIdSequence {
public:
    std::string next() { return "tool-" + std::to_string(++counter_); }

private:
    std::atomic<unsigned long long> counter_ {0};
};

/**
 * Name -> tool lookup. Built once, then only read while flows run, so
 * concurrent `run` calls are safe. Re-registering a name replaces the old
 * tool and leaves a notice.
 */
class ToolRegistry {
public:
    ToolRegistry& add(std::string name, Tool tool)
    {
        auto [it, inserted] = tools_.insert_or_assign(name, std::move(tool));
        if (!inserted) {
            notices_.push_back("replaced tool '" + name + "'");
        }
        return *this;
    }

    [[nodiscard]] bool contains(const std::string& name) const { return tools_.contains(name); }

    [[nodiscard]] std::vector<std::string> names() const
    {
        std::vector<std::string> out;
        for (const auto& [name, _] : tools_) {
            out.push_back(name);
        }
        return out;
    }

    [[nodiscard]] const std::vector<std::string>& notices() const noexcept { return notices_; }

    /// Dispatches by exact name. Unknown tools and throwing tools yield an
    /// error result rather than an exception.
    [[nodiscard]] ToolResult run(const AgentState& state, const ToolCall& call) const
    {
        auto it = tools_.find(call.name());
        if (it == tools_.end()) {
            return {call.tool_id(), "Unknown tool: " + call.name(), true};
        }
        try {
            ToolResult r = it->second(state, call);
            r.tool_id = call.tool_id();
            return r;
        } catch (const std::exception& e) {
            return {call.tool_id(), "Tool '" + call.name() + "' raised: " + e.what(), true};
        }
    }

private:
    std::map<std::string, Tool> tools_;
    std::vector<std::string> notices_;
};

// Canned tool payloads. None of this text means anything beyond being stable.
namespace payloads {
inline constexpr const char* news = "News: central banks hold rates steady; tech earnings beat forecasts.";
inline constexpr const char* weather = "Weather: 18C and partly cloudy, light wind from the west.";
inline constexpr const char* stocks = "Stocks: index futures up 0.4%, bond yields flat.";
inline constexpr const char* market_data = "Market data: segment revenue 4.2B, growth 7.5% year over year.";
} // namespace payloads

/// Deterministic snippet for the mock `search` tool.
inline std::string search_snippet(const std::string& query)
{
    return "Top result for '" + query
        + "': a monad is a design pattern that sequences computations while carrying context "
          "such as state, failure, or effects.";
}

inline Tool fixed_tool(std::string content)
{
    return [content = std::move(content)](const AgentState&, const ToolCall& call) {
        return ToolResult {call.tool_id(), content, false};
    };
}

/// Tool that always reports `message` as an error.
inline Tool failing_tool(std::string message)
{
    return [message = std::move(message)](const AgentState&, const ToolCall& call) {
        return ToolResult {call.tool_id(), message, true};
    };
}

/// search, news, weather, stocks and market_data, all deterministic.
inline ToolRegistry default_registry()
{
    ToolRegistry registry;
    registry.add("search", [](const AgentState&, const ToolCall& call) {
        return ToolResult {call.tool_id(), search_snippet(call.argument("query")), false};
    });
    registry.add("news", fixed_tool(payloads::news));
    registry.add("weather", fixed_tool(payloads::weather));
    registry.add("stocks", fixed_tool(payloads::stocks));
    registry.add("market_data", fixed_tool(payloads::market_data));
    return registry;
}

} // namespace agentflow::agent

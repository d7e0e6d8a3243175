// SPDX-License-Identifier: Apache-2.0

#pragma once

#include "agentflow/agent/model_client.hpp"
#include "agentflow/agent/state.hpp"
#include "agentflow/agent/tools.hpp"
#include "agentflow/async_flow.hpp"
#include "agentflow/flow.hpp"

#include <memory>
#include <string>
#include <utility>

// The four research-agent steps and the chains built from them.

namespace agentflow::agent {

namespace detail {
inline std::string trim(std::string s)
{
    const char* ws = " \t\r\n";
    auto first = s.find_first_not_of(ws);
    if (first == std::string::npos) {
        return {};
    }
    auto last = s.find_last_not_of(ws);
    return s.substr(first, last - first + 1);
}
} // namespace detail

/// Asks the model which tool to call and records the plan.
inline Flow<AgentState, ToolCall>
plan_action(const AgentState& state, const std::string& task, const ModelClient& client, ToolIdSequence& ids)
{
    std::string name = detail::trim(client.complete(tool_selection_prompt(task)));
    ToolCall call(ids.next(), std::move(name), {{"query", task}});
    AgentState next = state.with_history("Plan: call " + call.name() + " with query='" + task + "'.");
    return success(std::move(next), std::move(call));
}

inline Flow<AgentState, ToolCall> plan_action(const AgentState& state, const std::string& task, const ModelClient& client)
{
    ToolIdSequence ids;
    return plan_action(state, task, client, ids);
}

/**
 * Dispatches `call` through `registry` and records the observation.
 *
 * The history entry is appended before the error check, so a failed flow's
 * state still shows what the tool said. Unknown names fail with
 * ToolNotFound; tool-reported errors fail with ToolExecution.
 */
inline Flow<AgentState, std::string>
execute_tool(const AgentState& state, const ToolCall& call, const ToolRegistry& registry)
{
    ToolResult result = registry.run(state, call);
    AgentState next = state.with_history("Tool Result (" + call.name() + "): " + result.content);
    if (!result.is_error) {
        return success(std::move(next), std::move(result.content));
    }
    ErrorKind kind = registry.contains(call.name()) ? ErrorKind::ToolExecution : ErrorKind::ToolNotFound;
    return failure<std::string>(std::move(next), ErrorInfo(kind, result.content));
}

inline Flow<AgentState, std::string> synthesize_answer(const AgentState& state, const std::string& tool_output)
{
    std::string answer = "Answer to '" + state.task() + "', based on the tool output. Evidence: " + tool_output;
    return success(state.with_history("Synthesized final answer."), std::move(answer));
}

inline Flow<AgentState, std::string> format_output(const AgentState& state, const std::string& answer)
{
    return success(state.with_history("Formatted response for delivery."), "Final Report:\n" + answer);
}

/// plan -> execute -> synthesize -> format, run eagerly.
inline Flow<AgentState, std::string> research_chain(const AgentState& initial,
                                                     const std::string& task,
                                                     const ModelClient& client,
                                                     const ToolRegistry& registry,
                                                     ToolIdSequence& ids)
{
    return start(initial)
        .then([&](const AgentState& s, const AgentState&) { return plan_action(s, task, client, ids); })
        .then([&](const AgentState& s, const ToolCall& call) { return execute_tool(s, call, registry); })
        .then(synthesize_answer)
        .then(format_output);
}

/// Deferred version of `research_chain`. Each run numbers its tool calls from 1.
inline AsyncFlow<AgentState, std::string> async_research_chain(AgentState initial,
                                                                std::string task,
                                                                std::shared_ptr<const ModelClient> client,
                                                                std::shared_ptr<const ToolRegistry> registry)
{
    return async::start(std::move(initial))
        .then([task = std::move(task), client](const AgentState& s, const AgentState&) {
            return plan_action(s, task, *client);
        })
        .then([registry](const AgentState& s, const ToolCall& call) { return execute_tool(s, call, *registry); })
        .then(synthesize_answer)
        .then(format_output);
}

} // namespace agentflow::agent

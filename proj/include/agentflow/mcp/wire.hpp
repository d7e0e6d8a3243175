// SPDX-License-Identifier: Apache-2.0

#pragma once

#include "agentflow/agent/state.hpp"
#include "agentflow/agent/tools.hpp"
#include "agentflow/error.hpp"
#include "agentflow/flow.hpp"

#include <nlohmann/json.hpp>

#include <stdexcept>
#include <string>
#include <string_view>

// JSON envelopes for tool requests and results.
//
//   {"type":"tools_call","payload":{"tool_id":...,"name":...,"arguments":{...}}}
//   {"type":"tool_result","payload":{"tool_id":...,"content":...,"isError":bool}}
//
// Keys are written in exactly that order, compact, UTF-8, no trailing
// newline. Argument objects are written with their keys sorted. Unknown keys
// are ignored when decoding.

namespace agentflow::mcp {

inline constexpr std::string_view tools_call_type = "tools_call";
inline constexpr std::string_view tool_result_type = "tool_result";

/// Decode failure. `error()` has kind Decode and names the offending field.
class WireError : public std::runtime_error {
public:
    explicit WireError(const std::string& message)
        : std::runtime_error(message)
        , error_(ErrorKind::Decode, message)
    {
    }

    [[nodiscard]] const ErrorInfo& error() const noexcept { return error_; }

private:
    ErrorInfo error_;
};

inline std::string encode_tool_call(const agent::ToolCall& call)
{
    nlohmann::ordered_json payload;
    payload["tool_id"] = call.tool_id();
    payload["name"] = call.name();
    payload["arguments"] = call.arguments();
    nlohmann::ordered_json envelope;
    envelope["type"] = tools_call_type;
    envelope["payload"] = std::move(payload);
    return envelope.dump();
}

inline std::string encode_tool_result(const agent::ToolResult& result)
{
    nlohmann::ordered_json payload;
    payload["tool_id"] = result.tool_id;
    payload["content"] = result.content;
    payload["isError"] = result.is_error;
    nlohmann::ordered_json envelope;
    envelope["type"] = tool_result_type;
    envelope["payload"] = std::move(payload);
    return envelope.dump();
}

namespace detail {

inline nlohmann::json payload_of(std::string_view text, std::string_view expected_type)
{
    nlohmann::json doc;
    try {
        doc = nlohmann::json::parse(text);
    } catch (const nlohmann::json::parse_error& e) {
        throw WireError(std::string("malformed JSON: ") + e.what());
    }
    if (!doc.is_object()) {
        throw WireError("envelope must be a JSON object with a \"type\" field");
    }
    auto type = doc.find("type");
    if (type == doc.end() || !type->is_string()) {
        throw WireError("missing or non-string field \"type\"");
    }
    if (type->get<std::string>() != expected_type) {
        throw WireError("field \"type\" must be \"" + std::string(expected_type) + "\", got \""
                        + type->get<std::string>() + "\"");
    }
    auto payload = doc.find("payload");
    if (payload == doc.end() || !payload->is_object()) {
        throw WireError("missing or non-object field \"payload\"");
    }
    return *payload;
}

inline std::string required_string(const nlohmann::json& payload, const char* key)
{
    auto it = payload.find(key);
    if (it == payload.end() || !it->is_string()) {
        throw WireError(std::string("missing or non-string field \"") + key + "\"");
    }
    return it->get<std::string>();
}

} // namespace detail

inline agent::ToolCall decode_tool_call(std::string_view text)
{
    nlohmann::json payload = detail::payload_of(text, tools_call_type);
    std::string tool_id = detail::required_string(payload, "tool_id");
    if (tool_id.empty()) {
        throw WireError("field \"tool_id\" must not be empty");
    }
    std::string name = detail::required_string(payload, "name");
    if (name.empty()) {
        throw WireError("field \"name\" must not be empty");
    }
    auto args = payload.find("arguments");
    if (args == payload.end() || !args->is_object()) {
        throw WireError("missing or non-object field \"arguments\"");
    }
    return agent::ToolCall(std::move(tool_id), std::move(name), *args);
}

inline agent::ToolResult decode_tool_result(std::string_view text)
{
    nlohmann::json payload = detail::payload_of(text, tool_result_type);
    agent::ToolResult result;
    result.tool_id = detail::required_string(payload, "tool_id");
    result.content = detail::required_string(payload, "content");
    auto flag = payload.find("isError");
    if (flag == payload.end() || !flag->is_boolean()) {
        throw WireError("missing or non-boolean field \"isError\"");
    }
    result.is_error = flag->get<bool>();
    return result;
}

/// Packages a step outcome as a tool result: the failure track becomes isError.
inline agent::ToolResult flow_to_tool_result(const Flow<agent::AgentState, std::string>& flow, std::string tool_id)
{
    if (flow.is_successful()) {
        return {std::move(tool_id), flow.value(), false};
    }
    return {std::move(tool_id), flow.error()->message(), true};
}

/// Reads a tool result back onto the flow tracks.
inline Flow<agent::AgentState, std::string> tool_result_to_flow(agent::AgentState state, const agent::ToolResult& result)
{
    if (result.is_error) {
        return failure<std::string>(std::move(state), ErrorInfo(ErrorKind::ToolExecution,
                                                                result.content.empty() ? "tool reported an error" : result.content));
    }
    return success(std::move(state), result.content);
}

} // namespace agentflow::mcp

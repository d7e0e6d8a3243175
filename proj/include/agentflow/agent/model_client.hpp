// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <utility>

namespace agentflow::agent {

/// Pluggable model invocation.
class ModelClient {
public:
    virtual ~ModelClient() = default;
    [[nodiscard]] virtual std::string complete(const std::string& prompt) const = 0;
};

inline std::string tool_selection_prompt(std::string_view task)
{
    return "Select a tool for the task: " + std::string(task);
}

inline std::string decomposition_prompt(std::string_view goal)
{
    return "Decompose the goal '" + std::string(goal)
        + "' into sub-agent roles. Answer with one role per line as role|pipeline|prompt.";
}

inline std::string draft_prompt(std::string_view topic) { return "Draft a section: " + std::string(topic); }
inline std::string refine_prompt(std::string_view text) { return "Refine the prose: " + std::string(text); }

/**
 * Deterministic stand-in for a language model: the reply is a pure function
 * of the prompt and of the construction-time options.
 *
 *  - tool selection   -> "search", or `redirect_tool` when set
 *  - decomposition    -> SearchAgent / DataAgent / WriterAgent lines, or
 *                        nothing for an empty goal
 *  - draft / refine   -> the text with a "Draft:" / "Refined:" marker
 *  - anything else    -> "Acknowledged: <prompt>"
 */
class MockModelClient final : public ModelClient {
public:
    struct Options {
        std::optional<std::string> redirect_tool;
    };

    MockModelClient() = default;
    explicit MockModelClient(Options options)
        : options_(std::move(options))
    {
    }

    [[nodiscard]] std::string complete(const std::string& prompt) const override
    {
        if (prompt.starts_with("Select a tool for the task: ")) {
            return options_.redirect_tool.value_or("search");
        }
        if (auto rest = after(prompt, "Decompose the goal '")) {
            auto end = rest->rfind("' into sub-agent roles.");
            std::string goal(rest->substr(0, end == std::string_view::npos ? rest->size() : end));
            if (goal.empty()) {
                return {};
            }
            return "SearchAgent|search|Find background sources on: " + goal + "\n"
                + "DataAgent|data|Collect key figures for: " + goal + "\n"
                + "WriterAgent|writer|Write the summary section for: " + goal + "\n";
        }
        if (auto rest = after(prompt, "Draft a section: ")) {
            return "Draft: " + std::string(*rest);
        }
        if (auto rest = after(prompt, "Refine the prose: ")) {
            return "Refined: " + std::string(*rest);
        }
        return "Acknowledged: " + prompt;
    }

private:
    static std::optional<std::string_view> after(std::string_view text, std::string_view prefix)
    {
        if (!text.starts_with(prefix)) {
            return std::nullopt;
        }
        return text.substr(prefix.size());
    }

    Options options_;
};

} // namespace agentflow::agent

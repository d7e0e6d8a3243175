// SPDX-License-Identifier: Apache-2.0

#pragma once

#include "agentflow/agent/model_client.hpp"
#include "agentflow/agent/state.hpp"
#include "agentflow/agent/steps.hpp"
#include "agentflow/agent/tools.hpp"
#include "agentflow/async_flow.hpp"
#include "agentflow/flow.hpp"

#include <chrono>
#include <map>
#include <memory>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <thread>
#include <utility>
#include <vector>

namespace agentflow::meta {

using agent::AgentState;

enum class Pipeline { Search, Data, Writer };

constexpr std::string_view to_string(Pipeline p) noexcept
{
    switch (p) {
    case Pipeline::Search: return "search";
    case Pipeline::Data: return "data";
    case Pipeline::Writer: return "writer";
    }
    return "search";
}

inline std::optional<Pipeline> parse_pipeline(std::string_view text)
{
    if (text == "search") return Pipeline::Search;
    if (text == "data") return Pipeline::Data;
    if (text == "writer") return Pipeline::Writer;
    return std::nullopt;
}

/// A sub-agent to spawn: its role label, its generated prompt, and which step template it runs.
class SubAgentSpec {
public:
    SubAgentSpec(std::string role, std::string prompt, Pipeline pipeline)
        : role_(std::move(role))
        , prompt_(std::move(prompt))
        , pipeline_(pipeline)
    {
        if (role_.empty() || prompt_.empty()) {
            throw std::invalid_argument("SubAgentSpec role and prompt must not be empty");
        }
    }

    [[nodiscard]] const std::string& role() const noexcept { return role_; }
    [[nodiscard]] const std::string& prompt() const noexcept { return prompt_; }
    [[nodiscard]] Pipeline pipeline() const noexcept { return pipeline_; }

    friend bool operator==(const SubAgentSpec&, const SubAgentSpec&) = default;

private:
    std::string role_;
    std::string prompt_;
    Pipeline pipeline_;
};

/// State threaded through the meta-agent's own chain.
class MetaState {
public:
    MetaState() = default;
    explicit MetaState(std::string goal)
        : goal_(std::move(goal))
    {
    }

    [[nodiscard]] const std::string& goal() const noexcept { return goal_; }
    [[nodiscard]] const std::optional<std::vector<SubAgentSpec>>& plan() const noexcept { return plan_; }
    [[nodiscard]] const std::vector<std::string>& sub_reports() const noexcept { return sub_reports_; }
    [[nodiscard]] const std::vector<std::string>& log() const noexcept { return log_; }

    [[nodiscard]] MetaState with_plan(std::vector<SubAgentSpec> plan) const
    {
        MetaState next = *this;
        next.plan_ = std::move(plan);
        return next;
    }

    [[nodiscard]] MetaState with_reports(std::vector<std::string> reports) const
    {
        MetaState next = *this;
        next.sub_reports_ = std::move(reports);
        return next;
    }

    [[nodiscard]] MetaState with_log(std::string entry) const
    {
        MetaState next = *this;
        next.log_.push_back(std::move(entry));
        return next;
    }

    friend bool operator==(const MetaState&, const MetaState&) = default;

private:
    std::string goal_;
    std::optional<std::vector<SubAgentSpec>> plan_;
    std::vector<std::string> sub_reports_;
    std::vector<std::string> log_;
};

/**
 * Parses model output in the line format `role|pipeline|prompt`.
 *
 * Blank lines are skipped. Anything else that does not parse is reported by
 * line number through the returned error.
 */
inline std::pair<std::vector<SubAgentSpec>, std::optional<ErrorInfo>> parse_specs(std::string_view text)
{
    std::vector<SubAgentSpec> specs;
    std::istringstream in {std::string(text)};
    std::string line;
    int line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        line = agent::detail::trim(line);
        if (line.empty()) {
            continue;
        }
        auto bar1 = line.find('|');
        auto bar2 = bar1 == std::string::npos ? std::string::npos : line.find('|', bar1 + 1);
        if (bar2 == std::string::npos) {
            return {{}, ErrorInfo(ErrorKind::Decode, "sub-agent line " + std::to_string(line_no) + ": expected role|pipeline|prompt")};
        }
        std::string role = agent::detail::trim(line.substr(0, bar1));
        std::string pipeline = agent::detail::trim(line.substr(bar1 + 1, bar2 - bar1 - 1));
        std::string prompt = agent::detail::trim(line.substr(bar2 + 1));
        auto kind = parse_pipeline(pipeline);
        if (!kind) {
            return {{}, ErrorInfo(ErrorKind::Decode, "sub-agent line " + std::to_string(line_no) + ": unknown pipeline '" + pipeline + "'")};
        }
        if (role.empty() || prompt.empty()) {
            return {{}, ErrorInfo(ErrorKind::Decode, "sub-agent line " + std::to_string(line_no) + ": empty role or prompt")};
        }
        specs.emplace_back(std::move(role), std::move(prompt), *kind);
    }
    return {std::move(specs), std::nullopt};
}

/// Meta-prompts the model for a decomposition of `goal` and records the plan.
inline Flow<MetaState, std::vector<SubAgentSpec>>
decompose(const MetaState& state, const std::string& goal, const agent::ModelClient& client)
{
    using Out = Flow<MetaState, std::vector<SubAgentSpec>>;
    auto [specs, error] = parse_specs(client.complete(agent::decomposition_prompt(goal)));
    if (error) {
        return Out::failure(state.with_log("Decomposition rejected."), *error);
    }
    if (specs.empty()) {
        return Out::failure(state.with_log("Decomposition rejected."),
                            ErrorInfo(ErrorKind::Other, "decomposition produced no sub-agents for goal '" + goal + "'"));
    }
    std::string summary = "Decomposed goal into " + std::to_string(specs.size()) + " sub-agents:";
    for (const auto& s : specs) {
        summary += " " + s.role() + "(" + std::string(to_string(s.pipeline())) + ")";
    }
    return Out::success(state.with_plan(specs).with_log(std::move(summary)), specs);
}

// Sub-agent step templates.
namespace steps {

inline Flow<AgentState, agent::ToolCall> plan_search(const AgentState& state, const std::string& prompt)
{
    agent::ToolCall call("tool-1", "search", {{"query", prompt}});
    return success(state.with_history("plan_search: call search with query='" + prompt + "'."), std::move(call));
}

inline Flow<AgentState, std::string>
query_api(const AgentState& state, const std::string& prompt, const agent::ToolRegistry& registry, const std::string& role)
{
    agent::ToolResult r = registry.run(state, agent::ToolCall("tool-1", "market_data", {{"query", prompt}}));
    AgentState next = state.with_history("query_api: " + r.content);
    if (r.is_error) {
        return failure<std::string>(std::move(next), ErrorInfo(ErrorKind::ToolExecution, role + " query_api failed: " + r.content));
    }
    return success(std::move(next), std::move(r.content));
}

inline Flow<AgentState, std::string> validate_data(const AgentState& state, const std::string& data)
{
    if (data.empty()) {
        return failure<std::string>(state.with_history("validate_data: empty dataset."),
                                    ErrorInfo(ErrorKind::Other, "validate_data: empty dataset"));
    }
    return success(state.with_history("validate_data: ok."), "Validated " + data);
}

inline Flow<AgentState, std::string> draft_section(const AgentState& state, const std::string& prompt)
{
    return success(state.with_history("draft_section: drafted."), "Draft: " + prompt);
}

inline Flow<AgentState, std::string> refine_prose(const AgentState& state, const std::string& draft)
{
    return success(state.with_history("refine_prose: refined."), "Refined: " + draft);
}

} // namespace steps

struct SubAgentOptions {
    /// Artificial delay before a sub-agent's first step, keyed by role.
    std::map<std::string, std::chrono::milliseconds> latency;
    std::chrono::milliseconds default_latency {0};

    [[nodiscard]] std::chrono::milliseconds latency_for(const std::string& role) const
    {
        auto it = latency.find(role);
        return it == latency.end() ? default_latency : it->second;
    }
};

/**
 * Builds the cold sub-agent chain for `spec`, seeded with
 * AgentState{task = prompt} and the prompt as the initial value.
 *
 *   Search: plan_search -> execute_tool
 *   Data:   query_api   -> validate_data
 *   Writer: draft_section -> refine_prose
 */
inline AsyncFlow<AgentState, std::string> instantiate(const SubAgentSpec& spec,
                                                       std::shared_ptr<const agent::ToolRegistry> registry,
                                                       const SubAgentOptions& options = {})
{
    auto delay = options.latency_for(spec.role());
    auto seeded = async::start(AgentState(spec.prompt()), spec.prompt());
    auto first = [delay](auto step) {
        return [delay, step](const AgentState& s, const std::string& v) {
            if (delay.count() > 0) {
                std::this_thread::sleep_for(delay);
            }
            return step(s, v);
        };
    };
    switch (spec.pipeline()) {
    case Pipeline::Search:
        return seeded.then(first(steps::plan_search))
            .then([registry](const AgentState& s, const agent::ToolCall& call) { return agent::execute_tool(s, call, *registry); });
    case Pipeline::Data:
        return seeded
            .then(first([registry, role = spec.role()](const AgentState& s, const std::string& prompt) {
                return steps::query_api(s, prompt, *registry, role);
            }))
            .then(steps::validate_data);
    case Pipeline::Writer:
        return seeded.then(first(steps::draft_section)).then(steps::refine_prose);
    }
    throw std::logic_error("unhandled pipeline");
}

/// Combined report: one "## <role>" section per sub-agent, in plan order.
inline Flow<MetaState, std::string> synthesize_report(const MetaState& state, const std::vector<std::string>& reports)
{
    std::string text = "Report: " + state.goal();
    const auto& plan = *state.plan();
    for (std::size_t i = 0; i < reports.size(); ++i) {
        text += "\n\n## " + plan.at(i).role() + "\n" + reports[i];
    }
    return success(state.with_log("Synthesized combined report."), std::move(text));
}

/**
 * The meta-agent chain:
 *
 *   decompose -> instantiate every spec -> gather -> synthesize_report
 *
 * Sub-agents run concurrently. Their outputs land in MetaState::sub_reports
 * in plan order, with one log line each; their AgentStates are dropped. Any
 * sub-agent failure fails the whole chain with the first failure in plan
 * order.
 */
inline AsyncFlow<MetaState, std::string> orchestrate(std::string goal,
                                                      std::shared_ptr<const agent::ModelClient> client,
                                                      std::shared_ptr<const agent::ToolRegistry> registry,
                                                      SubAgentOptions options = {})
{
    auto spawn = [registry, options](const MetaState& ms, const std::vector<SubAgentSpec>& specs) {
        std::vector<AsyncFlow<AgentState, std::string>> flows;
        flows.reserve(specs.size());
        for (const auto& spec : specs) {
            flows.push_back(instantiate(spec, registry, options));
        }
        return async::gather(std::move(flows))
            .transform([ms, specs](const Flow<AgentState, std::vector<std::string>>& r) {
                using Out = Flow<MetaState, std::vector<std::string>>;
                if (!r.is_successful()) {
                    return Out::failure(ms.with_log("Sub-agent failed: " + r.error()->message()), *r.error());
                }
                MetaState next = ms.with_reports(r.value());
                for (std::size_t i = 0; i < specs.size(); ++i) {
                    next = next.with_log("Sub-agent " + specs[i].role() + " reported: " + r.value()[i]);
                }
                return Out::success(std::move(next), r.value());
            });
    };
    return async::start(MetaState(goal))
        .then([goal, client](const MetaState& ms, const MetaState&) { return decompose(ms, goal, *client); })
        .then(std::move(spawn))
        .then(synthesize_report);
}

} // namespace agentflow::meta

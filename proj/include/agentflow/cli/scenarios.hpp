// SPDX-License-Identifier: Apache-2.0

#pragma once

#include "agentflow/agent/briefing.hpp"
#include "agentflow/agent/model_client.hpp"
#include "agentflow/agent/state.hpp"
#include "agentflow/agent/steps.hpp"
#include "agentflow/agent/tools.hpp"
#include "agentflow/executor.hpp"
#include "agentflow/meta/orchestrator.hpp"

#include <nlohmann/json.hpp>

#include <chrono>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <memory>
#include <optional>
#include <ostream>
#include <string>
#include <string_view>
#include <vector>

// Runnable versions of the three example agents, with failure injection and
// JSON-lines traces. The `agentflow` executable is a thin argument parser
// over `run`.

namespace agentflow::cli {

enum class Scenario { Research, Briefing, Meta };

inline std::optional<Scenario> parse_scenario(std::string_view s)
{
    if (s == "research") return Scenario::Research;
    if (s == "briefing") return Scenario::Briefing;
    if (s == "meta") return Scenario::Meta;
    return std::nullopt;
}

/// The only failure each scenario knows how to inject.
constexpr std::string_view injectable_failure(Scenario s) noexcept
{
    switch (s) {
    case Scenario::Research: return "guess-tool";
    case Scenario::Briefing: return "weather";
    case Scenario::Meta: return "data-agent";
    }
    return "";
}

inline constexpr const char* default_task = "What is a Monad?";
inline constexpr const char* default_briefing_query = "Morning briefing";
inline constexpr const char* default_goal = "Produce a market research report";

struct RunConfig {
    Scenario scenario = Scenario::Research;
    std::optional<std::string> inject_failure;
    std::int64_t latency_ms = 100;
    std::optional<std::filesystem::path> trace_path;
    std::uint64_t seed = 0; // unused by the bundled scenarios
    std::optional<std::string> goal;
    std::optional<std::string> task;
};

enum ExitCode : int { Success = 0, FlowFailed = 1, ConfigError = 2 };

/// Returns a message when the configuration is unusable.
inline std::optional<std::string> validate(const RunConfig& config)
{
    if (config.latency_ms < 0) {
        return "--latency-ms must be >= 0";
    }
    if (config.inject_failure && *config.inject_failure != injectable_failure(config.scenario)) {
        return "--inject-failure '" + *config.inject_failure + "' does not apply to this scenario (expected '"
            + std::string(injectable_failure(config.scenario)) + "')";
    }
    return std::nullopt;
}

/// Everything a scenario run produced, before it is printed.
struct Outcome {
    bool ok = false;
    std::string report;                 // stdout body on success
    std::optional<ErrorInfo> error;
    std::vector<std::string> entries;   // final state's history, in order
    std::vector<nlohmann::ordered_json> records; // extra trace lines before the footer
    std::vector<std::string> details;   // extra stdout lines
    std::int64_t wall_ms = 0;
};

/**
 * JSON-lines trace: one {"seq","entry"} line per history entry (seq from 1),
 * then any extra records, then the footer
 * {"status","error","wall_ms"}.
 */
inline std::string render_trace(const Outcome& outcome)
{
    std::string out;
    std::int64_t seq = 0;
    for (const auto& entry : outcome.entries) {
        nlohmann::ordered_json line;
        line["seq"] = ++seq;
        line["entry"] = entry;
        out += line.dump() + "\n";
    }
    for (const auto& record : outcome.records) {
        out += record.dump() + "\n";
    }
    nlohmann::ordered_json footer;
    footer["status"] = outcome.ok ? "success" : "failure";
    footer["error"] = outcome.error ? nlohmann::ordered_json(outcome.error->message()) : nlohmann::ordered_json(nullptr);
    footer["wall_ms"] = outcome.wall_ms;
    out += footer.dump() + "\n";
    return out;
}

namespace detail {

using Clock = std::chrono::steady_clock;

inline std::int64_t elapsed_ms(Clock::time_point since)
{
    return std::chrono::duration_cast<std::chrono::milliseconds>(Clock::now() - since).count();
}

template <typename V>
void absorb(Outcome& outcome, const Flow<agent::AgentState, V>& flow)
{
    outcome.ok = flow.is_successful();
    outcome.entries = flow.state().history();
    outcome.error = flow.error();
}

} // namespace detail

inline Outcome run_research(const RunConfig& config)
{
    agent::MockModelClient::Options options;
    if (config.inject_failure) {
        options.redirect_tool = "guess";
    }
    agent::MockModelClient client(options);
    agent::ToolRegistry registry = agent::default_registry();
    agent::ToolIdSequence ids;
    std::string task = config.task.value_or(default_task);

    Outcome outcome;
    auto t0 = detail::Clock::now();
    auto flow = agent::research_chain(agent::AgentState(task), task, client, registry, ids);
    outcome.wall_ms = detail::elapsed_ms(t0);
    detail::absorb(outcome, flow);
    if (flow.is_successful()) {
        outcome.report = flow.value();
    }
    return outcome;
}

inline Outcome run_briefing(const RunConfig& config, Executor& executor)
{
    agent::FetchConfig fetch {std::chrono::milliseconds(config.latency_ms), false};
    agent::BriefingOptions options {fetch, fetch, fetch};
    options.weather.fail = config.inject_failure.has_value();
    agent::Briefing briefing(options);
    std::string query = config.task.value_or(default_briefing_query);

    Outcome outcome;
    auto t0 = detail::Clock::now();
    auto flow = briefing.daily_briefing(agent::AgentState(query), query, agent::merge_histories).run(executor);
    outcome.wall_ms = detail::elapsed_ms(t0);
    detail::absorb(outcome, flow);
    if (flow.is_successful()) {
        outcome.report = flow.value();
    }
    return outcome;
}

inline Outcome run_meta(const RunConfig& config, Executor& executor)
{
    auto client = std::make_shared<const agent::MockModelClient>();
    agent::ToolRegistry registry = agent::default_registry();
    if (config.inject_failure) {
        registry.add("market_data", agent::failing_tool("market data feed unavailable"));
    }
    meta::SubAgentOptions options;
    options.default_latency = std::chrono::milliseconds(config.latency_ms);
    std::string goal = config.goal.value_or(default_goal);

    Outcome outcome;
    auto t0 = detail::Clock::now();
    auto flow = meta::orchestrate(goal, client, std::make_shared<const agent::ToolRegistry>(std::move(registry)), options)
                    .run(executor);
    outcome.wall_ms = detail::elapsed_ms(t0);

    outcome.ok = flow.is_successful();
    outcome.error = flow.error();
    outcome.entries = flow.state().log();
    if (const auto& plan = flow.state().plan()) {
        nlohmann::ordered_json record;
        record["plan"] = nlohmann::ordered_json::array();
        for (const auto& spec : *plan) {
            nlohmann::ordered_json s;
            s["role"] = spec.role();
            s["pipeline"] = meta::to_string(spec.pipeline());
            s["prompt"] = spec.prompt();
            record["plan"].push_back(std::move(s));
        }
        outcome.records.push_back(std::move(record));
    }
    if (flow.is_successful()) {
        outcome.report = flow.value();
        outcome.details.push_back("Sub-agent logs:");
        for (const auto& line : flow.state().log()) {
            outcome.details.push_back("  " + line);
        }
    }
    return outcome;
}

inline Outcome execute(const RunConfig& config, Executor& executor)
{
    switch (config.scenario) {
    case Scenario::Research: return run_research(config);
    case Scenario::Briefing: return run_briefing(config, executor);
    case Scenario::Meta: return run_meta(config, executor);
    }
    return {};
}

/// Validates, runs, prints and writes the trace. Returns the process exit code.
inline int run(const RunConfig& config, std::ostream& out, std::ostream& err)
{
    if (auto problem = validate(config)) {
        err << "config error: " << *problem << "\n";
        return ConfigError;
    }
    std::ofstream trace;
    if (config.trace_path) {
        trace.open(*config.trace_path, std::ios::binary | std::ios::trunc);
        if (!trace) {
            err << "config error: cannot write trace to " << config.trace_path->string() << "\n";
            return ConfigError;
        }
    }
    Outcome outcome;
    {
        ThreadExecutor executor;
        outcome = execute(config, executor);
    }
    if (outcome.ok) {
        out << outcome.report << "\n";
        for (const auto& line : outcome.details) {
            out << line << "\n";
        }
    } else {
        err << "flow failed: " << outcome.error->describe() << "\n";
    }
    if (trace.is_open()) {
        trace << render_trace(outcome);
    }
    return outcome.ok ? Success : FlowFailed;
}

} // namespace agentflow::cli

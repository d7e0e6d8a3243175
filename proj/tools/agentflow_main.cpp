// SPDX-License-Identifier: Apache-2.0

#include "agentflow/cli/scenarios.hpp"

#include "CLI11.hpp"

#include <iostream>
#include <string>

int main(int argc, char** argv)
{
    using namespace agentflow::cli;

    CLI::App app {"Run the bundled agent scenarios against deterministic mocks."};
    app.name("agentflow");

    std::string scenario;
    std::string inject;
    std::string trace;
    std::string goal;
    std::string task;
    RunConfig config;

    app.add_option("scenario", scenario, "research | briefing | meta")
        ->required()
        ->check(CLI::IsMember({"research", "briefing", "meta"}));
    app.add_option("--inject-failure", inject, "guess-tool (research), weather (briefing), data-agent (meta)");
    app.add_option("--latency-ms", config.latency_ms, "Simulated per-fetch delay in milliseconds")
        ->check(CLI::NonNegativeNumber);
    app.add_option("--trace", trace, "Write a JSON-lines trace to this file");
    app.add_option("--goal", goal, "Goal for the meta scenario");
    app.add_option("--task", task, "Task (research) or query (briefing)");
    app.add_option("--seed", config.seed, "Reserved for randomized harnesses");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return ConfigError;
    }

    config.scenario = *parse_scenario(scenario);
    if (app.count("--inject-failure") > 0) config.inject_failure = inject;
    if (app.count("--trace") > 0) config.trace_path = trace;
    if (app.count("--goal") > 0) config.goal = goal;
    if (app.count("--task") > 0) config.task = task;

    return run(config, std::cout, std::cerr);
}

// SPDX-License-Identifier: Apache-2.0

#include "agentflow/agent/briefing.hpp"
#include "agentflow/agent/model_client.hpp"
#include "agentflow/agent/state.hpp"
#include "agentflow/agent/steps.hpp"
#include "agentflow/agent/tools.hpp"

#include <gtest/gtest.h>

#include <atomic>
#include <chrono>
#include <memory>
#include <random>
#include <stdexcept>
#include <string>
#include <vector>

using namespace agentflow;
using namespace agentflow::agent;
using namespace std::chrono_literals;

namespace {

class ThrowingClient final : public ModelClient {
public:
    std::string complete(const std::string&) const override { throw std::runtime_error("model offline"); }
};

bool starts_with(const std::string& s, const std::string& prefix) { return s.rfind(prefix, 0) == 0; }

} // namespace

TEST(AgentState, WithHistoryAppends)
{
    AgentState s("t");
    auto one = s.with_history("Plan: x");
    EXPECT_TRUE(s.history().empty());
    EXPECT_EQ(one.history(), (std::vector<std::string> {"Plan: x"}));
    auto two = one.with_history("second");
    EXPECT_EQ(two.history(), (std::vector<std::string> {"Plan: x", "second"}));
    EXPECT_EQ(two.task(), "t");
}

TEST(AgentState, AppendSequencesMatchDirectConstruction)
{
    std::mt19937 rng(41);
    for (int i = 0; i < 100; ++i) {
        std::vector<std::string> entries(rng() % 12);
        for (auto& e : entries) {
            e = "entry-" + std::to_string(rng() % 1000);
        }
        AgentState s("task");
        for (std::size_t k = 0; k < entries.size(); ++k) {
            auto next = s.with_history(entries[k]);
            ASSERT_EQ(next.history().size(), s.history().size() + 1);
            ASSERT_TRUE(extends(next, s));
            s = next;
        }
        EXPECT_EQ(s, AgentState("task", entries));
    }
}

TEST(AgentState, MergeHistoriesKeepsSharedPrefixOnce)
{
    AgentState base = AgentState("q").with_history("root");
    std::vector<AgentState> states {base.with_history("a"), base.with_history("b").with_history("b2"), base};
    EXPECT_EQ(merge_histories(states).history(), (std::vector<std::string> {"root", "a", "b", "b2"}));
}

TEST(ToolRegistry, DefaultLookup)
{
    auto registry = default_registry();
    EXPECT_TRUE(registry.contains("search"));
    EXPECT_TRUE(registry.contains("news"));
    EXPECT_TRUE(registry.contains("weather"));
    EXPECT_TRUE(registry.contains("stocks"));
    EXPECT_FALSE(registry.contains("guess"));
}

TEST(ToolRegistry, UnknownToolIsAnErrorResult)
{
    auto r = default_registry().run(AgentState("t"), ToolCall("tool-9", "guess", {{"query", "x"}}));
    EXPECT_TRUE(r.is_error);
    EXPECT_EQ(r.tool_id, "tool-9");
    EXPECT_NE(r.content.find("guess"), std::string::npos);
}

TEST(ToolRegistry, DuplicateReplacesAndLeavesNotice)
{
    ToolRegistry registry;
    registry.add("x", fixed_tool("one"));
    registry.add("x", fixed_tool("two"));
    EXPECT_EQ(registry.run(AgentState(), ToolCall("id", "x")).content, "two");
    ASSERT_EQ(registry.notices().size(), 1U);
    EXPECT_NE(registry.notices()[0].find("'x'"), std::string::npos);
}

TEST(ToolRegistry, ThrowingToolBecomesErrorResult)
{
    ToolRegistry registry;
    registry.add("bad", [](const AgentState&, const ToolCall&) -> ToolResult { throw std::runtime_error("disk full"); });
    auto r = registry.run(AgentState(), ToolCall("id", "bad"));
    EXPECT_TRUE(r.is_error);
    EXPECT_NE(r.content.find("disk full"), std::string::npos);
}

TEST(ToolCall, RequiresIdAndName)
{
    EXPECT_THROW(ToolCall("", "search"), std::invalid_argument);
    EXPECT_THROW(ToolCall("tool-1", ""), std::invalid_argument);
    EXPECT_THROW(ToolCall("tool-1", "search", nlohmann::json::array()), std::invalid_argument);
}

TEST(ToolIdSequence, CountsFromOne)
{
    ToolIdSequence ids;
    EXPECT_EQ(ids.next(), "tool-1");
    EXPECT_EQ(ids.next(), "tool-2");
}

TEST(PlanAction, ChoosesSearchForTheTask)
{
    MockModelClient client;
    auto flow = plan_action(AgentState("What is a Monad?"), "What is a Monad?", client);
    ASSERT_TRUE(flow.is_successful());
    EXPECT_EQ(flow.value(), ToolCall("tool-1", "search", {{"query", "What is a Monad?"}}));
    EXPECT_EQ(flow.state().history().back(), "Plan: call search with query='What is a Monad?'.");
}

TEST(PlanAction, RedirectedMockPicksGuess)
{
    MockModelClient client({.redirect_tool = "guess"});
    auto flow = plan_action(AgentState("t"), "t", client);
    EXPECT_EQ(flow.value().name(), "guess");
}

TEST(PlanAction, ClientFaultIsCapturedByThen)
{
    ThrowingClient client;
    auto flow = start(AgentState("t")).then([&](const AgentState& s, const AgentState&) { return plan_action(s, "t", client); });
    ASSERT_FALSE(flow.is_successful());
    EXPECT_EQ(flow.error()->kind(), ErrorKind::StepFault);
    EXPECT_EQ(flow.error()->message(), "model offline");
}

TEST(ExecuteTool, SearchSucceeds)
{
    auto flow = execute_tool(AgentState("t"), ToolCall("tool-1", "search", {{"query", "q"}}), default_registry());
    ASSERT_TRUE(flow.is_successful());
    EXPECT_EQ(flow.value(), search_snippet("q"));
    EXPECT_NE(flow.state().history().back().find("search"), std::string::npos);
}

TEST(ExecuteTool, UnknownToolFailsAndKeepsObservation)
{
    auto flow = execute_tool(AgentState("t"), ToolCall("tool-1", "guess", {{"query", "q"}}), default_registry());
    ASSERT_FALSE(flow.is_successful());
    EXPECT_EQ(flow.error()->kind(), ErrorKind::ToolNotFound);
    EXPECT_EQ(flow.state().history().back(), "Tool Result (guess): Unknown tool: guess");
}

TEST(ExecuteTool, ToolErrorIsToolExecution)
{
    ToolRegistry registry;
    registry.add("flaky", failing_tool("rate limited"));
    auto flow = execute_tool(AgentState("t"), ToolCall("tool-1", "flaky"), registry);
    ASSERT_FALSE(flow.is_successful());
    EXPECT_EQ(flow.error()->kind(), ErrorKind::ToolExecution);
    EXPECT_EQ(flow.error()->message(), "rate limited");
}

TEST(SynthesizeAnswer, CitesEvidence)
{
    auto flow = synthesize_answer(AgentState("t"), "snippet");
    EXPECT_NE(flow.value().find("Evidence: snippet"), std::string::npos);
    EXPECT_EQ(flow.state().history().back(), "Synthesized final answer.");
}

TEST(FormatOutput, WrapsOnce)
{
    auto flow = format_output(AgentState("t"), "A");
    EXPECT_EQ(flow.value(), "Final Report:\nA");
    EXPECT_EQ(flow.state().history().size(), 1U);
    auto twice = flow.then(format_output);
    EXPECT_EQ(twice.value(), "Final Report:\nFinal Report:\nA");
}

TEST(ResearchChain, SucceedsAndIsDeterministic)
{
    MockModelClient client;
    auto registry = default_registry();
    ToolIdSequence ids1;
    ToolIdSequence ids2;
    auto a = research_chain(AgentState("What is a Monad?"), "What is a Monad?", client, registry, ids1);
    auto b = research_chain(AgentState("What is a Monad?"), "What is a Monad?", client, registry, ids2);
    ASSERT_TRUE(a.is_successful());
    EXPECT_TRUE(starts_with(a.value(), "Final Report:\n"));
    EXPECT_EQ(a, b);
    EXPECT_EQ(a.state().history().size(), 4U);
}

TEST(ResearchChain, GuessToolShortCircuits)
{
    MockModelClient client({.redirect_tool = "guess"});
    auto registry = default_registry();
    ToolIdSequence ids;
    std::atomic<int> downstream = 0;
    auto flow = start(AgentState("t"))
                    .then([&](const AgentState& s, const AgentState&) { return plan_action(s, "t", client, ids); })
                    .then([&](const AgentState& s, const ToolCall& c) { return execute_tool(s, c, registry); })
                    .then([&](const AgentState& s, const std::string& v) {
                        ++downstream;
                        return synthesize_answer(s, v);
                    })
                    .then([&](const AgentState& s, const std::string& v) {
                        ++downstream;
                        return format_output(s, v);
                    });
    ASSERT_FALSE(flow.is_successful());
    EXPECT_EQ(downstream, 0);
    EXPECT_EQ(flow.error()->kind(), ErrorKind::ToolNotFound);
    // Failure-state fidelity: plan + tool observation, nothing more.
    ASSERT_EQ(flow.state().history().size(), 2U);
    EXPECT_EQ(flow.state().history().back(), "Tool Result (guess): Unknown tool: guess");
}

TEST(ResearchChain, AsyncMatchesSync)
{
    auto client = std::make_shared<const MockModelClient>();
    auto registry = std::make_shared<const ToolRegistry>(default_registry());
    ToolIdSequence ids;
    auto sync_flow = research_chain(AgentState("q"), "q", *client, *registry, ids);
    auto pipeline = async_research_chain(AgentState("q"), "q", client, registry);
    ThreadExecutor ex;
    EXPECT_EQ(pipeline.run(ex), sync_flow);
    EXPECT_EQ(pipeline.run(ex), sync_flow);
}

TEST(Briefing, GatherKeepsSourceOrder)
{
    FetchConfig fast {5ms, false};
    Briefing briefing({fast, fast, fast});
    ThreadExecutor ex;
    auto gathered = async::gather(briefing.fetch_flows(AgentState("q"), "q")).run(ex);
    ASSERT_TRUE(gathered.is_successful());
    EXPECT_EQ(gathered.value(), (std::vector<std::string> {payloads::news, payloads::weather, payloads::stocks}));
}

TEST(Briefing, WeatherFailureFailsTheWholeGroup)
{
    FetchConfig fast {5ms, false};
    Briefing briefing({fast, {5ms, true}, fast});
    ThreadExecutor ex;
    auto flow = briefing.daily_briefing(AgentState("q"), "q").run(ex);
    ASSERT_FALSE(flow.is_successful());
    EXPECT_EQ(flow.error()->kind(), ErrorKind::ToolExecution);
    EXPECT_NE(flow.error()->message().find("fetch_weather"), std::string::npos);
}

TEST(Briefing, SynthesisMentionsEverySection)
{
    auto flow = Briefing::synthesize(AgentState("q"), {payloads::news, payloads::weather, payloads::stocks});
    const auto& text = flow.value();
    auto n = text.find("News:");
    auto w = text.find("Weather:");
    auto s = text.find("Stocks:");
    ASSERT_NE(n, std::string::npos);
    ASSERT_NE(w, std::string::npos);
    ASSERT_NE(s, std::string::npos);
    EXPECT_LT(n, w);
    EXPECT_LT(w, s);
}

TEST(Briefing, MergedHistoryHasEveryFetch)
{
    FetchConfig fast {1ms, false};
    Briefing briefing({fast, fast, fast});
    InlineExecutor ex;
    auto flow = briefing.daily_briefing(AgentState("q"), "q", merge_histories).run(ex);
    ASSERT_TRUE(flow.is_successful());
    const auto& h = flow.state().history();
    ASSERT_EQ(h.size(), 4U);
    EXPECT_EQ(h[0], std::string("Fetched news: ") + payloads::news);
    EXPECT_TRUE(starts_with(h[1], "Fetched weather"));
    EXPECT_TRUE(starts_with(h[2], "Fetched stocks"));
    EXPECT_EQ(h[3], "Synthesized daily briefing.");
}

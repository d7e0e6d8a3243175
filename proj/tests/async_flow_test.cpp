// SPDX-License-Identifier: Apache-2.0

#include "agentflow/async_flow.hpp"
#include "support/generators.hpp"

#include <gtest/gtest.h>

#include <algorithm>
#include <array>
#include <atomic>
#include <chrono>
#include <mutex>
#include <stdexcept>
#include <thread>
#include <vector>

using namespace agentflow;
using namespace std::chrono_literals;
using agentflow::testing::Gen;
using agentflow::testing::LawFlow;
using agentflow::testing::LawState;

namespace {

using AFlow = AsyncFlow<LawState, int>;

LawState tagged(int tag) { return LawState {{tag}, tag}; }

// A flow that sleeps, then records its index in `finished` and yields
// success or failure.
AFlow delayed(int index, std::chrono::milliseconds delay, bool ok, std::vector<int>* finished = nullptr,
              std::mutex* mu = nullptr)
{
    return async::start(tagged(index), index).then([=](const LawState& s, int v) {
        std::this_thread::sleep_for(delay);
        if (finished != nullptr) {
            std::lock_guard lock(*mu);
            finished->push_back(index);
        }
        if (ok) {
            return LawFlow::success(s, v * 10);
        }
        return LawFlow::failure(s, ErrorInfo(ErrorKind::ToolExecution, "flow " + std::to_string(index) + " failed"));
    });
}

} // namespace

TEST(AsyncStart, RunYieldsStartedFlow)
{
    InlineExecutor ex;
    EXPECT_EQ(async::start(tagged(1), 5).run(ex), start(tagged(1), 5));
    auto self_valued = async::start(tagged(2)).run(ex);
    EXPECT_EQ(self_valued.value(), tagged(2));
}

TEST(AsyncLift, RoundTripsFlows)
{
    InlineExecutor ex;
    auto ok = LawFlow::success(tagged(1), 3);
    auto bad = LawFlow::failure(tagged(2), ErrorInfo(ErrorKind::Other, "nope"));
    EXPECT_EQ(async::lift(ok).run(ex), ok);
    EXPECT_EQ(async::lift(bad).run(ex), bad);
}

TEST(AsyncLift, ThenMatchesSyncThen)
{
    Gen gen(23);
    InlineExecutor ex;
    for (int i = 0; i < 100; ++i) {
        LawFlow flow = gen.flow();
        auto step = gen.step();
        EXPECT_EQ(async::lift(flow).then(step).run(ex), flow.then(step));
    }
}

TEST(AsyncThen, FailureSkipsStep)
{
    InlineExecutor ex;
    std::atomic<int> calls = 0;
    auto bad = LawFlow::failure(tagged(4), ErrorInfo(ErrorKind::Other, "upstream"));
    auto out = async::lift(bad)
                   .then([&](const LawState& s, int v) {
                       ++calls;
                       return LawFlow::success(s, v);
                   })
                   .run(ex);
    EXPECT_EQ(calls, 0);
    EXPECT_EQ(out, bad);
}

TEST(AsyncThen, FaultIsCaptured)
{
    InlineExecutor ex;
    auto out = async::start(tagged(3), 1).then([](const LawState&, int) -> LawFlow { throw std::runtime_error("async boom"); }).run(ex);
    ASSERT_FALSE(out.is_successful());
    EXPECT_EQ(out.error()->kind(), ErrorKind::StepFault);
    EXPECT_EQ(out.error()->message(), "async boom");
    EXPECT_EQ(out.state(), tagged(3));
}

TEST(AsyncThen, StepMayReturnAnAsyncFlow)
{
    ThreadExecutor ex;
    auto out = async::start(tagged(1), 2)
                   .then([](const LawState& s, int v) { return async::start(s, v + 1).then([](const LawState& s2, int w) { return LawFlow::success(s2, w * 3); }); })
                   .run(ex);
    EXPECT_EQ(out, LawFlow::success(tagged(1), 9));
}

TEST(AsyncFlow, IsLazyAndCold)
{
    std::atomic<int> calls = 0;
    auto pipeline = async::start(tagged(0), 1).then([&](const LawState& s, int v) {
        ++calls;
        return LawFlow::success(s, v + 1);
    });
    auto grouped = async::gather(std::vector<AFlow> {pipeline, pipeline});
    EXPECT_EQ(calls, 0);

    InlineExecutor ex;
    auto first = pipeline.run(ex);
    auto second = pipeline.run(ex);
    EXPECT_EQ(calls, 2);
    EXPECT_EQ(first, second);
    (void)grouped.run(ex);
    EXPECT_EQ(calls, 4);
}

TEST(AsyncDefer, EscapingFaultUsesLastKnownState)
{
    InlineExecutor ex;
    auto flow = AFlow::defer(tagged(8), [](Executor&) -> LawFlow { throw std::runtime_error("thunk"); });
    auto out = flow.run(ex);
    EXPECT_EQ(out.error()->kind(), ErrorKind::StepFault);
    EXPECT_EQ(out.state(), tagged(8));
}

TEST(AsyncTransform, RehomesIntoAnotherStateType)
{
    InlineExecutor ex;
    auto out = async::start(tagged(1), 5)
                   .transform([](const LawFlow& f) {
                       return Flow<std::string, int>::success("rehomed", f.value() + 1);
                   })
                   .run(ex);
    EXPECT_EQ(out.state(), "rehomed");
    EXPECT_EQ(out.value(), 6);
}

TEST(Gather, EmptyInputFails)
{
    InlineExecutor ex;
    auto out = async::gather(std::vector<AFlow> {}).run(ex);
    ASSERT_FALSE(out.is_successful());
    EXPECT_EQ(out.error()->kind(), ErrorKind::EmptyGather);
    EXPECT_EQ(out.error()->message(), "No flows provided");
}

TEST(Gather, DefaultStateIsLastFlowsState)
{
    InlineExecutor ex;
    auto out = async::gather(std::vector<AFlow> {delayed(0, 0ms, true), delayed(1, 0ms, true), delayed(2, 0ms, true)}).run(ex);
    ASSERT_TRUE(out.is_successful());
    EXPECT_EQ(out.state(), tagged(2));
    EXPECT_EQ(out.value(), (std::vector<int> {0, 10, 20}));
}

TEST(Gather, CustomMergeOverridesDefault)
{
    InlineExecutor ex;
    MergeStrategy<LawState> sum_ticks = [](const std::vector<LawState>& states) {
        LawState merged;
        for (const auto& s : states) {
            merged.tick += s.tick;
            merged.log.insert(merged.log.end(), s.log.begin(), s.log.end());
        }
        return merged;
    };
    auto out = async::gather(std::vector<AFlow> {delayed(1, 0ms, true), delayed(2, 0ms, true)}, sum_ticks).run(ex);
    EXPECT_EQ(out.state(), (LawState {{1, 2}, 3}));
}

TEST(Gather, ThrowingMergeIsCaptured)
{
    InlineExecutor ex;
    MergeStrategy<LawState> bad = [](const std::vector<LawState>&) -> LawState { throw std::runtime_error("merge"); };
    auto out = async::gather(std::vector<AFlow> {delayed(1, 0ms, true)}, bad).run(ex);
    EXPECT_EQ(out.error()->kind(), ErrorKind::StepFault);
}

// Oracle: run each flow alone, in order, then reduce exactly as the gather
// contract says. No concurrency involved.
TEST(Gather, EveryFailurePatternReportsMinimalIndex)
{
    ThreadExecutor ex;
    InlineExecutor inline_ex;
    for (int mask = 0; mask < 8; ++mask) {
        std::vector<AFlow> flows;
        for (int i = 0; i < 3; ++i) {
            flows.push_back(delayed(i, std::chrono::milliseconds(5 * (3 - i)), ((mask >> i) & 1) == 0));
        }
        auto got = async::gather(flows).run(ex);

        std::vector<LawFlow> solo;
        for (const auto& f : flows) {
            solo.push_back(f.run(inline_ex));
        }
        auto first_bad = std::find_if(solo.begin(), solo.end(), [](const LawFlow& f) { return !f.is_successful(); });
        if (first_bad != solo.end()) {
            ASSERT_FALSE(got.is_successful()) << "mask " << mask;
            EXPECT_EQ(got.state(), first_bad->state());
            EXPECT_EQ(got.error(), first_bad->error());
        } else {
            ASSERT_TRUE(got.is_successful());
            EXPECT_EQ(got.value(), (std::vector<int> {0, 10, 20}));
        }
    }
}

TEST(Gather, ValueOrderIgnoresCompletionOrder)
{
    ThreadExecutor ex;
    std::array<int, 3> order {0, 1, 2};
    do {
        std::vector<int> finished;
        std::mutex mu;
        std::vector<AFlow> flows;
        for (int i = 0; i < 3; ++i) {
            // rank 0 finishes first
            auto delay = std::chrono::milliseconds(15 + 40 * order[static_cast<std::size_t>(i)]);
            flows.push_back(delayed(i, delay, true, &finished, &mu));
        }
        auto out = async::gather(flows).run(ex);
        ASSERT_TRUE(out.is_successful());
        EXPECT_EQ(out.value(), (std::vector<int> {0, 10, 20}));
        std::vector<int> expected_finish(3);
        for (int i = 0; i < 3; ++i) {
            expected_finish[static_cast<std::size_t>(order[static_cast<std::size_t>(i)])] = i;
        }
        EXPECT_EQ(finished, expected_finish);
    } while (std::next_permutation(order.begin(), order.end()));
}

TEST(Gather, RunsConcurrently)
{
    ThreadExecutor ex;
    constexpr auto d = 80ms;
    std::vector<AFlow> flows;
    for (int i = 0; i < 4; ++i) {
        flows.push_back(delayed(i, d, true));
    }
    auto t0 = std::chrono::steady_clock::now();
    auto out = async::gather(flows).run(ex);
    auto elapsed = std::chrono::steady_clock::now() - t0;
    ASSERT_TRUE(out.is_successful());
    EXPECT_LT(elapsed, d + d / 2);
}

TEST(Settle, ExposesEveryResult)
{
    InlineExecutor ex;
    auto out = async::settle(std::vector<AFlow> {delayed(0, 0ms, false), delayed(1, 0ms, true), delayed(2, 0ms, false)}).run(ex);
    ASSERT_TRUE(out.is_successful());
    const auto& results = out.value();
    ASSERT_EQ(results.size(), 3U);
    EXPECT_FALSE(results[0].is_successful());
    EXPECT_TRUE(results[1].is_successful());
    EXPECT_EQ(results[2].error()->message(), "flow 2 failed");
}

TEST(SyncAsyncEquivalence, RandomPipelines)
{
    Gen gen(29);
    InlineExecutor inline_ex;
    ThreadExecutor thread_ex;
    for (int i = 0; i < 200; ++i) {
        LawState s = gen.state();
        int v = gen.value();
        auto steps = gen.pipeline(8);
        LawFlow sync_flow = start(s, v);
        AFlow async_flow = async::start(s, v);
        for (const auto& step : steps) {
            sync_flow = sync_flow.then(step);
            async_flow = async_flow.then(step);
        }
        EXPECT_EQ(async_flow.run(inline_ex), sync_flow);
        if (i % 20 == 0) {
            EXPECT_EQ(async_flow.run(thread_ex), sync_flow);
        }
    }
}

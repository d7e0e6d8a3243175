// SPDX-License-Identifier: Apache-2.0

#pragma once

#include "agentflow/error.hpp"
#include "agentflow/executor.hpp"
#include "agentflow/flow.hpp"
#include "agentflow/instrumentation.hpp"

#include <concepts>
#include <functional>
#include <future>
#include <memory>
#include <optional>
#include <type_traits>
#include <utility>
#include <vector>

namespace agentflow {

template <typename S, typename V>
class AsyncFlow;

namespace detail {

template <typename T>
struct is_async_flow : std::false_type {};

template <typename S, typename V>
struct is_async_flow<AsyncFlow<S, V>> : std::true_type {};

// Flow or AsyncFlow -> the Flow it (eventually) yields.
template <typename T>
struct yielded;

template <typename S, typename V>
struct yielded<Flow<S, V>> {
    using type = Flow<S, V>;
};

template <typename S, typename V>
struct yielded<AsyncFlow<S, V>> {
    using type = Flow<S, V>;
};

} // namespace detail

template <typename T>
concept AsyncFlowType = detail::is_async_flow<std::remove_cvref_t<T>>::value;

/// Combines the final states of gathered flows, given in input order.
template <typename S>
using MergeStrategy = std::function<S(const std::vector<S>&)>;

/**
 * A cold, deferred computation that yields a Flow<S, V> when run.
 *
 * Nothing executes until `run` is called, and each call re-executes the whole
 * chain. Copies share the same immutable computation, so an AsyncFlow can be
 * handed to other threads freely. Step functions must be callable through a
 * const reference and safe to invoke concurrently with other steps of the
 * same gather group.
 */
template <typename S, typename V>
class AsyncFlow {
public:
    using state_type = S;
    using value_type = V;
    using Computation = std::function<Flow<S, V>(Executor&)>;

    /// Builds a flow from a raw computation. Faults escaping `computation`
    /// become StepFault failures on `last_known_state`.
    static AsyncFlow defer(S last_known_state, Computation computation)
    {
        return AsyncFlow([fallback = std::move(last_known_state),
                          computation = std::move(computation)](Executor& ex) -> Flow<S, V> {
            try {
                return computation(ex);
            } catch (...) {
                return Flow<S, V>::failure(fallback, detail::current_fault());
            }
        });
    }

    [[nodiscard]] Flow<S, V> run(Executor& executor) const { return (*computation_)(executor); }

    /**
     * Deferred bind. `step` receives (state, value) and returns either a Flow
     * or another AsyncFlow, which is run on the same executor.
     *
     * A failed upstream result is propagated without invoking `step`. Faults
     * escaping `step` become StepFault failures on the pre-step state.
     */
    template <typename F>
        requires std::invocable<const std::decay_t<F>&, const S&, const V&>
    [[nodiscard]] auto then(F&& step) const
    {
        using Returned = std::decay_t<std::invoke_result_t<const std::decay_t<F>&, const S&, const V&>>;
        static_assert(FlowType<Returned> || AsyncFlowType<Returned>, "a step must return a Flow or an AsyncFlow");
        using Next = typename detail::yielded<Returned>::type;
        static_assert(std::is_same_v<typename Next::state_type, S>, "a step must keep the state type");
        using R = typename Next::value_type;

        return AsyncFlow<S, R>(
            [upstream = *this, step = std::forward<F>(step)](Executor& ex) -> Flow<S, R> {
                instrumentation::record(instrumentation::Combinator::AsyncThen);
                Flow<S, V> current = upstream.run(ex);
                if (!current.is_successful()) {
                    return Flow<S, R>::failure(current.state(), *current.error());
                }
                try {
                    if constexpr (AsyncFlowType<Returned>) {
                        return std::invoke(step, current.state(), current.value()).run(ex);
                    } else {
                        return std::invoke(step, current.state(), current.value());
                    }
                } catch (...) {
                    return Flow<S, R>::failure(current.state(), detail::current_fault());
                }
            });
    }

    /// Deferred `map` over the eventual value.
    template <typename F>
        requires std::invocable<const std::decay_t<F>&, const V&>
    [[nodiscard]] auto map(F&& f) const
    {
        using R = std::decay_t<std::invoke_result_t<const std::decay_t<F>&, const V&>>;
        return AsyncFlow<S, R>([upstream = *this, f = std::forward<F>(f)](Executor& ex) -> Flow<S, R> {
            return upstream.run(ex).map(f);
        });
    }

    /**
     * Rewrites the whole eventual Flow, success or failure, possibly into a
     * different state type. Used to re-home the result of a sub-computation
     * into an enclosing state.
     *
     * If `f` throws and the state type is unchanged, the result is a StepFault
     * on the source state; otherwise the exception propagates to the caller
     * of `run`, which inside `then` means the enclosing step captures it.
     */
    template <typename F>
        requires std::invocable<const std::decay_t<F>&, const Flow<S, V>&>
    [[nodiscard]] auto transform(F&& f) const
    {
        using Next = std::decay_t<std::invoke_result_t<const std::decay_t<F>&, const Flow<S, V>&>>;
        static_assert(FlowType<Next>, "transform must return a Flow");
        using T = typename Next::state_type;
        using R = typename Next::value_type;
        return AsyncFlow<T, R>([upstream = *this, f = std::forward<F>(f)](Executor& ex) -> Flow<T, R> {
            instrumentation::record(instrumentation::Combinator::Transform);
            Flow<S, V> source = upstream.run(ex);
            if constexpr (std::is_same_v<T, S>) {
                try {
                    return std::invoke(f, source);
                } catch (...) {
                    return Flow<T, R>::failure(source.state(), detail::current_fault());
                }
            } else {
                return std::invoke(f, source);
            }
        });
    }

private:
    template <typename, typename>
    friend class AsyncFlow;

    template <typename F>
        requires(!std::same_as<std::decay_t<F>, AsyncFlow>)
    explicit AsyncFlow(F&& computation)
        : computation_(std::make_shared<const Computation>(std::forward<F>(computation)))
    {
    }

    template <typename S2, typename V2>
    friend AsyncFlow<S2, V2> make_async(typename AsyncFlow<S2, V2>::Computation);

    std::shared_ptr<const Computation> computation_;
};

template <typename S, typename V>
AsyncFlow<S, V> make_async(typename AsyncFlow<S, V>::Computation computation)
{
    return AsyncFlow<S, V>(std::move(computation));
}

namespace async {

template <typename S>
[[nodiscard]] AsyncFlow<S, S> start(S state)
{
    return make_async<S, S>([state = std::move(state)](Executor&) { return agentflow::start(state); });
}

template <typename S, typename V>
[[nodiscard]] AsyncFlow<S, V> start(S state, V initial_value)
{
    return make_async<S, V>([state = std::move(state), value = std::move(initial_value)](Executor&) {
        return agentflow::start(state, value);
    });
}

template <typename S, typename V>
[[nodiscard]] AsyncFlow<S, V> lift(Flow<S, V> flow)
{
    return make_async<S, V>([flow = std::move(flow)](Executor&) { return flow; });
}

namespace detail {

// Posts every flow, then waits for all of them. Results keep input order.
template <typename S, typename V>
std::vector<Flow<S, V>> run_all(const std::vector<AsyncFlow<S, V>>& flows, Executor& ex)
{
    std::vector<std::future<Flow<S, V>>> pending;
    pending.reserve(flows.size());
    for (const auto& flow : flows) {
        auto promise = std::make_shared<std::promise<Flow<S, V>>>();
        pending.push_back(promise->get_future());
        ex.post([promise, flow, &ex] {
            try {
                promise->set_value(flow.run(ex));
            } catch (...) {
                promise->set_exception(std::current_exception());
            }
        });
    }
    std::vector<Flow<S, V>> results;
    results.reserve(flows.size());
    for (auto& f : pending) {
        results.push_back(f.get());
    }
    return results;
}

inline ErrorInfo no_flows() { return ErrorInfo(ErrorKind::EmptyGather, "No flows provided"); }

} // namespace detail

/**
 * Runs independent flows concurrently and collects their values in input
 * order.
 *
 * Waits for every flow, then reports the first failure in input order (not
 * completion order). On success the state is `merge(states)`, or the last
 * flow's state when no strategy is given. An empty input fails with
 * EmptyGather "No flows provided" on a value-initialised state.
 */
template <typename S, typename V>
    requires std::default_initializable<S>
[[nodiscard]] AsyncFlow<S, std::vector<V>> gather(std::vector<AsyncFlow<S, V>> flows,
                                                  std::type_identity_t<std::optional<MergeStrategy<S>>> merge = std::nullopt)
{
    using Out = Flow<S, std::vector<V>>;
    return make_async<S, std::vector<V>>(
        [flows = std::move(flows), merge = std::move(merge)](Executor& ex) -> Out {
            instrumentation::record(instrumentation::Combinator::Gather);
            if (flows.empty()) {
                return Out::failure(S {}, detail::no_flows());
            }
            std::vector<Flow<S, V>> results = detail::run_all(flows, ex);
            for (const auto& r : results) {
                if (!r.is_successful()) {
                    return Out::failure(r.state(), *r.error());
                }
            }
            std::vector<V> values;
            values.reserve(results.size());
            for (const auto& r : results) {
                values.push_back(r.value());
            }
            if (!merge) {
                return Out::success(results.back().state(), std::move(values));
            }
            std::vector<S> states;
            states.reserve(results.size());
            for (const auto& r : results) {
                states.push_back(r.state());
            }
            try {
                return Out::success((*merge)(states), std::move(values));
            } catch (...) {
                return Out::failure(results.back().state(), agentflow::detail::current_fault());
            }
        });
}

/**
 * Diagnostic sibling of `gather`: runs every flow concurrently and returns
 * all individual results, failures included, in input order. The outer flow
 * only fails on empty input; its state is the last flow's state.
 */
template <typename S, typename V>
    requires std::default_initializable<S>
[[nodiscard]] AsyncFlow<S, std::vector<Flow<S, V>>> settle(std::vector<AsyncFlow<S, V>> flows)
{
    using Out = Flow<S, std::vector<Flow<S, V>>>;
    return make_async<S, std::vector<Flow<S, V>>>([flows = std::move(flows)](Executor& ex) -> Out {
        if (flows.empty()) {
            return Out::failure(S {}, detail::no_flows());
        }
        std::vector<Flow<S, V>> results = detail::run_all(flows, ex);
        S last = results.back().state();
        return Out::success(std::move(last), std::move(results));
    });
}

} // namespace async

} // namespace agentflow

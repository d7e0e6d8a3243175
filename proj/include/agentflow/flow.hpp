// SPDX-License-Identifier: Apache-2.0

#pragma once

#include "agentflow/error.hpp"
#include "agentflow/instrumentation.hpp"

#include <concepts>
#include <exception>
#include <functional>
#include <optional>
#include <string>
#include <type_traits>
#include <utility>

namespace agentflow {

template <typename S, typename V>
class Flow;

namespace detail {

template <typename T>
struct is_flow : std::false_type {};

template <typename S, typename V>
struct is_flow<Flow<S, V>> : std::true_type {};

/// Converts the in-flight exception into a StepFault. Must be called from
/// inside a catch block.
inline ErrorInfo current_fault()
{
    try {
        throw;
    } catch (const ErrorInfo& e) {
        return ErrorInfo(ErrorKind::StepFault, "step raised an error", e);
    } catch (const std::exception& e) {
        std::string what = e.what();
        return ErrorInfo(ErrorKind::StepFault, what.empty() ? "step terminated abnormally" : std::move(what));
    } catch (...) {
        return ErrorInfo(ErrorKind::StepFault, "step terminated abnormally");
    }
}

} // namespace detail

template <typename T>
concept FlowType = detail::is_flow<std::remove_cvref_t<T>>::value;

/// Read-only projection of every field of a Flow.
template <typename S, typename V>
struct FlowView {
    bool is_successful;
    S state;
    std::optional<V> value;
    std::optional<ErrorInfo> error;
};

/**
 * Immutable (state, value | error) container.
 *
 * A Flow is either on the success track, holding a state and a value, or on
 * the failure track, holding a state and an ErrorInfo. Failures never carry
 * a value. Every combinator returns a new Flow; faults thrown by user
 * functions inside `map`, `apply` and `then` are captured as StepFault
 * failures that keep the pre-step state.
 */
template <typename S, typename V>
class Flow {
public:
    using state_type = S;
    using value_type = V;

    static Flow success(S state, V value)
    {
        return Flow(std::move(state), std::optional<V>(std::move(value)), std::nullopt);
    }

    static Flow failure(S state, ErrorInfo error)
    {
        return Flow(std::move(state), std::nullopt, std::optional<ErrorInfo>(std::move(error)));
    }

    [[nodiscard]] bool is_successful() const noexcept { return value_.has_value(); }
    [[nodiscard]] const S& state() const noexcept { return state_; }

    /// Throws ValueAbsent on a failure.
    [[nodiscard]] const V& value() const
    {
        if (!value_) {
            throw ValueAbsent();
        }
        return *value_;
    }

    [[nodiscard]] const V* value_if() const noexcept { return value_ ? &*value_ : nullptr; }
    [[nodiscard]] const std::optional<ErrorInfo>& error() const noexcept { return error_; }

    [[nodiscard]] FlowView<S, V> inspect() const { return {is_successful(), state_, value_, error_}; }

    /// Applies a pure function to the value; failures pass through untouched.
    template <typename F>
        requires std::invocable<F&, const V&>
    [[nodiscard]] auto map(F&& f) const -> Flow<S, std::decay_t<std::invoke_result_t<F&, const V&>>>
    {
        using R = std::decay_t<std::invoke_result_t<F&, const V&>>;
        instrumentation::record(instrumentation::Combinator::Map);
        if (!is_successful()) {
            return Flow<S, R>::failure(state_, *error_);
        }
        try {
            return Flow<S, R>::success(state_, std::invoke(f, *value_));
        } catch (...) {
            return Flow<S, R>::failure(state_, detail::current_fault());
        }
    }

    /**
     * Applies the function held by `func_flow` to this flow's value.
     *
     * This flow is checked for failure first, then `func_flow`. When both
     * succeed the result keeps this flow's state; the state carried by
     * `func_flow` is dropped.
     */
    template <typename F>
        requires std::invocable<const F&, const V&>
    [[nodiscard]] auto apply(const Flow<S, F>& func_flow) const
        -> Flow<S, std::decay_t<std::invoke_result_t<const F&, const V&>>>
    {
        using R = std::decay_t<std::invoke_result_t<const F&, const V&>>;
        instrumentation::record(instrumentation::Combinator::Apply);
        if (!is_successful()) {
            return Flow<S, R>::failure(state_, *error_);
        }
        if (!func_flow.is_successful()) {
            return Flow<S, R>::failure(state_, *func_flow.error());
        }
        return map(func_flow.value());
    }

    /**
     * Monadic bind. `step` receives (state, value) and returns the next Flow.
     *
     * On the failure track the step is never invoked and the result carries
     * the same state and error. An exception escaping `step` becomes a
     * StepFault failure holding the state the step was given.
     */
    template <typename F>
        requires std::invocable<F&, const S&, const V&>
    [[nodiscard]] auto then(F&& step) const -> std::invoke_result_t<F&, const S&, const V&>
    {
        using Next = std::invoke_result_t<F&, const S&, const V&>;
        static_assert(FlowType<Next>, "a step must return a Flow");
        static_assert(std::is_same_v<typename Next::state_type, S>, "a step must keep the state type");
        instrumentation::record(instrumentation::Combinator::Then);
        if (!is_successful()) {
            return Next::failure(state_, *error_);
        }
        try {
            return std::invoke(step, state_, *value_);
        } catch (...) {
            return Next::failure(state_, detail::current_fault());
        }
    }

    friend bool operator==(const Flow& a, const Flow& b)
        requires std::equality_comparable<S> && std::equality_comparable<V>
    {
        return a.state_ == b.state_ && a.value_ == b.value_ && a.error_ == b.error_;
    }

private:
    Flow(S state, std::optional<V> value, std::optional<ErrorInfo> error)
        : state_(std::move(state))
        , value_(std::move(value))
        , error_(std::move(error))
    {
    }

    S state_;
    std::optional<V> value_;
    std::optional<ErrorInfo> error_;
};

/// Starts a chain whose value is the state itself.
template <typename S>
[[nodiscard]] Flow<S, S> start(S state)
{
    S value = state;
    return Flow<S, S>::success(std::move(state), std::move(value));
}

template <typename S, typename V>
[[nodiscard]] Flow<S, V> start(S state, V initial_value)
{
    return Flow<S, V>::success(std::move(state), std::move(initial_value));
}

template <typename S, typename V>
[[nodiscard]] Flow<S, V> success(S state, V value)
{
    return Flow<S, V>::success(std::move(state), std::move(value));
}

template <typename V, typename S>
[[nodiscard]] Flow<S, V> failure(S state, ErrorInfo error)
{
    return Flow<S, V>::failure(std::move(state), std::move(error));
}

} // namespace agentflow

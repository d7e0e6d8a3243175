// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstddef>
#include <memory>
#include <ostream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>

namespace agentflow {

enum class ErrorKind {
    ToolNotFound,
    ToolExecution,
    StepFault,
    EmptyGather,
    Decode,
    Other,
};

constexpr std::string_view to_string(ErrorKind kind) noexcept
{
    switch (kind) {
    case ErrorKind::ToolNotFound: return "ToolNotFound";
    case ErrorKind::ToolExecution: return "ToolExecution";
    case ErrorKind::StepFault: return "StepFault";
    case ErrorKind::EmptyGather: return "EmptyGather";
    case ErrorKind::Decode: return "Decode";
    case ErrorKind::Other: return "Other";
    }
    return "Other";
}

/**
 * Structured failure description carried on the failure track of a Flow.
 *
 * Immutable once built. The upstream cause is shared, so copying an
 * ErrorInfo is cheap and chains can never form cycles. Chains longer than
 * `max_cause_depth` are cut at construction: the oldest causes are dropped.
 */
class ErrorInfo {
public:
    static constexpr std::size_t max_cause_depth = 32;

    ErrorInfo(ErrorKind kind, std::string message)
        : kind_(kind)
        , message_(std::move(message))
    {
        if (message_.empty()) {
            throw std::invalid_argument("ErrorInfo message must not be empty");
        }
    }

    ErrorInfo(ErrorKind kind, std::string message, ErrorInfo cause)
        : ErrorInfo(kind, std::move(message))
    {
        cause_ = std::make_shared<const ErrorInfo>(truncated(std::move(cause), max_cause_depth));
    }

    [[nodiscard]] ErrorKind kind() const noexcept { return kind_; }
    [[nodiscard]] const std::string& message() const noexcept { return message_; }
    [[nodiscard]] const ErrorInfo* cause() const noexcept { return cause_.get(); }

    /// Number of links below this one.
    [[nodiscard]] std::size_t depth() const noexcept
    {
        std::size_t n = 0;
        for (const ErrorInfo* c = cause(); c != nullptr; c = c->cause()) {
            ++n;
        }
        return n;
    }

    /// "Kind: message <- Kind: message ..." down the cause chain.
    [[nodiscard]] std::string describe() const
    {
        std::string out;
        for (const ErrorInfo* e = this; e != nullptr; e = e->cause()) {
            if (!out.empty()) {
                out += " <- ";
            }
            out += to_string(e->kind());
            out += ": ";
            out += e->message();
        }
        return out;
    }

    friend bool operator==(const ErrorInfo& a, const ErrorInfo& b)
    {
        if (a.kind_ != b.kind_ || a.message_ != b.message_) {
            return false;
        }
        if (a.cause_ == nullptr || b.cause_ == nullptr) {
            return a.cause_ == b.cause_;
        }
        return *a.cause_ == *b.cause_;
    }

    friend std::ostream& operator<<(std::ostream& os, const ErrorInfo& e)
    {
        return os << e.describe();
    }

private:
    // Keeps at most `keep` further links below `head` (head itself counts as one).
    static ErrorInfo truncated(ErrorInfo head, std::size_t keep)
    {
        if (head.cause_ == nullptr) {
            return head;
        }
        if (keep <= 1) {
            head.cause_.reset();
            return head;
        }
        head.cause_ = std::make_shared<const ErrorInfo>(truncated(*head.cause_, keep - 1));
        return head;
    }

    ErrorKind kind_;
    std::string message_;
    std::shared_ptr<const ErrorInfo> cause_;
};

/// Thrown by value-demanding accessors on a failed flow.
class ValueAbsent : public std::logic_error {
public:
    ValueAbsent()
        : std::logic_error("Flow has no value.")
    {
    }
};

} // namespace agentflow

// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <functional>
#include <list>
#include <mutex>
#include <thread>

namespace agentflow {

/**
 * Host-supplied execution context that drives deferred flows.
 *
 * `post` must eventually run the task, and must be able to do so while the
 * posting thread blocks waiting for it: `gather` posts one task per input
 * flow and then waits on all of them.
 */
class Executor {
public:
    virtual ~Executor() = default;
    virtual void post(std::function<void()> task) = 0;
};

/// Runs every task immediately on the posting thread. Gathers become sequential.
class InlineExecutor final : public Executor {
public:
    void post(std::function<void()> task) override { task(); }
};

/// One thread per posted task; joins everything on destruction.
class ThreadExecutor final : public Executor {
public:
    ThreadExecutor() = default;
    ThreadExecutor(const ThreadExecutor&) = delete;
    ThreadExecutor& operator=(const ThreadExecutor&) = delete;

    ~ThreadExecutor() override
    {
        // Threads may still be posting while we drain, so pop under the lock.
        for (;;) {
            std::jthread t;
            {
                std::lock_guard lock(mutex_);
                if (threads_.empty()) {
                    return;
                }
                t = std::move(threads_.front());
                threads_.pop_front();
            }
        }
    }

    void post(std::function<void()> task) override
    {
        std::lock_guard lock(mutex_);
        threads_.emplace_back(std::move(task));
    }

private:
    std::mutex mutex_;
    std::list<std::jthread> threads_;
};

} // namespace agentflow

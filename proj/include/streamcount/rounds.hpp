#pragma once

// Round-adaptive query programs written as coroutines.
//
// A program is a Task<T>. It issues one batch of queries per round with
//   Reply reply = co_await ask(std::move(queries));
// and may await child tasks, or run several children in lockstep with
//   std::vector<T> results = co_await when_all(std::move(children));
// which merges their batches so that the group spends one round per step
// of its slowest member. A TaskDriver exposes a program to run_rounds, which
// answers each round with one pass over a stream, or to run_on_oracle.

#include <coroutine>
#include <cstddef>
#include <cstdint>
#include <exception>
#include <optional>
#include <utility>
#include <vector>

#include "streamcount/estimate.hpp"
#include "streamcount/oracle.hpp"
#include "streamcount/pass_executor.hpp"
#include "streamcount/query.hpp"

namespace streamcount {

namespace detail {

struct Responder {
  virtual void respond(Reply reply) = 0;

 protected:
  ~Responder() = default;
};

// Where a suspended program leaves its next batch and whom to answer.
struct RoundContext {
  std::vector<Query> plan;
  Responder* pending = nullptr;
};

struct PromiseBase {
  RoundContext* context = nullptr;
  std::coroutine_handle<> continuation;
  std::exception_ptr error;

  struct FinalAwaiter {
    bool await_ready() noexcept { return false; }
    template <class P>
    std::coroutine_handle<> await_suspend(std::coroutine_handle<P> h) noexcept {
      const std::coroutine_handle<> next = h.promise().continuation;
      return next ? next : std::noop_coroutine();
    }
    void await_resume() noexcept {}
  };

  std::suspend_always initial_suspend() noexcept { return {}; }
  FinalAwaiter final_suspend() noexcept { return {}; }
  void unhandled_exception() noexcept { error = std::current_exception(); }
};

}  // namespace detail

template <class T>
class [[nodiscard]] Task {
 public:
  struct promise_type : detail::PromiseBase {
    std::optional<T> value;

    Task get_return_object() { return Task(Handle::from_promise(*this)); }
    template <class U>
    void return_value(U&& v) {
      value.emplace(std::forward<U>(v));
    }
  };
  using Handle = std::coroutine_handle<promise_type>;

  Task(Task&& other) noexcept : handle_(std::exchange(other.handle_, {})) {}
  Task& operator=(Task&& other) noexcept {
    if (this != &other) {
      if (handle_) handle_.destroy();
      handle_ = std::exchange(other.handle_, {});
    }
    return *this;
  }
  Task(const Task&) = delete;
  Task& operator=(const Task&) = delete;
  ~Task() {
    if (handle_) handle_.destroy();
  }

  bool done() const { return handle_.done(); }
  Handle handle() const { return handle_; }

  // Result of a finished task; rethrows its exception.
  T take() {
    promise_type& p = handle_.promise();
    if (p.error) std::rethrow_exception(p.error);
    return std::move(*p.value);
  }

  struct Awaiter {
    Task& task;
    bool await_ready() noexcept { return false; }
    template <class P>
    std::coroutine_handle<> await_suspend(std::coroutine_handle<P> parent) noexcept {
      task.handle_.promise().context = parent.promise().context;
      task.handle_.promise().continuation = parent;
      return task.handle_;
    }
    T await_resume() { return task.take(); }
  };
  Awaiter operator co_await() && noexcept { return Awaiter{*this}; }

 private:
  explicit Task(Handle h) : handle_(h) {}
  Handle handle_;
};

// Suspends the program until its batch has been answered.
class [[nodiscard]] Ask final : public detail::Responder {
 public:
  explicit Ask(std::vector<Query> plan) : plan_(std::move(plan)) {}

  bool await_ready() noexcept { return false; }
  template <class P>
  void await_suspend(std::coroutine_handle<P> h) {
    handle_ = h;
    detail::RoundContext* context = h.promise().context;
    context->plan = std::move(plan_);
    context->pending = this;
  }
  Reply await_resume() { return std::move(reply_); }

  void respond(Reply reply) override {
    reply_ = std::move(reply);
    handle_.resume();
  }

 private:
  std::vector<Query> plan_;
  Reply reply_;
  std::coroutine_handle<> handle_;
};

inline Ask ask(std::vector<Query> plan) { return Ask(std::move(plan)); }

template <class T>
class [[nodiscard]] WhenAll final : public detail::Responder {
 public:
  explicit WhenAll(std::vector<Task<T>> tasks)
      : tasks_(std::move(tasks)), contexts_(tasks_.size()) {}
  WhenAll(const WhenAll&) = delete;
  WhenAll& operator=(const WhenAll&) = delete;

  bool await_ready() noexcept { return tasks_.empty(); }

  template <class P>
  bool await_suspend(std::coroutine_handle<P> h) {
    parent_ = h;
    parent_context_ = h.promise().context;
    for (std::size_t i = 0; i < tasks_.size(); ++i) {
      tasks_[i].handle().promise().context = &contexts_[i];
      tasks_[i].handle().resume();
    }
    return publish();
  }

  std::vector<T> await_resume() {
    std::vector<T> results;
    results.reserve(tasks_.size());
    for (Task<T>& task : tasks_) results.push_back(task.take());
    return results;
  }

  void respond(Reply reply) override {
    for (std::size_t k = 0; k < waiting_.size(); ++k) {
      const std::size_t i = waiting_[k];
      Reply part;
      part.edge_count = reply.edge_count;
      part.answers.assign(
          std::make_move_iterator(reply.answers.begin() + static_cast<std::ptrdiff_t>(offsets_[k])),
          std::make_move_iterator(reply.answers.begin() + static_cast<std::ptrdiff_t>(offsets_[k + 1])));
      detail::Responder* child = std::exchange(contexts_[i].pending, nullptr);
      child->respond(std::move(part));
    }
    if (publish()) return;
    parent_context_->pending = nullptr;
    parent_.resume();  // may destroy this awaiter
  }

 private:
  // Merges the batches of unfinished children into the parent's round.
  // Returns false when every child has finished.
  bool publish() {
    waiting_.clear();
    offsets_.assign(1, 0);
    std::vector<Query> merged;
    for (std::size_t i = 0; i < tasks_.size(); ++i) {
      if (tasks_[i].done()) continue;
      waiting_.push_back(i);
      std::vector<Query>& plan = contexts_[i].plan;
      merged.insert(merged.end(), plan.begin(), plan.end());
      plan.clear();
      offsets_.push_back(merged.size());
    }
    if (waiting_.empty()) return false;
    parent_context_->plan = std::move(merged);
    parent_context_->pending = this;
    return true;
  }

  std::vector<Task<T>> tasks_;
  std::vector<detail::RoundContext> contexts_;
  std::vector<std::size_t> waiting_;
  std::vector<std::size_t> offsets_;
  detail::RoundContext* parent_context_ = nullptr;
  std::coroutine_handle<> parent_;
};

template <class T>
WhenAll<T> when_all(std::vector<Task<T>> tasks) {
  return WhenAll<T>(std::move(tasks));
}

// The interface run_rounds drives: alternate next_plan() and deliver() until
// next_plan() returns nullopt.
class RoundDriver {
 public:
  virtual ~RoundDriver() = default;
  // Upper bound on the number of plans the driver will emit.
  virtual std::size_t declared_rounds() const = 0;
  virtual std::optional<std::vector<Query>> next_plan() = 0;
  virtual void deliver(Reply reply) = 0;
};

template <class T>
class TaskDriver final : public RoundDriver {
 public:
  TaskDriver(Task<T> task, std::size_t declared_rounds)
      : task_(std::move(task)), declared_rounds_(declared_rounds) {}

  std::size_t declared_rounds() const override { return declared_rounds_; }

  std::optional<std::vector<Query>> next_plan() override {
    if (!started_) {
      started_ = true;
      task_.handle().promise().context = &context_;
      task_.handle().resume();
    }
    if (task_.done()) return std::nullopt;
    return std::move(context_.plan);
  }

  void deliver(Reply reply) override {
    detail::Responder* pending = std::exchange(context_.pending, nullptr);
    pending->respond(std::move(reply));
  }

  bool finished() const { return started_ && task_.done(); }
  T result() { return task_.take(); }

 private:
  Task<T> task_;
  std::size_t declared_rounds_;
  detail::RoundContext context_;
  bool started_ = false;
};

struct RunStats {
  std::vector<PassStats> passes;

  std::size_t pass_count() const { return passes.size(); }
  std::uint64_t max_bits() const;
  QueryCounts total_queries() const;
};

// One pass over the stream per plan. Pass p uses seed derive_seed(seed, p).
// Throws Error(kPassBudgetExceeded) if the driver emits more plans than it declared.
RunStats run_rounds(RoundDriver& driver, const EdgeStream& stream, const PassOptions& options,
                    std::uint64_t seed);

// Answers each plan from the in-memory oracle instead of a stream.
RunStats run_on_oracle(RoundDriver& driver, QueryOracle& oracle);

}  // namespace streamcount

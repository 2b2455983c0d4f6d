#pragma once

#include <algorithm>
#include <atomic>
#include <condition_variable>
#include <deque>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <semaphore>
#include <thread>
#include <utility>
#include <variant>
#include <vector>

#include "errors.hpp"
#include "generation.hpp"

namespace matroid3 {

// A tree iterator in the sense used throughout this module is any type It
// whose next() returns
//   std::variant<std::unique_ptr<It>, Leaf, It::Exhausted>
// (alternative 0: descend into a child, 1: a finished leaf, 2: this node is
// spent) and whose depth() reports the node's distance from the root.
// RecursiveIterator is the motivating instance; the tests exercise toy ones.
template <class It>
using LeafOf = std::variant_alternative_t<1, typename It::NextResult>;

// Bounded multi-producer/single-consumer leaf buffer, closed by a terminal
// sentinel. Producers block while the buffer is full; the consumer blocks
// until a leaf or the sentinel is visible. abort() releases everyone when the
// consumer walks away early; pushes after that are dropped.
template <class It>
class LeafFifo {
 public:
  using Leaf = LeafOf<It>;

  // capacity 0 means unbounded.
  explicit LeafFifo(std::size_t capacity = 0) : cap_(capacity == 0 ? static_cast<std::size_t>(-1) : capacity) {}

  bool push(Leaf leaf) {
    std::unique_lock<std::mutex> lock(mu_);
    not_full_.wait(lock, [this] { return q_.size() < cap_ || aborted_; });
    if (aborted_) return false;
    q_.push_back(std::move(leaf));
    not_empty_.notify_one();
    return true;
  }

  // The sentinel; at most one per stream, after the last leaf.
  void close() {
    std::lock_guard<std::mutex> lock(mu_);
    closed_ = true;
    not_empty_.notify_all();
  }

  void abort() {
    std::lock_guard<std::mutex> lock(mu_);
    aborted_ = true;
    not_full_.notify_all();
    not_empty_.notify_all();
  }

  // Blocks until the head of the stream is known. True iff what follows is
  // the sentinel; the sentinel itself is never consumed.
  bool is_done() {
    std::unique_lock<std::mutex> lock(mu_);
    not_empty_.wait(lock, [this] { return !q_.empty() || closed_ || aborted_; });
    return q_.empty();
  }

  Leaf pop() {
    std::unique_lock<std::mutex> lock(mu_);
    not_empty_.wait(lock, [this] { return !q_.empty() || closed_ || aborted_; });
    if (q_.empty()) fail(errc::next_after_done, "leaf stream is exhausted");
    Leaf leaf = std::move(q_.front());
    q_.pop_front();
    not_full_.notify_one();
    return leaf;
  }

 private:
  std::mutex mu_;
  std::condition_variable not_full_, not_empty_;
  std::deque<Leaf> q_;
  std::size_t cap_;
  bool closed_ = false;
  bool aborted_ = false;
};

// Work pool keyed by tree depth: pop returns a deepest entry, most recently
// pushed first. Children sit one level below their parents, so preferring
// depth bounds the frontier the way plain depth-first search would.
template <class It>
class PriorityQueue {
 public:
  void push(std::unique_ptr<It> handle, int priority) {
    std::lock_guard<std::mutex> lock(mu_);
    by_depth_[priority].push_back(std::move(handle));
  }

  // (nullptr, 0) when empty.
  std::pair<std::unique_ptr<It>, int> pop() {
    std::lock_guard<std::mutex> lock(mu_);
    while (!by_depth_.empty()) {
      auto last = std::prev(by_depth_.end());
      if (last->second.empty()) {
        by_depth_.erase(last);
        continue;
      }
      std::unique_ptr<It> h = std::move(last->second.back());
      last->second.pop_back();
      return {std::move(h), last->first};
    }
    return {nullptr, 0};
  }

 private:
  std::mutex mu_;
  std::map<int, std::vector<std::unique_ptr<It>>> by_depth_;
};

// Everything the workers share. jobs counts handles alive (queued or held by
// a worker); it reaching zero is the termination condition. The semaphore's
// count tracks queue entries during the run and is overshot by one release
// per worker at shutdown so that everyone wakes to observe the empty queue.
template <class It>
struct EvalState {
  PriorityQueue<It> queue;
  LeafFifo<It>& fifo;
  std::counting_semaphore<> work{0};
  std::atomic<long> jobs{0};
  int workers = 1;
  bool drain_leaves = false;
  std::atomic<long> malformed{0};

  EvalState(LeafFifo<It>& f, int w, bool drain) : fifo(f), workers(w), drain_leaves(drain) {}
};

namespace detail {

// A handle finishes here exactly once; the worker that takes the job count
// to zero emits the sentinel and wakes the whole pool for shutdown.
template <class It>
void retire_handle(EvalState<It>& shared) {
  if (shared.jobs.fetch_sub(1) == 1) {
    shared.fifo.close();
    shared.work.release(shared.workers);
  }
}

}  // namespace detail

// One worker: wait for work, take a deepest job, advance it one step (or, in
// draining mode, through its whole run of leaves), and return it to the
// queue unless it is spent. A malformed result (a null child handle) is
// recorded and retired like an exhausted node so termination never blocks.
template <class It>
void worker_loop(EvalState<It>& shared) {
  for (;;) {
    shared.work.acquire();
    auto [it, priority] = shared.queue.pop();
    if (it == nullptr) return;
    for (;;) {
      auto r = it->next();
      if (auto* child = std::get_if<std::unique_ptr<It>>(&r)) {
        if (*child == nullptr) {
          shared.malformed.fetch_add(1);
          detail::retire_handle(shared);
          break;
        }
        shared.jobs.fetch_add(1);
        int child_priority = priority + 1;
        shared.queue.push(std::move(*child), child_priority);
        shared.queue.push(std::move(it), priority);
        shared.work.release(2);
        break;
      }
      if (auto* leaf = std::get_if<LeafOf<It>>(&r)) {
        if (!shared.fifo.push(std::move(*leaf))) {
          detail::retire_handle(shared);
          break;
        }
        if (shared.drain_leaves) continue;
        shared.queue.push(std::move(it), priority);
        shared.work.release(1);
        break;
      }
      detail::retire_handle(shared);
      break;
    }
  }
}

// Seeds the queue with the root at depth 0, signals once, launches the pool,
// and returns immediately; the threads keep filling the fifo until the
// sentinel. The caller owns the threads (jthread joins on destruction) and
// must keep state and fifo alive until then.
template <class It>
std::vector<std::jthread> parallel_evaluate(std::unique_ptr<It> root, EvalState<It>& shared) {
  shared.jobs.store(1);
  shared.queue.push(std::move(root), 0);
  shared.work.release(1);
  std::vector<std::jthread> pool;
  pool.reserve(static_cast<std::size_t>(shared.workers));
  for (int w = 0; w < shared.workers; ++w)
    pool.emplace_back([&shared] { worker_loop(shared); });
  return pool;
}

// Pull-style view of a parallel evaluation: next() blocks for the next leaf,
// is_done() peeks for the sentinel. Dropping the stream early aborts the
// fifo so blocked producers can unwind.
template <class It>
class LeafStream {
 public:
  using Leaf = LeafOf<It>;

  LeafStream(std::unique_ptr<It> root, int workers, std::size_t capacity, bool drain_leaves = false)
      : fifo_(capacity), shared_(fifo_, workers < 1 ? 1 : workers, drain_leaves) {
    pool_ = parallel_evaluate(std::move(root), shared_);
  }

  ~LeafStream() {
    fifo_.abort();
    pool_.clear();
  }

  bool is_done() { return fifo_.is_done(); }
  Leaf next() { return fifo_.pop(); }
  long malformed_count() const { return shared_.malformed.load(); }

 private:
  LeafFifo<It> fifo_;
  EvalState<It> shared_;
  std::vector<std::jthread> pool_;
};

template <class It>
LeafStream<It> leaf_iterator(std::unique_ptr<It> root, int workers, std::size_t capacity,
                             bool drain_leaves = false) {
  return LeafStream<It>(std::move(root), workers, capacity, drain_leaves);
}

// Full evaluation of one multiplicity vector. Sequential mode streams the
// tree depth-first and keeps that order; parallel mode collects the leaf set
// and sorts it, so both produce the same records deterministically.
inline std::vector<TwoPartition> generate_all(int n, const MultiplicityVector& mv,
                                              const GenerateOptions& options = {}) {
  if (options.workers <= 1) return generate_all_sequential(n, mv, options);
  bool any = false;
  for (int k = 2; k < n; ++k) any = any || mv.count(k) > 0;
  std::vector<TwoPartition> out;
  if (!any) return out;
  LeafStream<RecursiveIterator> stream(iterator_from_state(initial_state(n, mv), options),
                                       options.workers, options.fifo_capacity, options.drain_leaves);
  while (!stream.is_done()) out.push_back(make_matroid_masks(n, minimal_image(n, stream.next())));
  std::sort(out.begin(), out.end(),
            [](const TwoPartition& a, const TwoPartition& b) { return blocklist_less(a.blocks, b.blocks); });
  return out;
}

}  // namespace matroid3

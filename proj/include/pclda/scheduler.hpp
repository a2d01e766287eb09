#pragma once

#include <atomic>
#include <condition_variable>
#include <cstdint>
#include <deque>
#include <functional>
#include <mutex>
#include <thread>
#include <vector>

namespace pclda {

/**
 * Work-stealing scheduler over integer work items (document ids). Items are
 * dealt into per-worker deques in contiguous blocks; each worker pops from
 * the front of its own deque and, when empty, steals one item from the tail
 * of the deque with the most work left. Every item runs exactly once and
 * run() returns only after all items finished (barrier semantics).
 *
 * With one worker, items run inline on the calling thread in deque order.
 * A task that throws aborts the sweep; run() rethrows with the item id.
 */
class WorkScheduler {
 public:
  explicit WorkScheduler(int workers);
  ~WorkScheduler();

  WorkScheduler(const WorkScheduler&) = delete;
  WorkScheduler& operator=(const WorkScheduler&) = delete;

  int workers() const { return workers_; }

  // body(item, worker) with item in [0, n_items), worker in [0, workers)
  void run(int64_t n_items, const std::function<void(int64_t, int)>& body);

 private:
  struct Queue {
    std::mutex mutex;
    std::deque<int64_t> items;
    std::atomic<int64_t> size{0};
  };

  void worker_loop(int id);
  void work(int id);
  bool try_pop_own(int id, int64_t& item);
  bool try_steal(int id, int64_t& item);

  const int workers_;
  std::vector<std::unique_ptr<Queue>> queues_;
  const std::function<void(int64_t, int)>* body_ = nullptr;

  std::mutex mutex_;
  std::condition_variable cv_start_;
  std::condition_variable cv_done_;
  uint64_t epoch_ = 0;
  int active_ = 0;
  bool shutdown_ = false;

  std::atomic<bool> abort_{false};
  std::mutex error_mutex_;
  std::exception_ptr error_;
  int64_t error_item_ = -1;

  std::vector<std::thread> threads_;
};

}  // namespace pclda

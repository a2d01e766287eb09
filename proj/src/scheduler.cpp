#include "pclda/scheduler.hpp"

#include <stdexcept>
#include <string>

#include "pclda/errors.hpp"

namespace pclda {

WorkScheduler::WorkScheduler(int workers) : workers_(workers) {
  if (workers < 1) throw domain_error("WorkScheduler: workers must be >= 1");
  queues_.reserve(static_cast<size_t>(workers));
  for (int i = 0; i < workers; ++i) queues_.push_back(std::make_unique<Queue>());
  if (workers_ > 1) {
    threads_.reserve(static_cast<size_t>(workers_));
    for (int i = 0; i < workers_; ++i) threads_.emplace_back([this, i] { worker_loop(i); });
  }
}

WorkScheduler::~WorkScheduler() {
  {
    std::lock_guard lock(mutex_);
    shutdown_ = true;
  }
  cv_start_.notify_all();
  for (auto& t : threads_) t.join();
}

void WorkScheduler::run(int64_t n_items, const std::function<void(int64_t, int)>& body) {
  if (n_items <= 0) return;

  // contiguous blocks, one per worker, in item order
  const int64_t per = n_items / workers_;
  const int64_t extra = n_items % workers_;
  int64_t next = 0;
  for (int w = 0; w < workers_; ++w) {
    auto& q = *queues_[w];
    const int64_t take = per + (w < extra ? 1 : 0);
    for (int64_t i = 0; i < take; ++i) q.items.push_back(next++);
    q.size.store(static_cast<int64_t>(q.items.size()), std::memory_order_relaxed);
  }

  body_ = &body;
  abort_.store(false, std::memory_order_relaxed);
  error_ = nullptr;
  error_item_ = -1;

  if (workers_ == 1) {
    work(0);
  } else {
    {
      std::lock_guard lock(mutex_);
      active_ = workers_;
      ++epoch_;
    }
    cv_start_.notify_all();
    std::unique_lock lock(mutex_);
    cv_done_.wait(lock, [this] { return active_ == 0; });
  }

  body_ = nullptr;
  if (error_) {
    try {
      std::rethrow_exception(error_);
    } catch (const std::exception& e) {
      throw std::runtime_error("sweep aborted at document " + std::to_string(error_item_) + ": " +
                               e.what());
    }
  }
}

void WorkScheduler::worker_loop(int id) {
  uint64_t seen = 0;
  for (;;) {
    {
      std::unique_lock lock(mutex_);
      cv_start_.wait(lock, [&] { return shutdown_ || epoch_ > seen; });
      if (shutdown_) return;
      seen = epoch_;
    }
    work(id);
    {
      std::lock_guard lock(mutex_);
      if (--active_ == 0) cv_done_.notify_all();
    }
  }
}

bool WorkScheduler::try_pop_own(int id, int64_t& item) {
  auto& q = *queues_[id];
  std::lock_guard lock(q.mutex);
  if (q.items.empty()) return false;
  item = q.items.front();
  q.items.pop_front();
  q.size.fetch_sub(1, std::memory_order_relaxed);
  return true;
}

bool WorkScheduler::try_steal(int id, int64_t& item) {
  // victim: the deque with the most remaining work
  int victim = -1;
  int64_t best = 0;
  for (int w = 0; w < workers_; ++w) {
    if (w == id) continue;
    const int64_t sz = queues_[w]->size.load(std::memory_order_relaxed);
    if (sz > best) {
      best = sz;
      victim = w;
    }
  }
  if (victim < 0) return false;
  auto& q = *queues_[victim];
  std::lock_guard lock(q.mutex);
  if (q.items.empty()) return false;
  item = q.items.back();  // steal from the tail
  q.items.pop_back();
  q.size.fetch_sub(1, std::memory_order_relaxed);
  return true;
}

void WorkScheduler::work(int id) {
  int64_t item;
  for (;;) {
    if (abort_.load(std::memory_order_relaxed)) {
      // drain whatever is left so the epoch can end
      while (try_pop_own(id, item) || try_steal(id, item)) {
      }
      return;
    }
    if (!try_pop_own(id, item) && !try_steal(id, item)) return;
    try {
      (*body_)(item, id);
    } catch (...) {
      {
        std::lock_guard lock(error_mutex_);
        if (!error_) {
          error_ = std::current_exception();
          error_item_ = item;
        }
      }
      abort_.store(true, std::memory_order_relaxed);
    }
  }
}

}  // namespace pclda

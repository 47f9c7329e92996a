#include "specsamp/worker_pool.hpp"

#include <stdexcept>

namespace specsamp {

WorkerPool::WorkerPool(unsigned workers) : workers_(workers) {
    if (workers == 0) {
        throw std::invalid_argument("WorkerPool: worker count must be >= 1");
    }
    threads_.reserve(workers - 1);
    for (unsigned w = 1; w < workers; ++w) {
        threads_.emplace_back([this, w] { worker_loop(w); });
    }
}

WorkerPool::~WorkerPool() {
    {
        std::lock_guard<std::mutex> lock(mutex_);
        stopping_ = true;
    }
    start_cv_.notify_all();
    for (auto& t : threads_) {
        t.join();
    }
}

void WorkerPool::drain(unsigned worker_index) {
    const size_t count = job_count_;
    const auto& fn = *job_;
    for (;;) {
        const size_t task = next_task_.fetch_add(1, std::memory_order_relaxed);
        if (task >= count) break;
        fn(task, worker_index);
    }
}

void WorkerPool::worker_loop(unsigned worker_index) {
    uint64_t seen_epoch = 0;
    for (;;) {
        {
            std::unique_lock<std::mutex> lock(mutex_);
            start_cv_.wait(lock, [&] { return stopping_ || job_epoch_ != seen_epoch; });
            if (stopping_) return;
            seen_epoch = job_epoch_;
        }
        drain(worker_index);
        {
            std::lock_guard<std::mutex> lock(mutex_);
            ++finished_;
            if (finished_ == workers_ - 1) {
                done_cv_.notify_one();
            }
        }
    }
}

void WorkerPool::parallel_for(size_t count, const std::function<void(size_t, unsigned)>& fn) {
    if (count == 0) return;
    if (workers_ == 1) {
        for (size_t i = 0; i < count; ++i) fn(i, 0);
        return;
    }
    {
        std::lock_guard<std::mutex> lock(mutex_);
        job_ = &fn;
        job_count_ = count;
        next_task_.store(0, std::memory_order_relaxed);
        finished_ = 0;
        ++job_epoch_;
    }
    start_cv_.notify_all();
    drain(0);  // the calling thread participates as worker 0
    {
        // Every spawned worker checks in once per epoch, so the job object
        // stays alive until no one can still reference it.
        std::unique_lock<std::mutex> lock(mutex_);
        done_cv_.wait(lock, [&] { return finished_ == workers_ - 1; });
        job_ = nullptr;
    }
}

}  // namespace specsamp

#pragma once

#include <atomic>
#include <condition_variable>
#include <cstddef>
#include <functional>
#include <mutex>
#include <thread>
#include <vector>

namespace specsamp {

// Small persistent pool for data-parallel task loops. Tasks are pulled from a
// shared counter, so they may run in any order on any worker; callers must
// only merge results through order-independent or fixed-topology reductions.
// The calling thread participates as worker 0; a pool of size 1 never spawns.
class WorkerPool {
public:
    explicit WorkerPool(unsigned workers);
    ~WorkerPool();

    WorkerPool(const WorkerPool&) = delete;
    WorkerPool& operator=(const WorkerPool&) = delete;

    unsigned size() const { return workers_; }

    // Runs fn(task_index, worker_index) for every task in [0, count).
    // worker_index < size(); blocks until all tasks are done.
    void parallel_for(size_t count, const std::function<void(size_t, unsigned)>& fn);

private:
    void worker_loop(unsigned worker_index);
    void drain(unsigned worker_index);

    unsigned workers_;
    std::vector<std::thread> threads_;

    std::mutex mutex_;
    std::condition_variable start_cv_;
    std::condition_variable done_cv_;
    const std::function<void(size_t, unsigned)>* job_ = nullptr;
    size_t job_count_ = 0;
    uint64_t job_epoch_ = 0;
    std::atomic<size_t> next_task_{0};
    unsigned finished_ = 0;
    bool stopping_ = false;
};

}  // namespace specsamp

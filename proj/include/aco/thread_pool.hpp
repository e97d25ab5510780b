#pragma once

#include <condition_variable>
#include <cstdint>
#include <exception>
#include <functional>
#include <mutex>
#include <thread>
#include <vector>

namespace aco {

/// Fork-join pool with fixed contiguous chunking. `run_chunks(count, fn)`
/// splits [0, count) into one chunk per worker and blocks until all chunks
/// finish. Chunk boundaries depend only on (count, workers), never on
/// scheduling, so any partition-safe computation is reproducible.
class ThreadPool {
public:
    explicit ThreadPool(int workers) : workers_(workers < 1 ? 1 : workers) {
        threads_.reserve(static_cast<std::size_t>(workers_ - 1));
        for (int w = 1; w < workers_; ++w) {
            threads_.emplace_back([this, w] { worker_loop(w); });
        }
    }

    ThreadPool(const ThreadPool&) = delete;
    ThreadPool& operator=(const ThreadPool&) = delete;

    ~ThreadPool() {
        {
            std::unique_lock lock(mutex_);
            stop_ = true;
        }
        wake_.notify_all();
        for (auto& t : threads_) t.join();
    }

    int worker_count() const noexcept { return workers_; }

    static int hardware_workers() {
        unsigned hw = std::thread::hardware_concurrency();
        return hw == 0 ? 1 : static_cast<int>(hw);
    }

    /// Runs fn(begin, end) over a fixed partition of [0, count).
    /// Worker w gets [w*ceil(count/W), ...). The caller's thread runs chunk 0.
    void run_chunks(std::int64_t count,
                    const std::function<void(std::int64_t, std::int64_t)>& fn) {
        if (count <= 0) return;
        const std::int64_t w = workers_;
        const std::int64_t chunk = (count + w - 1) / w;
        if (workers_ == 1 || count <= chunk) {
            run_guarded(fn, 0, count);
            rethrow_if_failed();
            return;
        }
        {
            std::unique_lock lock(mutex_);
            job_fn_ = &fn;
            job_count_ = count;
            job_chunk_ = chunk;
            pending_ = 0;
            for (int i = 1; i < workers_; ++i) {
                if (static_cast<std::int64_t>(i) * chunk < count) ++pending_;
            }
            ++generation_;
        }
        wake_.notify_all();
        run_guarded(fn, 0, std::min(chunk, count));
        {
            std::unique_lock lock(mutex_);
            done_.wait(lock, [this] { return pending_ == 0; });
            job_fn_ = nullptr;
        }
        rethrow_if_failed();
    }

private:
    void worker_loop(int index) {
        std::uint64_t seen = 0;
        for (;;) {
            const std::function<void(std::int64_t, std::int64_t)>* fn = nullptr;
            std::int64_t begin = 0, end = 0;
            {
                std::unique_lock lock(mutex_);
                wake_.wait(lock, [&] { return stop_ || generation_ != seen; });
                if (stop_) return;
                seen = generation_;
                begin = static_cast<std::int64_t>(index) * job_chunk_;
                end = std::min(begin + job_chunk_, job_count_);
                if (begin >= job_count_) continue;
                fn = job_fn_;
            }
            run_guarded(*fn, begin, end);
            {
                std::unique_lock lock(mutex_);
                if (--pending_ == 0) done_.notify_one();
            }
        }
    }

    void run_guarded(const std::function<void(std::int64_t, std::int64_t)>& fn,
                     std::int64_t begin, std::int64_t end) noexcept {
        try {
            fn(begin, end);
        } catch (...) {
            std::unique_lock lock(mutex_);
            if (!failure_) failure_ = std::current_exception();
        }
    }

    void rethrow_if_failed() {
        std::exception_ptr e;
        {
            std::unique_lock lock(mutex_);
            std::swap(e, failure_);
        }
        if (e) std::rethrow_exception(e);
    }

    int workers_;
    std::vector<std::thread> threads_;

    std::mutex mutex_;
    std::condition_variable wake_;
    std::condition_variable done_;
    const std::function<void(std::int64_t, std::int64_t)>* job_fn_ = nullptr;
    std::int64_t job_count_ = 0;
    std::int64_t job_chunk_ = 0;
    int pending_ = 0;
    std::uint64_t generation_ = 0;
    bool stop_ = false;
    std::exception_ptr failure_;
};

/// Convenience: run rows [0, rows) across the pool, or inline when null.
inline void parallel_rows(ThreadPool* pool, std::int64_t rows,
                          const std::function<void(std::int64_t, std::int64_t)>& fn) {
    if (pool == nullptr || pool->worker_count() == 1) {
        fn(0, rows);
    } else {
        pool->run_chunks(rows, fn);
    }
}

} // namespace aco

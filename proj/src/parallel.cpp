#include "stepanov/parallel.hpp"

#include <atomic>
#include <cstdlib>
#include <exception>
#include <mutex>
#include <thread>
#include <vector>

namespace stepanov {

void parallel_for(int count, const std::function<void(int)>& fn) {
    const char* env = std::getenv("STEPANOV_NO_PARALLEL");
    bool serial = env && env[0] == '1';
    unsigned hw = std::thread::hardware_concurrency();
    int workers = static_cast<int>(hw ? hw : 1);
    if (workers > count) workers = count;
    if (serial || workers <= 1) {
        for (int i = 0; i < count; ++i) fn(i);
        return;
    }
    std::atomic<int> next{0};
    std::exception_ptr error;
    std::mutex error_mtx;
    auto work = [&] {
        for (;;) {
            int i = next.fetch_add(1);
            if (i >= count) return;
            try {
                fn(i);
            } catch (...) {
                std::lock_guard<std::mutex> lock(error_mtx);
                if (!error) error = std::current_exception();
            }
        }
    };
    std::vector<std::thread> pool;
    pool.reserve(static_cast<std::size_t>(workers));
    for (int w = 0; w < workers; ++w) pool.emplace_back(work);
    for (auto& t : pool) t.join();
    if (error) std::rethrow_exception(error);
}

} // namespace stepanov

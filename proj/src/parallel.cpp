#include "bethe/parallel.hpp"

#include <algorithm>
#include <atomic>
#include <exception>
#include <mutex>
#include <thread>
#include <vector>

namespace bethe {

void parallel_for(std::size_t count, int threads, const std::function<void(std::size_t)>& fn) {
    const auto workers = static_cast<std::size_t>(std::clamp<long long>(threads, 1, static_cast<long long>(std::max<std::size_t>(count, 1))));
    if (workers <= 1) {
        for (std::size_t k = 0; k < count; ++k) fn(k);
        return;
    }
    std::atomic<std::size_t> next{0};
    std::mutex guard;
    std::exception_ptr error;
    std::size_t error_index = count;
    auto work = [&] {
        for (std::size_t k = next++; k < count; k = next++) {
            try {
                fn(k);
            } catch (...) {
                std::lock_guard lock(guard);
                if (k < error_index) {
                    error_index = k;
                    error = std::current_exception();
                }
            }
        }
    };
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (std::size_t w = 0; w < workers; ++w) pool.emplace_back(work);
    for (auto& t : pool) t.join();
    if (error) std::rethrow_exception(error);
}

}  // namespace bethe

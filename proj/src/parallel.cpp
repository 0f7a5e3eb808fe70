#include "thermopan/parallel.hpp"

#include <cstdlib>
#include <stdexcept>
#include <string>

#include <omp.h>

namespace thermopan {

std::optional<int> configure_threads_from_env() {
    const char* value = std::getenv("THERMOPAN_THREADS");
    if (value == nullptr || *value == '\0') return std::nullopt;
    int threads = 0;
    try {
        threads = std::stoi(value);
    } catch (const std::exception&) {
        throw std::invalid_argument(std::string("THERMOPAN_THREADS is not an integer: ") + value);
    }
    if (threads < 0) throw std::invalid_argument("THERMOPAN_THREADS must be >= 0");
    if (threads == 0) return std::nullopt;
    set_thread_count(threads);
    return threads;
}

void set_thread_count(int threads) {
    if (threads > 0) omp_set_num_threads(threads);
}

int max_threads() noexcept { return omp_get_max_threads(); }

}  // namespace thermopan

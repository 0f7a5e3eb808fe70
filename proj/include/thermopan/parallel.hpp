#pragma once

#include <optional>

namespace thermopan {

/// Reads THERMOPAN_THREADS and caps the OpenMP team size accordingly.
/// 0 or unset means the runtime default. Returns the cap that was applied.
std::optional<int> configure_threads_from_env();

void set_thread_count(int threads);

[[nodiscard]] int max_threads() noexcept;

}  // namespace thermopan

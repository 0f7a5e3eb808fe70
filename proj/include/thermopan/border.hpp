#pragma once

namespace thermopan {

/// Reflect-101 border index (…, 2, 1 | 0, 1, 2, …, n-1 | n-2, …), applied
/// periodically so offsets larger than the extent stay valid.
[[nodiscard]] constexpr int reflect_index(int i, int n) noexcept {
    if (n == 1) return 0;
    const int period = 2 * (n - 1);
    i %= period;
    if (i < 0) i += period;
    return i < n ? i : period - i;
}

}  // namespace thermopan

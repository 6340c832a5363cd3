#pragma once

#include <cstddef>
#include <functional>

namespace cbpv {

/// Stack size for evaluation threads. Deep recursions (long unary
/// arithmetic, long lists) need far more than the platform default.
inline constexpr std::size_t kEvalStackBytes = std::size_t{512} << 20;

/// Runs `fn` to completion on a fresh thread with a stack of `bytes`,
/// rethrowing any exception in the caller.
void with_stack(const std::function<void()>& fn, std::size_t bytes = kEvalStackBytes);

}  // namespace cbpv

// Copyright (c) 2026, The gaitmap Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstddef>
#include <functional>

namespace gaitmap {

/// Calls `body(i)` for every i in [0, count) on up to `threads` workers.
/// Work is handed out dynamically; callers write results into slot i so the
/// outcome never depends on scheduling. The first exception thrown by a body
/// is rethrown after all workers finish.
void parallel_for(std::size_t count, int threads, const std::function<void(std::size_t)>& body);

}  // namespace gaitmap

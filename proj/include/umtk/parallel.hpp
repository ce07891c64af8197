// Copyright (C) 2026 The umtk Authors
// SPDX-License-Identifier: Apache-2.0
//

#pragma once

#include <cstddef>
#include <functional>

namespace umtk {

/// Hardware concurrency, at least 1.
unsigned default_workers() noexcept;

/// Runs fn(0..count-1) on up to `workers` threads. Callers write results by
/// index so output order never depends on scheduling. If any call throws,
/// the exception from the lowest failing index is rethrown after all
/// workers finish.
void parallel_for(std::size_t count, unsigned workers, const std::function<void(std::size_t)>& fn);

} // namespace umtk

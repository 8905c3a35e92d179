/*!
 * This file is part of lurk, a C++ library for penalized land-use regression
 * kriging with Vecchia-approximated Gaussian-process errors.
 *
 * Licensed under the Apache License, Version 2.0. See LICENSE file in the
 * project root for license information.
 */
#ifndef LURK_PARALLEL_HPP
#define LURK_PARALLEL_HPP

#include <functional>

namespace lurk {

/*! Max worker threads: hardware concurrency, capped by the VECCHIA_THREADS
 *  environment variable when set. Always >= 1. */
int max_threads();

/*! Run fn(i) for i in [begin, end) across worker threads with a static
 *  partition. Results must be written to disjoint slots so the outcome is
 *  independent of scheduling. Nested calls run inline on the calling thread. */
void parallel_for(int begin, int end, const std::function<void(int)>& fn);

}  // namespace lurk

#endif  // LURK_PARALLEL_HPP

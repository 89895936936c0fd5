// SPDX-License-Identifier: Apache-2.0
#include "denslab/core/parallel.hpp"

#include <algorithm>
#include <atomic>

namespace denslab {
namespace {
std::atomic<int> g_threads{1};
}

void set_num_threads(int n) { g_threads.store(std::max(1, n)); }
int num_threads() { return g_threads.load(); }

}  // namespace denslab

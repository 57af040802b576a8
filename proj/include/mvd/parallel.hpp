#pragma once

#include <functional>

namespace mvd {

// Worker-thread count used by the per-pixel maps inside energies and
// gradients.  Results are independent of the setting: parallel phases
// only fill disjoint per-pixel slots, and reductions sum those slots in
// index order afterwards.
int solver_threads();
void set_solver_threads(int threads);

// fn(begin, end) over a partition of [0, n)
void parallel_ranges(int n, const std::function<void(int, int)>& fn);

double parallel_sum(int n, const std::function<double(int)>& per_index);

}  // namespace mvd

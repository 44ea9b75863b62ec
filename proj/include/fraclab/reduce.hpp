#ifndef FRACLAB_REDUCE_HPP
#define FRACLAB_REDUCE_HPP

#include <cstddef>
#include <functional>
#include <span>
#include <vector>

namespace fraclab {

/** Worker-pool size used by the data-parallel loops. Results never depend
 * on it: work is split into fixed blocks and combined in a fixed order. */
void set_thread_budget(int k);
int thread_budget();

/** Fixed-shape pairwise (tree) summation; the result depends only on the
 * order of `v`, never on thread count. */
double pairwise_sum(std::span<const double> v);

/** Evaluates fn(i) for i in [0,count) in parallel and returns the values
 * in index order. Each slot is written by exactly one invocation. */
std::vector<double> parallel_map(std::size_t count,
                                 const std::function<double(std::size_t)>& fn);

/** parallel_map followed by pairwise_sum. */
double parallel_reduce(std::size_t count,
                       const std::function<double(std::size_t)>& fn);

/** Runs fn(begin,end) over disjoint chunks of [0,count) in parallel. */
void parallel_chunks(std::size_t count,
                     const std::function<void(std::size_t, std::size_t)>& fn);

}  // namespace fraclab

#endif

// Copyright The maxdd Authors.
// SPDX-License-Identifier: Apache-2.0

#ifndef MAXDD_PARALLEL_HPP
#define MAXDD_PARALLEL_HPP

#include <algorithm>
#include <atomic>
#include <exception>
#include <mutex>
#include <thread>
#include <vector>

namespace maxdd
{

// Runs fn(i) for i in [0, n) on up to `threads` workers. Each index is handled exactly once;
// the first exception thrown by any task is rethrown on the calling thread.
template <typename Fn>
void parallel_for(int n, int threads, Fn &&fn)
{
  const int workers = std::clamp(threads, 1, std::max(n, 1));
  if (workers == 1)
  {
    for (int i = 0; i < n; ++i)
    {
      fn(i);
    }
    return;
  }
  std::atomic<int> next{0};
  std::exception_ptr error;
  std::mutex error_mutex;
  auto work = [&]()
  {
    for (int i = next++; i < n; i = next++)
    {
      try
      {
        fn(i);
      }
      catch (...)
      {
        std::lock_guard lock(error_mutex);
        if (!error)
        {
          error = std::current_exception();
        }
      }
    }
  };
  std::vector<std::thread> pool;
  pool.reserve(workers - 1);
  for (int w = 1; w < workers; ++w)
  {
    pool.emplace_back(work);
  }
  work();
  for (auto &t : pool)
  {
    t.join();
  }
  if (error)
  {
    std::rethrow_exception(error);
  }
}

}  // namespace maxdd

#endif  // MAXDD_PARALLEL_HPP

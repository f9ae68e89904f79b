// Copyright 2026 The knotmppi Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef KNOTMPPI_MPPI_THREADPOOL_H_
#define KNOTMPPI_MPPI_THREADPOOL_H_

#include <condition_variable>
#include <functional>
#include <mutex>
#include <queue>
#include <thread>
#include <vector>

namespace mppi {

// Fixed pool of worker threads with a completion counter. Created once and
// reused across planner iterations.
class ThreadPool {
 public:
  explicit ThreadPool(int num_threads);
  ~ThreadPool();

  ThreadPool(const ThreadPool&) = delete;
  ThreadPool& operator=(const ThreadPool&) = delete;

  int NumThreads() const { return static_cast<int>(threads_.size()); }

  void Schedule(std::function<void()> task);

  // blocks until `value` tasks have completed since the last ResetCount
  void WaitCount(int value);
  void ResetCount();

 private:
  void Worker();

  std::mutex mutex_;
  std::condition_variable worker_cv_;
  std::condition_variable count_cv_;
  std::queue<std::function<void()>> queue_;
  int completed_ = 0;
  bool stop_ = false;
  std::vector<std::thread> threads_;
};

}  // namespace mppi

#endif  // KNOTMPPI_MPPI_THREADPOOL_H_

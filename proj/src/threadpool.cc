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

#include "mppi/threadpool.h"

#include <stdexcept>
#include <utility>

namespace mppi {

ThreadPool::ThreadPool(int num_threads) {
  if (num_threads < 0) {
    throw std::invalid_argument("ThreadPool: num_threads must be >= 0");
  }
  threads_.reserve(num_threads);
  for (int i = 0; i < num_threads; ++i) {
    threads_.emplace_back(&ThreadPool::Worker, this);
  }
}

ThreadPool::~ThreadPool() {
  {
    std::unique_lock<std::mutex> lock(mutex_);
    stop_ = true;
  }
  worker_cv_.notify_all();
  for (std::thread& thread : threads_) {
    thread.join();
  }
}

void ThreadPool::Schedule(std::function<void()> task) {
  {
    std::unique_lock<std::mutex> lock(mutex_);
    queue_.push(std::move(task));
  }
  worker_cv_.notify_one();
}

void ThreadPool::WaitCount(int value) {
  std::unique_lock<std::mutex> lock(mutex_);
  count_cv_.wait(lock, [this, value] { return completed_ >= value; });
}

void ThreadPool::ResetCount() {
  std::unique_lock<std::mutex> lock(mutex_);
  completed_ = 0;
}

void ThreadPool::Worker() {
  while (true) {
    std::function<void()> task;
    {
      std::unique_lock<std::mutex> lock(mutex_);
      worker_cv_.wait(lock, [this] { return stop_ || !queue_.empty(); });
      if (stop_ && queue_.empty()) {
        return;
      }
      task = std::move(queue_.front());
      queue_.pop();
    }
    task();
    {
      std::unique_lock<std::mutex> lock(mutex_);
      ++completed_;
    }
    count_cv_.notify_all();
  }
}

}  // namespace mppi

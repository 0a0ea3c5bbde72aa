#include "cwrm/parallel.hpp"

#include <atomic>
#include <cstdlib>
#include <exception>
#include <mutex>
#include <string>
#include <thread>
#include <vector>

namespace cwrm {

int resolve_thread_count(int requested, int n_tasks) {
  int count = requested;
  if (count <= 0) {
    if (const char* env = std::getenv("CWRM_THREADS")) {
      try {
        count = std::stoi(env);
      } catch (...) {
        count = 0;
      }
    }
  }
  if (count <= 0) {
    count = static_cast<int>(std::thread::hardware_concurrency());
  }
  if (count < 1) count = 1;
  if (count > n_tasks) count = n_tasks;
  return count;
}

void parallel_for(int n_tasks, int n_threads,
                  const std::function<void(int)>& body) {
  if (n_tasks <= 0) return;
  if (n_threads <= 1 || n_tasks == 1) {
    for (int i = 0; i < n_tasks; ++i) body(i);
    return;
  }
  std::atomic<int> next{0};
  std::exception_ptr first_error;
  std::mutex error_mutex;
  auto worker = [&] {
    for (;;) {
      const int task = next.fetch_add(1);
      if (task >= n_tasks) return;
      try {
        body(task);
      } catch (...) {
        std::lock_guard<std::mutex> lock(error_mutex);
        if (!first_error) first_error = std::current_exception();
      }
    }
  };
  std::vector<std::thread> workers;
  workers.reserve(n_threads);
  for (int t = 0; t < n_threads; ++t) workers.emplace_back(worker);
  for (auto& w : workers) w.join();
  if (first_error) std::rethrow_exception(first_error);
}

}  // namespace cwrm

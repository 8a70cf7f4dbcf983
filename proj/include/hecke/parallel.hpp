#pragma once

#include <algorithm>
#include <cstddef>
#include <exception>
#include <thread>
#include <vector>

namespace hecke {

inline unsigned default_threads() { return std::max(1u, std::thread::hardware_concurrency()); }

/// Runs work(i, slot) for i in [0, count) in batches of `threads`, then
/// consume(i, slot) strictly in ascending i. Each in-flight index gets its
/// own slot in [0, threads), so consumers see results in a fixed order
/// whatever the thread count.
template <typename Work, typename Consume>
void ordered_batches(std::size_t count, unsigned threads, Work&& work, Consume&& consume) {
  threads = std::max(1u, threads);
  if (threads == 1) {
    for (std::size_t i = 0; i < count; ++i) {
      work(i, 0u);
      consume(i, 0u);
    }
    return;
  }
  std::vector<std::exception_ptr> errors(threads);
  for (std::size_t base = 0; base < count; base += threads) {
    const auto batch = static_cast<unsigned>(std::min<std::size_t>(threads, count - base));
    std::vector<std::thread> pool;
    pool.reserve(batch);
    for (unsigned slot = 0; slot < batch; ++slot) {
      pool.emplace_back([&, slot] {
        try {
          work(base + slot, slot);
        } catch (...) {
          errors[slot] = std::current_exception();
        }
      });
    }
    for (auto& t : pool) t.join();
    for (unsigned slot = 0; slot < batch; ++slot) {
      if (errors[slot]) std::rethrow_exception(errors[slot]);
      consume(base + slot, slot);
    }
  }
}

}  // namespace hecke

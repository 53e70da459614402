#include "lvc/parallel.hpp"

#include <algorithm>
#include <charconv>
#include <cstdlib>
#include <cstring>
#include <string>
#include <thread>
#include <vector>

#include "lvc/error.hpp"

namespace lvc {

void parallel_for(std::size_t count, unsigned threads,
                  const std::function<void(std::size_t, std::size_t)>& body) {
  const std::size_t workers = std::min<std::size_t>(std::max(threads, 1u), count);
  if (workers <= 1) {
    if (count > 0) body(0, count);
    return;
  }
  const std::size_t chunk = (count + workers - 1) / workers;
  std::vector<std::jthread> pool;
  pool.reserve(workers - 1);
  for (std::size_t t = 1; t < workers; ++t) {
    const std::size_t begin = t * chunk;
    const std::size_t end = std::min(count, begin + chunk);
    if (begin < end) pool.emplace_back([&body, begin, end] { body(begin, end); });
  }
  body(0, std::min(count, chunk));
}

unsigned threads_from_env() {
  const char* raw = std::getenv("LVC_THREADS");
  if (raw == nullptr || *raw == '\0') return std::max(1u, std::thread::hardware_concurrency());
  unsigned value = 0;
  const char* end = raw + std::strlen(raw);
  auto [ptr, ec] = std::from_chars(raw, end, value);
  if (ec != std::errc() || ptr != end || value == 0) {
    throw Error(ErrorCode::InvalidConfig,
                std::string("LVC_THREADS must be a positive integer, got '") + raw + "'");
  }
  return value;
}

}  // namespace lvc

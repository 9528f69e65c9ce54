#include "strand/parallel.hpp"

#include <algorithm>
#include <cstdlib>
#include <thread>
#include <vector>

namespace strand {

namespace {
constexpr std::size_t kMinChunk = 4096;
}

unsigned parallel_width() {
    if (const char* env = std::getenv("STRAND_THREADS")) {
        const long n = std::strtol(env, nullptr, 10);
        if (n > 0) return static_cast<unsigned>(n);
    }
    return std::max(1u, std::thread::hardware_concurrency());
}

void parallel_for(std::size_t n, const std::function<void(std::size_t, std::size_t)>& body) {
    const std::size_t width =
        std::min<std::size_t>(parallel_width(), std::max<std::size_t>(1, n / kMinChunk));
    if (width <= 1) {
        body(0, n);
        return;
    }
    std::vector<std::thread> workers;
    workers.reserve(width - 1);
    const std::size_t chunk = (n + width - 1) / width;
    for (std::size_t w = 1; w < width; ++w) {
        const std::size_t begin = w * chunk;
        const std::size_t end = std::min(n, begin + chunk);
        if (begin >= end) break;
        workers.emplace_back(body, begin, end);
    }
    body(0, std::min(n, chunk));
    for (auto& t : workers) t.join();
}

}  // namespace strand

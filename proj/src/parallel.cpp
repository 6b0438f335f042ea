#include "eit/parallel.hpp"

#include <cstdlib>
#include <string>

namespace eit {

std::size_t worker_count() {
    if (const char* env = std::getenv("EIT_THREADS")) {
        try {
            const long n = std::stol(env);
            if (n >= 1) return static_cast<std::size_t>(n);
        } catch (const std::exception&) {
            // fall through to the hardware default
        }
    }
    return std::max(1u, std::thread::hardware_concurrency());
}

} // namespace eit

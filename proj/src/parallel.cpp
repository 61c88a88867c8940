#include "drinf/parallel.hpp"

#include <cstdlib>
#include <string>

namespace drinf {

std::size_t worker_count() {
    std::size_t requested = 0;
    if (const char* env = std::getenv("DRINF_THREADS")) {
        try {
            requested = std::stoul(env);
        } catch (const std::exception&) {
            requested = 0;
        }
    }
    if (requested == 0) {
        requested = std::thread::hardware_concurrency();
    }
    return requested == 0 ? 1 : requested;
}

}  // namespace drinf

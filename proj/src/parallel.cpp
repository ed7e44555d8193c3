#include "imab/parallel.hpp"

#include <cstdlib>
#include <string>

namespace imab {

std::size_t thread_budget() {
    std::size_t workers = std::max(1u, std::thread::hardware_concurrency());
    if (const char* env = std::getenv("IMAB_THREADS")) {
        try {
            const long cap = std::stol(env);
            if (cap >= 1) workers = std::min(workers, static_cast<std::size_t>(cap));
        } catch (const std::exception&) {
            // unparsable values leave the hardware count in place
        }
    }
    return workers;
}

}  // namespace imab

#include "chainscope/parallel.hpp"

#include <atomic>
#include <cstdlib>
#include <string>

namespace chainscope {
namespace {

unsigned initial_jobs() {
    if (const char* env = std::getenv("CHAINSCOPE_JOBS")) {
        try {
            const long v = std::stol(env);
            if (v > 0) return static_cast<unsigned>(v);
        } catch (...) {
        }
    }
    const unsigned hw = std::thread::hardware_concurrency();
    return hw == 0 ? 1 : hw;
}

std::atomic<unsigned>& jobs_slot() {
    static std::atomic<unsigned> jobs{initial_jobs()};
    return jobs;
}

}  // namespace

unsigned default_jobs() { return jobs_slot().load(); }

void set_default_jobs(unsigned jobs) { jobs_slot().store(jobs == 0 ? 1 : jobs); }

}  // namespace chainscope

#include <atomic>
#include <cstdlib>
#include <string_view>

#include "chainscope/kernels.hpp"

namespace chainscope::kernels {
namespace {

const KernelTable* initial_table() {
    if (const char* env = std::getenv("CHAINSCOPE_SIMD")) {
        const std::string_view wanted{env};
        if (wanted == "scalar") return &scalar_table();
        if (wanted == "avx2" && avx2_table() != nullptr) return avx2_table();
    }
    if (const KernelTable* t = avx2_table()) return t;
    return &scalar_table();
}

std::atomic<const KernelTable*>& current() {
    static std::atomic<const KernelTable*> table{initial_table()};
    return table;
}

}  // namespace

const KernelTable& active() { return *current().load(std::memory_order_acquire); }

bool select(std::string_view name) {
    const KernelTable* t = nullptr;
    if (name == "scalar") t = &scalar_table();
    else if (name == "avx2") t = avx2_table();
    if (t == nullptr) return false;
    current().store(t, std::memory_order_release);
    return true;
}

}  // namespace chainscope::kernels

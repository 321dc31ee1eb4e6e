#include "mcft/kernels.hpp"

#include <atomic>

namespace mcft::kernels {

namespace {
std::atomic<ExecMode> g_mode{
#ifdef MCFT_HAVE_OPENMP
    ExecMode::parallel
#else
    ExecMode::serial
#endif
};
}

ExecMode exec_mode() { return g_mode.load(std::memory_order_relaxed); }
void set_exec_mode(ExecMode m) { g_mode.store(m, std::memory_order_relaxed); }

}  // namespace mcft::kernels

#include "catqcf/fft.hpp"

#include <fftw3.h>

#include <map>
#include <memory>
#include <mutex>
#include <stdexcept>
#include <utility>
#include <vector>

namespace catqcf::fft {
namespace {

struct PlanDeleter {
    void operator()(fftw_plan_s* p) const { fftw_destroy_plan(p); }
};
using PlanHandle = std::unique_ptr<fftw_plan_s, PlanDeleter>;

struct PlanPair {
    PlanHandle fwd;
    PlanHandle bwd;
};

std::mutex& planner_mutex() {
    static std::mutex m;
    return m;
}

// FFTW planning is not thread-safe, execution with fftw_execute_dft is.
// FFTW_UNALIGNED lets us execute the cached plans on arbitrary buffers.
const PlanPair& plans_for(int length) {
    static std::map<int, PlanPair> cache;
    std::lock_guard lock(planner_mutex());
    auto it = cache.find(length);
    if (it != cache.end()) return it->second;

    std::vector<cplx> scratch(static_cast<std::size_t>(length));
    auto* buf = reinterpret_cast<fftw_complex*>(scratch.data());
    const unsigned flags = FFTW_ESTIMATE | FFTW_UNALIGNED;
    PlanPair pair{PlanHandle(fftw_plan_dft_1d(length, buf, buf, FFTW_FORWARD, flags)),
                  PlanHandle(fftw_plan_dft_1d(length, buf, buf, FFTW_BACKWARD, flags))};
    if (!pair.fwd || !pair.bwd) throw std::runtime_error("fftw: plan creation failed");
    return cache.emplace(length, std::move(pair)).first->second;
}

void execute(fftw_plan_s* plan, std::span<cplx> data) {
    auto* buf = reinterpret_cast<fftw_complex*>(data.data());
    fftw_execute_dft(plan, buf, buf);
}

}  // namespace

void forward(std::span<cplx> data) {
    if (data.empty()) return;
    execute(plans_for(static_cast<int>(data.size())).fwd.get(), data);
}

void backward(std::span<cplx> data) {
    if (data.empty()) return;
    execute(plans_for(static_cast<int>(data.size())).bwd.get(), data);
}

}  // namespace catqcf::fft

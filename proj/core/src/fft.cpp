#include "eitmem/fft.hpp"

#include <fftw3.h>

#include <cstring>
#include <map>
#include <memory>
#include <mutex>

#include "eitmem/error.hpp"

namespace eitmem::fft {

namespace {

// FFTW planning is not thread-safe, and FFTW may pick different codelets for
// differently aligned arrays. Every transform therefore runs through a cached
// plan on its own fftw_malloc'd buffer, which keeps results bitwise
// reproducible regardless of the caller's allocation.
struct Plan
{
    std::size_t n = 0;
    fftw_complex* buffer = nullptr;
    fftw_plan forward = nullptr;
    fftw_plan backward = nullptr;
    std::mutex exec_mutex;

    explicit Plan(std::size_t size) : n(size)
    {
        buffer = fftw_alloc_complex(n);
        if (buffer == nullptr) {
            fail(ErrorCategory::numerics, "fftw_alloc_complex failed");
        }
        const int ni = static_cast<int>(n);
        forward = fftw_plan_dft_1d(ni, buffer, buffer, FFTW_FORWARD, FFTW_ESTIMATE);
        backward = fftw_plan_dft_1d(ni, buffer, buffer, FFTW_BACKWARD, FFTW_ESTIMATE);
    }

    ~Plan()
    {
        fftw_destroy_plan(forward);
        fftw_destroy_plan(backward);
        fftw_free(buffer);
    }

    Plan(const Plan&) = delete;
    Plan& operator=(const Plan&) = delete;
};

std::mutex g_planner_mutex;

Plan& plan_for(std::size_t n)
{
    static std::map<std::size_t, std::unique_ptr<Plan>> cache;
    std::lock_guard lock(g_planner_mutex);
    auto& slot = cache[n];
    if (!slot) {
        slot = std::make_unique<Plan>(n);
    }
    return *slot;
}

void run(std::span<cplx> data, bool is_forward)
{
    if (data.empty()) {
        return;
    }
    Plan& plan = plan_for(data.size());
    std::lock_guard lock(plan.exec_mutex);
    std::memcpy(plan.buffer, data.data(), data.size() * sizeof(cplx));
    fftw_execute(is_forward ? plan.forward : plan.backward);
    std::memcpy(static_cast<void*>(data.data()), plan.buffer, data.size() * sizeof(cplx));
    if (!is_forward) {
        const double inv_n = 1.0 / static_cast<double>(data.size());
        for (auto& v : data) {
            v *= inv_n;
        }
    }
}

} // namespace

void forward_inplace(std::span<cplx> x)
{
    run(x, true);
}

void inverse_inplace(std::span<cplx> X)
{
    run(X, false);
}

std::vector<cplx> forward(std::span<const cplx> x)
{
    std::vector<cplx> out(x.begin(), x.end());
    forward_inplace(out);
    return out;
}

std::vector<cplx> inverse(std::span<const cplx> X)
{
    std::vector<cplx> out(X.begin(), X.end());
    inverse_inplace(out);
    return out;
}

} // namespace eitmem::fft

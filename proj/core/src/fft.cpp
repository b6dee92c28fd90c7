#include "fft.hpp"

#include <mutex>
#include <new>

namespace ridgekit::detail {

namespace {
// FFTW planning is not thread-safe; execution with fftw_execute_dft is.
std::mutex& planner_mutex() {
    static std::mutex m;
    return m;
}

fftw_complex* allocate(std::size_t n) {
    auto* p = static_cast<fftw_complex*>(fftw_malloc(sizeof(fftw_complex) * n));
    if (p == nullptr) throw std::bad_alloc();
    return p;
}
}  // namespace

ForwardFft::ForwardFft(std::size_t n) : n_(n), buf_(allocate(n)) {
    std::lock_guard lock(planner_mutex());
    plan_ = fftw_plan_dft_1d(static_cast<int>(n), buf_, buf_, FFTW_FORWARD, FFTW_ESTIMATE);
}

ForwardFft::~ForwardFft() {
    {
        std::lock_guard lock(planner_mutex());
        fftw_destroy_plan(plan_);
    }
    fftw_free(buf_);
}

void ForwardFft::execute() { fftw_execute_dft(plan_, buf_, buf_); }

InverseFft::InverseFft(std::size_t n) : n_(n), buf_(allocate(n)) {
    std::lock_guard lock(planner_mutex());
    plan_ = fftw_plan_dft_1d(static_cast<int>(n), buf_, buf_, FFTW_BACKWARD, FFTW_ESTIMATE);
}

InverseFft::~InverseFft() {
    {
        std::lock_guard lock(planner_mutex());
        fftw_destroy_plan(plan_);
    }
    fftw_free(buf_);
}

void InverseFft::execute() { fftw_execute_dft(plan_, buf_, buf_); }

}  // namespace ridgekit::detail

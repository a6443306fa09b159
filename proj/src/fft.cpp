#include "afcsim/fft.hpp"

#include <fftw3.h>

#include <mutex>
#include <stdexcept>

namespace afcsim {

namespace {

// FFTW's planner is not thread-safe and plan execution must not share
// buffers, so all transforms run under one lock. Transforms here are
// ~2^14 points; contention is irrelevant next to the math.
std::mutex& fft_mutex() {
    static std::mutex m;
    return m;
}

void run_plan(cvec& data, int sign) {
    if (data.empty()) throw std::invalid_argument("fft: empty input");
    std::lock_guard<std::mutex> lock(fft_mutex());
    auto* buf = reinterpret_cast<fftw_complex*>(data.data());
    fftw_plan plan = fftw_plan_dft_1d(static_cast<int>(data.size()), buf, buf, sign, FFTW_ESTIMATE);
    if (!plan) throw std::runtime_error("fft: planning failed");
    fftw_execute(plan);
    fftw_destroy_plan(plan);
}

}  // namespace

void fft_forward(cvec& data) {
    run_plan(data, FFTW_FORWARD);
}

void fft_inverse(cvec& data) {
    run_plan(data, FFTW_BACKWARD);
    const double scale = 1.0 / static_cast<double>(data.size());
    for (auto& z : data) z *= scale;
}

}  // namespace afcsim

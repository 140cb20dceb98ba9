#include "fft.hpp"

#include <fftw3.h>

#include <mutex>

namespace tomokit::detail {

namespace {
std::mutex planner_mutex;  // FFTW planning is not thread-safe
}

void fft(std::vector<std::complex<double>>& data, int rank, const std::array<std::size_t, 3>& shape, int sign) {
    if (data.empty()) return;
    int n[3];
    for (int a = 0; a < rank; ++a) n[a] = static_cast<int>(shape[a]);
    auto* ptr = reinterpret_cast<fftw_complex*>(data.data());
    fftw_plan plan;
    {
        std::lock_guard<std::mutex> lock(planner_mutex);
        plan = fftw_plan_dft(rank, n, ptr, ptr, sign < 0 ? FFTW_FORWARD : FFTW_BACKWARD, FFTW_ESTIMATE);
    }
    fftw_execute(plan);
    std::lock_guard<std::mutex> lock(planner_mutex);
    fftw_destroy_plan(plan);
}

}  // namespace tomokit::detail

#include "fft.hpp"

#include <algorithm>
#include <complex>
#include <memory>
#include <mutex>
#include <stdexcept>

#include <fftw3.h>

namespace renyi::detail {

namespace {

// The FFTW planner is not thread-safe; execution is.
std::mutex g_planner_mutex;

struct FftwFree {
    void operator()(void* p) const noexcept { fftw_free(p); }
};

template <class T>
using FftwBuffer = std::unique_ptr<T[], FftwFree>;

template <class T>
FftwBuffer<T> allocate(std::size_t n) {
    auto* p = static_cast<T*>(fftw_malloc(sizeof(T) * n));
    if (p == nullptr) throw std::bad_alloc();
    return FftwBuffer<T>(p);
}

class Plan {
public:
    explicit Plan(fftw_plan p) : p_(p) {
        if (p_ == nullptr) throw std::runtime_error("FFTW planning failed");
    }
    ~Plan() {
        std::lock_guard lock(g_planner_mutex);
        fftw_destroy_plan(p_);
    }
    Plan(const Plan&) = delete;
    Plan& operator=(const Plan&) = delete;
    void execute() const { fftw_execute(p_); }

private:
    fftw_plan p_;
};

std::size_t padded_size(std::size_t n) {
    std::size_t p = 1;
    while (p < n) p <<= 1;
    return p;
}

} // namespace

std::vector<double> fft_convolve(std::span<const double> a, std::span<const double> b) {
    if (a.empty() || b.empty()) throw std::invalid_argument("fft_convolve: empty input");
    const std::size_t out_len = a.size() + b.size() - 1;
    const std::size_t n = padded_size(out_len);
    const std::size_t nc = n / 2 + 1;

    auto ra = allocate<double>(n);
    auto rb = allocate<double>(n);
    auto ca = allocate<fftw_complex>(nc);
    auto cb = allocate<fftw_complex>(nc);

    std::unique_ptr<Plan> fa, fb, back;
    {
        std::lock_guard lock(g_planner_mutex);
        const int ni = static_cast<int>(n);
        fa = std::make_unique<Plan>(fftw_plan_dft_r2c_1d(ni, ra.get(), ca.get(), FFTW_ESTIMATE));
        fb = std::make_unique<Plan>(fftw_plan_dft_r2c_1d(ni, rb.get(), cb.get(), FFTW_ESTIMATE));
        back = std::make_unique<Plan>(fftw_plan_dft_c2r_1d(ni, ca.get(), ra.get(), FFTW_ESTIMATE));
    }

    std::fill(ra.get(), ra.get() + n, 0.0);
    std::fill(rb.get(), rb.get() + n, 0.0);
    std::copy(a.begin(), a.end(), ra.get());
    std::copy(b.begin(), b.end(), rb.get());
    fa->execute();
    fb->execute();
    for (std::size_t k = 0; k < nc; ++k) {
        const double re = ca[k][0] * cb[k][0] - ca[k][1] * cb[k][1];
        const double im = ca[k][0] * cb[k][1] + ca[k][1] * cb[k][0];
        ca[k][0] = re;
        ca[k][1] = im;
    }
    back->execute();

    std::vector<double> out(out_len);
    const double inv = 1.0 / static_cast<double>(n);
    for (std::size_t k = 0; k < out_len; ++k) out[k] = ra[k] * inv;
    return out;
}

} // namespace renyi::detail

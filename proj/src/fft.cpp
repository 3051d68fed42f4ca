#include "lmr/fft.hpp"

#include <fftw3.h>

#include <algorithm>
#include <complex>
#include <cstring>
#include <memory>
#include <mutex>
#include <stdexcept>

namespace lmr {
namespace {

std::mutex& planner_mutex() {
    static std::mutex m;
    return m;
}

struct FftwFree {
    void operator()(void* p) const { fftw_free(p); }
};
template <class T>
using fftw_ptr = std::unique_ptr<T[], FftwFree>;

template <class T>
fftw_ptr<T> fftw_alloc(std::size_t n) {
    T* p = static_cast<T*>(fftw_malloc(sizeof(T) * std::max<std::size_t>(n, 1)));
    if (!p) throw std::bad_alloc();
    return fftw_ptr<T>(p);
}

// r2c / c2r pair of one size, with owned buffers.
class RealFft {
public:
    explicit RealFft(std::size_t n)
        : n_(n), buf_(fftw_alloc<double>(n)), spec_(fftw_alloc<fftw_complex>(n / 2 + 1)) {
        std::lock_guard<std::mutex> lock(planner_mutex());
        fwd_ = fftw_plan_dft_r2c_1d(static_cast<int>(n), buf_.get(), spec_.get(), FFTW_ESTIMATE);
        inv_ = fftw_plan_dft_c2r_1d(static_cast<int>(n), spec_.get(), buf_.get(), FFTW_ESTIMATE);
        if (!fwd_ || !inv_) throw std::runtime_error("fftw plan creation failed");
    }
    ~RealFft() {
        std::lock_guard<std::mutex> lock(planner_mutex());
        fftw_destroy_plan(fwd_);
        fftw_destroy_plan(inv_);
    }
    RealFft(const RealFft&) = delete;
    RealFft& operator=(const RealFft&) = delete;

    double* real() { return buf_.get(); }
    fftw_complex* spectrum() { return spec_.get(); }
    std::size_t bins() const { return n_ / 2 + 1; }
    void forward() { fftw_execute(fwd_); }
    void inverse() { fftw_execute(inv_); }

    // Loads x (zero-padded), transforms, and copies the spectrum out.
    std::vector<std::complex<double>> transform(const double* x, std::size_t nx) {
        std::memset(buf_.get(), 0, sizeof(double) * n_);
        std::copy(x, x + nx, buf_.get());
        forward();
        std::vector<std::complex<double>> out(bins());
        for (std::size_t k = 0; k < bins(); ++k) out[k] = {spec_[k][0], spec_[k][1]};
        return out;
    }

    void multiply(const std::vector<std::complex<double>>& H, bool conjugate) {
        const double scale = 1.0 / static_cast<double>(n_);
        for (std::size_t k = 0; k < bins(); ++k) {
            const std::complex<double> a(spec_[k][0], spec_[k][1]);
            const std::complex<double> b = conjugate ? std::conj(H[k]) : H[k];
            const std::complex<double> c = a * b * scale;
            spec_[k][0] = c.real();
            spec_[k][1] = c.imag();
        }
    }

private:
    std::size_t n_;
    fftw_ptr<double> buf_;
    fftw_ptr<fftw_complex> spec_;
    fftw_plan fwd_ = nullptr, inv_ = nullptr;
};

}  // namespace

std::size_t next_pow2(std::size_t n) {
    std::size_t p = 1;
    while (p < n) p <<= 1;
    return p;
}

std::vector<double> fft_convolve(const double* x, std::size_t nx, const double* h, std::size_t nh) {
    if (nx == 0 || nh == 0) return {};
    const std::size_t ny = nx + nh - 1;
    RealFft f(next_pow2(ny));
    const auto H = f.transform(h, nh);
    f.transform(x, nx);
    f.multiply(H, false);
    f.inverse();
    return std::vector<double>(f.real(), f.real() + ny);
}

std::vector<double> overlap_add(const double* x, std::size_t nx, const double* h, std::size_t nh,
                                std::size_t block) {
    if (nx == 0 || nh == 0) return {};
    if (block == 0) throw std::invalid_argument("overlap_add: block must be positive");
    const std::size_t ny = nx + nh - 1;
    const std::size_t n = next_pow2(block + nh - 1);
    RealFft f(n);
    const auto H = f.transform(h, nh);
    std::vector<double> y(ny, 0.0);
    for (std::size_t start = 0; start < nx; start += block) {
        const std::size_t len = std::min(block, nx - start);
        f.transform(x + start, len);
        f.multiply(H, false);
        f.inverse();
        const std::size_t out = std::min(len + nh - 1, ny - start);
        for (std::size_t k = 0; k < out; ++k) y[start + k] += f.real()[k];
    }
    return y;
}

std::vector<double> fft_correlate(const double* x, std::size_t nx, const double* y, std::size_t ny) {
    if (nx == 0 || ny == 0) return std::vector<double>(ny, 0.0);
    // c[k] = sum_i x[i] y[i+k]: multiply Y by conj(X) with enough padding to
    // keep negative lags from wrapping onto 0..ny-1.
    RealFft f(next_pow2(nx + ny));
    const auto X = f.transform(x, nx);
    f.transform(y, ny);
    f.multiply(X, true);
    f.inverse();
    return std::vector<double>(f.real(), f.real() + ny);
}

struct CircularConvolver::Impl {
    explicit Impl(std::size_t n) : fft(n) {}
    RealFft fft;
    std::vector<std::complex<double>> H;
};

CircularConvolver::CircularConvolver(const double* h, std::size_t nh, std::size_t n)
    : impl_(std::make_unique<Impl>(n)) {
    if (nh > n) throw std::invalid_argument("CircularConvolver: kernel longer than transform");
    impl_->H = impl_->fft.transform(h, nh);
}

CircularConvolver::~CircularConvolver() = default;

std::size_t CircularConvolver::size() const { return 2 * (impl_->fft.bins() - 1); }

void CircularConvolver::apply(const double* seg, double* out) {
    RealFft& f = impl_->fft;
    const std::size_t n = size();
    f.transform(seg, n);
    f.multiply(impl_->H, false);
    f.inverse();
    std::copy(f.real(), f.real() + n, out);
}

}  // namespace lmr

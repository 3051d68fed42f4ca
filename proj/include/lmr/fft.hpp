#pragma once

// Real linear convolution through FFTW. Plans are created with FFTW_ESTIMATE
// so results do not depend on timing measurements.

#include <cstddef>
#include <memory>
#include <vector>

namespace lmr {

std::size_t next_pow2(std::size_t n);

/// Full linear convolution (length nx + nh - 1) by a single transform.
std::vector<double> fft_convolve(const double* x, std::size_t nx, const double* h, std::size_t nh);

/// Full linear convolution by overlap-add with input blocks of `block`
/// samples; memory is O(block + nh) beyond the output.
std::vector<double> overlap_add(const double* x, std::size_t nx, const double* h, std::size_t nh,
                                std::size_t block);

/// c[k] = sum_i x[i] y[i + k] for k = 0..ny-1 (cross-correlation, x shorter or equal).
std::vector<double> fft_correlate(const double* x, std::size_t nx, const double* y, std::size_t ny);

/// Repeated circular convolution of length-n segments with one fixed kernel.
class CircularConvolver {
public:
    CircularConvolver(const double* h, std::size_t nh, std::size_t n);
    ~CircularConvolver();
    CircularConvolver(const CircularConvolver&) = delete;
    CircularConvolver& operator=(const CircularConvolver&) = delete;

    std::size_t size() const;
    /// out[k] = sum_i h[i] seg[(k - i) mod n]; seg and out hold n values.
    void apply(const double* seg, double* out);

private:
    struct Impl;
    std::unique_ptr<Impl> impl_;
};

}  // namespace lmr

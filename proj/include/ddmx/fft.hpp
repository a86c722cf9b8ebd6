#ifndef DDMX_FFT_HPP
#define DDMX_FFT_HPP

#include <complex>
#include <map>
#include <memory>
#include <mutex>
#include <vector>

#include <fftw3.h>

namespace ddmx::detail {

/** Cached FFTW plans for one transform size.
 *
 * Plans are created once per N with FFTW_ESTIMATE (deterministic planning,
 * so identical inputs give bit-identical outputs run to run) and always
 * execute on the internal aligned buffers; callers' data is copied in and
 * out.  The c2r direction destroys its input, which is why the scratch
 * buffers are private to the plan.
 */
class FftPlans {
public:
    explicit FftPlans(int n)
        : n_(n),
          real_(fftw_alloc_real(static_cast<size_t>(n) * n)),
          cplx_(fftw_alloc_complex(static_cast<size_t>(n) * (n / 2 + 1))) {
        fwd_ = fftw_plan_dft_r2c_2d(n, n, real_, cplx_, FFTW_ESTIMATE);
        bwd_ = fftw_plan_dft_c2r_2d(n, n, cplx_, real_, FFTW_ESTIMATE);
    }
    ~FftPlans() {
        fftw_destroy_plan(fwd_);
        fftw_destroy_plan(bwd_);
        fftw_free(real_);
        fftw_free(cplx_);
    }
    FftPlans(const FftPlans&) = delete;
    FftPlans& operator=(const FftPlans&) = delete;

    /// values (N*N) -> Fourier-series coefficients (N*(N/2+1)), normalized
    /// so that the coefficient of mode 0 is the mean value.
    void forward(const double* values, std::complex<double>* coeffs) {
        const size_t np = static_cast<size_t>(n_) * n_;
        const size_t ns = static_cast<size_t>(n_) * (n_ / 2 + 1);
        std::copy(values, values + np, real_);
        fftw_execute(fwd_);
        const double scale = 1.0 / static_cast<double>(np);
        for (size_t i = 0; i < ns; ++i)
            coeffs[i] = std::complex<double>(cplx_[i][0] * scale, cplx_[i][1] * scale);
    }

    /// Coefficients -> values; exact inverse of forward().
    void backward(const std::complex<double>* coeffs, double* values) {
        const size_t np = static_cast<size_t>(n_) * n_;
        const size_t ns = static_cast<size_t>(n_) * (n_ / 2 + 1);
        for (size_t i = 0; i < ns; ++i) {
            cplx_[i][0] = coeffs[i].real();
            cplx_[i][1] = coeffs[i].imag();
        }
        fftw_execute(bwd_);
        std::copy(real_, real_ + np, values);
    }

private:
    int n_;
    double* real_;
    fftw_complex* cplx_;
    fftw_plan fwd_;
    fftw_plan bwd_;
};

/// Process-wide plan cache.  Plan creation is serialized; execution reuses
/// the per-size scratch buffers, so transforms are not reentrant (the
/// library is single-threaded by design, see README).
inline FftPlans& fft_plans(int n) {
    static std::mutex mtx;
    static std::map<int, std::unique_ptr<FftPlans>> cache;
    std::lock_guard<std::mutex> lock(mtx);
    auto it = cache.find(n);
    if (it == cache.end())
        it = cache.emplace(n, std::make_unique<FftPlans>(n)).first;
    return *it->second;
}

} // namespace ddmx::detail

#endif

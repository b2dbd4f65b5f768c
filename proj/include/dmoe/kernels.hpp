#pragma once

// Double-precision kernels for the arithmetic inner loops (dot products,
// reductions, activation maps, optimizer updates). Each kernel has a scalar
// reference implementation plus SIMD variants (AVX2 on x86-64, NEON on
// aarch64); the variant is selected once at startup from CPU capabilities
// and may be forced with the DMOE_KERNELS environment variable
// ("scalar", "avx2", "neon"). SIMD variants are equivalence-tested against
// the scalar reference.

#include <cstddef>
#include <span>
#include <string_view>

namespace dmoe::kern {

enum class Impl { Scalar, Avx2, Neon };

struct Table {
    // sum_i a[i]*b[i]
    double (*dot)(const double* a, const double* b, std::size_t n);
    // y[i] += alpha * x[i]
    void (*axpy)(double alpha, const double* x, double* y, std::size_t n);
    // x[i] *= alpha
    void (*scale)(double* x, double alpha, std::size_t n);
    double (*sum)(const double* x, std::size_t n);
    double (*sumsq)(const double* x, std::size_t n);
    // max over x; -inf for n == 0
    double (*max)(const double* x, std::size_t n);
    // out[i] = max(x[i], 0)
    void (*relu)(const double* x, double* out, std::size_t n);
    // grad[i] = pre[i] > 0 ? grad[i] : 0
    void (*relu_mask)(const double* pre, double* grad, std::size_t n);
    // Adam moment update + parameter step. b1c/b2c are the bias corrections
    // (1 - beta^t) for the current step.
    void (*adam_step)(double* param, double* m, double* v, const double* g,
                      std::size_t n, double lr, double beta1, double beta2,
                      double eps, double b1c, double b2c);
};

std::string_view impl_name(Impl impl);
bool impl_available(Impl impl);
const Table& table(Impl impl);

// Implementation chosen at startup (honors DMOE_KERNELS override).
Impl active_impl();
const Table& active();

// --- convenience wrappers over the active table ---

inline double dot(std::span<const double> a, std::span<const double> b) {
    return active().dot(a.data(), b.data(), a.size());
}
inline void axpy(double alpha, std::span<const double> x, std::span<double> y) {
    active().axpy(alpha, x.data(), y.data(), x.size());
}
inline void scale(std::span<double> x, double alpha) {
    active().scale(x.data(), alpha, x.size());
}
inline double sum(std::span<const double> x) {
    return active().sum(x.data(), x.size());
}
inline double sumsq(std::span<const double> x) {
    return active().sumsq(x.data(), x.size());
}
inline double max(std::span<const double> x) {
    return active().max(x.data(), x.size());
}
inline void relu(std::span<const double> x, std::span<double> out) {
    active().relu(x.data(), out.data(), x.size());
}
inline void relu_mask(std::span<const double> pre, std::span<double> grad) {
    active().relu_mask(pre.data(), grad.data(), pre.size());
}

// out = A x, A row-major (rows x cols)
void matvec(const double* a, std::size_t rows, std::size_t cols,
            const double* x, double* out);
// out += A^T v, A row-major (rows x cols), out has cols entries
void matvec_t_acc(const double* a, std::size_t rows, std::size_t cols,
                  const double* v, double* out);
// A += v u^T (outer product accumulate), A row-major (rows x cols)
void outer_acc(double* a, std::size_t rows, std::size_t cols,
               const double* v, const double* u);
// probs = softmax(logits); numerically stable, exp evaluated in scalar.
void softmax(std::span<const double> logits, std::span<double> probs);

}  // namespace dmoe::kern

#include "dmoe/kernels.hpp"

#include <cmath>
#include <cstdlib>
#include <cstring>
#include <limits>

#include "dmoe/errors.hpp"

namespace dmoe::kern {

namespace scalar {

double dot(const double* a, const double* b, std::size_t n) {
    double acc = 0.0;
    for (std::size_t i = 0; i < n; ++i) acc += a[i] * b[i];
    return acc;
}

void axpy(double alpha, const double* x, double* y, std::size_t n) {
    for (std::size_t i = 0; i < n; ++i) y[i] += alpha * x[i];
}

void scale(double* x, double alpha, std::size_t n) {
    for (std::size_t i = 0; i < n; ++i) x[i] *= alpha;
}

double sum(const double* x, std::size_t n) {
    double acc = 0.0;
    for (std::size_t i = 0; i < n; ++i) acc += x[i];
    return acc;
}

double sumsq(const double* x, std::size_t n) {
    double acc = 0.0;
    for (std::size_t i = 0; i < n; ++i) acc += x[i] * x[i];
    return acc;
}

double max(const double* x, std::size_t n) {
    double m = -std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < n; ++i) m = x[i] > m ? x[i] : m;
    return m;
}

void relu(const double* x, double* out, std::size_t n) {
    for (std::size_t i = 0; i < n; ++i) out[i] = x[i] > 0.0 ? x[i] : 0.0;
}

void relu_mask(const double* pre, double* grad, std::size_t n) {
    for (std::size_t i = 0; i < n; ++i) {
        if (!(pre[i] > 0.0)) grad[i] = 0.0;
    }
}

void adam_step(double* param, double* m, double* v, const double* g,
               std::size_t n, double lr, double beta1, double beta2,
               double eps, double b1c, double b2c) {
    for (std::size_t i = 0; i < n; ++i) {
        m[i] = beta1 * m[i] + (1.0 - beta1) * g[i];
        v[i] = beta2 * v[i] + (1.0 - beta2) * g[i] * g[i];
        const double mhat = m[i] / b1c;
        const double vhat = v[i] / b2c;
        param[i] -= lr * mhat / (std::sqrt(vhat) + eps);
    }
}

}  // namespace scalar

namespace detail {
// Defined in kernels_avx2.cpp / kernels_neon.cpp when built for the platform.
const Table* avx2_table();  // nullptr when unavailable
const Table* neon_table();
}  // namespace detail

namespace {

const Table kScalarTable = {
    scalar::dot,  scalar::axpy,      scalar::scale, scalar::sum,
    scalar::sumsq, scalar::max,      scalar::relu,  scalar::relu_mask,
    scalar::adam_step,
};

Impl pick_impl() {
    if (const char* env = std::getenv("DMOE_KERNELS")) {
        const std::string_view want(env);
        if (want == "scalar") return Impl::Scalar;
        if (want == "avx2" && impl_available(Impl::Avx2)) return Impl::Avx2;
        if (want == "neon" && impl_available(Impl::Neon)) return Impl::Neon;
        throw InvalidArgument("DMOE_KERNELS: unknown or unavailable impl: " +
                              std::string(want));
    }
    if (impl_available(Impl::Avx2)) return Impl::Avx2;
    if (impl_available(Impl::Neon)) return Impl::Neon;
    return Impl::Scalar;
}

}  // namespace

std::string_view impl_name(Impl impl) {
    switch (impl) {
        case Impl::Scalar: return "scalar";
        case Impl::Avx2: return "avx2";
        case Impl::Neon: return "neon";
    }
    return "?";
}

bool impl_available(Impl impl) {
    switch (impl) {
        case Impl::Scalar: return true;
        case Impl::Avx2: return detail::avx2_table() != nullptr;
        case Impl::Neon: return detail::neon_table() != nullptr;
    }
    return false;
}

const Table& table(Impl impl) {
    switch (impl) {
        case Impl::Avx2:
            if (const Table* t = detail::avx2_table()) return *t;
            throw InvalidArgument("avx2 kernels unavailable on this CPU");
        case Impl::Neon:
            if (const Table* t = detail::neon_table()) return *t;
            throw InvalidArgument("neon kernels unavailable on this CPU");
        case Impl::Scalar: break;
    }
    return kScalarTable;
}

Impl active_impl() {
    static const Impl impl = pick_impl();
    return impl;
}

const Table& active() { return table(active_impl()); }

void matvec(const double* a, std::size_t rows, std::size_t cols,
            const double* x, double* out) {
    const Table& t = active();
    for (std::size_t r = 0; r < rows; ++r) out[r] = t.dot(a + r * cols, x, cols);
}

void matvec_t_acc(const double* a, std::size_t rows, std::size_t cols,
                  const double* v, double* out) {
    const Table& t = active();
    for (std::size_t r = 0; r < rows; ++r) {
        if (v[r] != 0.0) t.axpy(v[r], a + r * cols, out, cols);
    }
}

void outer_acc(double* a, std::size_t rows, std::size_t cols,
               const double* v, const double* u) {
    const Table& t = active();
    for (std::size_t r = 0; r < rows; ++r) {
        if (v[r] != 0.0) t.axpy(v[r], u, a + r * cols, cols);
    }
}

void softmax(std::span<const double> logits, std::span<double> probs) {
    const std::size_t n = logits.size();
    const Table& t = active();
    const double m = t.max(logits.data(), n);
    for (std::size_t i = 0; i < n; ++i) probs[i] = std::exp(logits[i] - m);
    const double z = t.sum(probs.data(), n);
    t.scale(probs.data(), 1.0 / z, n);
}

}  // namespace dmoe::kern

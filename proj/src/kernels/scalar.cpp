#include "ehg/kernels/kernels.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>

// Scalar reference kernels. Plain loops, no reassociation tricks: these define
// the semantics the SIMD variants are tested against.

namespace ehg::kern {
namespace {

void s_add(double* dst, const double* a, const double* b, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) dst[i] = a[i] + b[i];
}

void s_sub(double* dst, const double* a, const double* b, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) dst[i] = a[i] - b[i];
}

void s_mul(double* dst, const double* a, const double* b, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) dst[i] = a[i] * b[i];
}

void s_scale(double* dst, const double* a, double s, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) dst[i] = a[i] * s;
}

void s_axpy(double* y, double a, const double* x, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) y[i] += a * x[i];
}

void s_madd(double* dst, const double* a, const double* b, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) dst[i] += a[i] * b[i];
}

void s_relu(double* dst, const double* a, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) dst[i] = a[i] > 0.0 ? a[i] : 0.0;
}

double s_dot(const double* a, const double* b, std::size_t n) {
  double acc = 0.0;
  for (std::size_t i = 0; i < n; ++i) acc += a[i] * b[i];
  return acc;
}

double s_sum(const double* a, std::size_t n) {
  double acc = 0.0;
  for (std::size_t i = 0; i < n; ++i) acc += a[i];
  return acc;
}

// c(MxN) (+)= a(MxK) * b(KxN)
void s_matmul_nn(double* c, const double* a, const double* b,
                 std::size_t m, std::size_t k, std::size_t n, bool accumulate) {
  if (!accumulate) std::memset(c, 0, m * n * sizeof(double));
  for (std::size_t i = 0; i < m; ++i) {
    for (std::size_t p = 0; p < k; ++p) {
      const double av = a[i * k + p];
      const double* brow = b + p * n;
      double* crow = c + i * n;
      for (std::size_t j = 0; j < n; ++j) crow[j] += av * brow[j];
    }
  }
}

// c(KxN) (+)= a(MxK)^T * b(MxN)
void s_matmul_tn(double* c, const double* a, const double* b,
                 std::size_t m, std::size_t k, std::size_t n, bool accumulate) {
  if (!accumulate) std::memset(c, 0, k * n * sizeof(double));
  for (std::size_t i = 0; i < m; ++i) {
    const double* brow = b + i * n;
    for (std::size_t p = 0; p < k; ++p) {
      const double av = a[i * k + p];
      double* crow = c + p * n;
      for (std::size_t j = 0; j < n; ++j) crow[j] += av * brow[j];
    }
  }
}

// c(MxK) (+)= a(MxN) * b(KxN)^T
void s_matmul_nt(double* c, const double* a, const double* b,
                 std::size_t m, std::size_t k, std::size_t n, bool accumulate) {
  for (std::size_t i = 0; i < m; ++i) {
    for (std::size_t p = 0; p < k; ++p) {
      const double d = s_dot(a + i * n, b + p * n, n);
      if (accumulate)
        c[i * k + p] += d;
      else
        c[i * k + p] = d;
    }
  }
}

void s_adam_update(double* p, double* mo, double* vo, const double* g,
                   std::size_t n, double lr, double beta1, double beta2,
                   double eps, double bias1, double bias2) {
  for (std::size_t i = 0; i < n; ++i) {
    mo[i] = beta1 * mo[i] + (1.0 - beta1) * g[i];
    vo[i] = beta2 * vo[i] + (1.0 - beta2) * g[i] * g[i];
    const double mhat = mo[i] / bias1;
    const double vhat = vo[i] / bias2;
    p[i] -= lr * mhat / (std::sqrt(vhat) + eps);
  }
}

}  // namespace

const Ops& scalar_ops() {
  static const Ops table = {
      s_add,       s_sub,       s_mul,       s_scale,       s_axpy,
      s_madd,      s_relu,      s_dot,       s_sum,         s_matmul_nn,
      s_matmul_tn, s_matmul_nt, s_adam_update, "scalar",
  };
  return table;
}

}  // namespace ehg::kern

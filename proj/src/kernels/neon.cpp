// NEON kernels, 2 doubles per lane (float64x2_t), for aarch64 builds. NEON is
// baseline on aarch64 so no CPUID probing is needed beyond the architecture
// guard.

#include "ehg/kernels/kernels.hpp"

#if defined(__aarch64__) || defined(_M_ARM64)

#include <arm_neon.h>

#include <cmath>
#include <cstring>

namespace ehg::kern {
namespace {

void v_add(double* dst, const double* a, const double* b, std::size_t n) {
  std::size_t i = 0;
  for (; i + 2 <= n; i += 2)
    vst1q_f64(dst + i, vaddq_f64(vld1q_f64(a + i), vld1q_f64(b + i)));
  for (; i < n; ++i) dst[i] = a[i] + b[i];
}

void v_sub(double* dst, const double* a, const double* b, std::size_t n) {
  std::size_t i = 0;
  for (; i + 2 <= n; i += 2)
    vst1q_f64(dst + i, vsubq_f64(vld1q_f64(a + i), vld1q_f64(b + i)));
  for (; i < n; ++i) dst[i] = a[i] - b[i];
}

void v_mul(double* dst, const double* a, const double* b, std::size_t n) {
  std::size_t i = 0;
  for (; i + 2 <= n; i += 2)
    vst1q_f64(dst + i, vmulq_f64(vld1q_f64(a + i), vld1q_f64(b + i)));
  for (; i < n; ++i) dst[i] = a[i] * b[i];
}

void v_scale(double* dst, const double* a, double s, std::size_t n) {
  const float64x2_t sv = vdupq_n_f64(s);
  std::size_t i = 0;
  for (; i + 2 <= n; i += 2)
    vst1q_f64(dst + i, vmulq_f64(vld1q_f64(a + i), sv));
  for (; i < n; ++i) dst[i] = a[i] * s;
}

void v_axpy(double* y, double a, const double* x, std::size_t n) {
  const float64x2_t av = vdupq_n_f64(a);
  std::size_t i = 0;
  for (; i + 2 <= n; i += 2)
    vst1q_f64(y + i, vfmaq_f64(vld1q_f64(y + i), av, vld1q_f64(x + i)));
  for (; i < n; ++i) y[i] += a * x[i];
}

void v_madd(double* dst, const double* a, const double* b, std::size_t n) {
  std::size_t i = 0;
  for (; i + 2 <= n; i += 2)
    vst1q_f64(dst + i, vfmaq_f64(vld1q_f64(dst + i), vld1q_f64(a + i), vld1q_f64(b + i)));
  for (; i < n; ++i) dst[i] += a[i] * b[i];
}

void v_relu(double* dst, const double* a, std::size_t n) {
  const float64x2_t zero = vdupq_n_f64(0.0);
  std::size_t i = 0;
  for (; i + 2 <= n; i += 2)
    vst1q_f64(dst + i, vmaxq_f64(vld1q_f64(a + i), zero));
  for (; i < n; ++i) dst[i] = a[i] > 0.0 ? a[i] : 0.0;
}

double v_dot(const double* a, const double* b, std::size_t n) {
  float64x2_t acc = vdupq_n_f64(0.0);
  std::size_t i = 0;
  for (; i + 2 <= n; i += 2)
    acc = vfmaq_f64(acc, vld1q_f64(a + i), vld1q_f64(b + i));
  double tail = vaddvq_f64(acc);
  for (; i < n; ++i) tail += a[i] * b[i];
  return tail;
}

double v_sum(const double* a, std::size_t n) {
  float64x2_t acc = vdupq_n_f64(0.0);
  std::size_t i = 0;
  for (; i + 2 <= n; i += 2) acc = vaddq_f64(acc, vld1q_f64(a + i));
  double tail = vaddvq_f64(acc);
  for (; i < n; ++i) tail += a[i];
  return tail;
}

inline void fma_row(double* crow, double av, const double* brow, std::size_t n) {
  const float64x2_t avv = vdupq_n_f64(av);
  std::size_t j = 0;
  for (; j + 2 <= n; j += 2)
    vst1q_f64(crow + j, vfmaq_f64(vld1q_f64(crow + j), avv, vld1q_f64(brow + j)));
  for (; j < n; ++j) crow[j] += av * brow[j];
}

void v_matmul_nn(double* c, const double* a, const double* b,
                 std::size_t m, std::size_t k, std::size_t n, bool accumulate) {
  if (!accumulate) std::memset(c, 0, m * n * sizeof(double));
  for (std::size_t i = 0; i < m; ++i) {
    double* crow = c + i * n;
    for (std::size_t p = 0; p < k; ++p) fma_row(crow, a[i * k + p], b + p * n, n);
  }
}

void v_matmul_tn(double* c, const double* a, const double* b,
                 std::size_t m, std::size_t k, std::size_t n, bool accumulate) {
  if (!accumulate) std::memset(c, 0, k * n * sizeof(double));
  for (std::size_t i = 0; i < m; ++i) {
    const double* brow = b + i * n;
    for (std::size_t p = 0; p < k; ++p) fma_row(c + p * n, a[i * k + p], brow, n);
  }
}

void v_matmul_nt(double* c, const double* a, const double* b,
                 std::size_t m, std::size_t k, std::size_t n, bool accumulate) {
  for (std::size_t i = 0; i < m; ++i) {
    for (std::size_t p = 0; p < k; ++p) {
      const double d = v_dot(a + i * n, b + p * n, n);
      if (accumulate)
        c[i * k + p] += d;
      else
        c[i * k + p] = d;
    }
  }
}

void v_adam_update(double* p, double* mo, double* vo, const double* g,
                   std::size_t n, double lr, double beta1, double beta2,
                   double eps, double bias1, double bias2) {
  const float64x2_t b1 = vdupq_n_f64(beta1);
  const float64x2_t b2 = vdupq_n_f64(beta2);
  const float64x2_t omb1 = vdupq_n_f64(1.0 - beta1);
  const float64x2_t omb2 = vdupq_n_f64(1.0 - beta2);
  const float64x2_t inv1 = vdupq_n_f64(1.0 / bias1);
  const float64x2_t inv2 = vdupq_n_f64(1.0 / bias2);
  const float64x2_t lrv = vdupq_n_f64(lr);
  const float64x2_t epsv = vdupq_n_f64(eps);
  std::size_t i = 0;
  for (; i + 2 <= n; i += 2) {
    const float64x2_t gv = vld1q_f64(g + i);
    float64x2_t mv = vfmaq_f64(vmulq_f64(omb1, gv), b1, vld1q_f64(mo + i));
    float64x2_t vv =
        vfmaq_f64(vmulq_f64(omb2, vmulq_f64(gv, gv)), b2, vld1q_f64(vo + i));
    vst1q_f64(mo + i, mv);
    vst1q_f64(vo + i, vv);
    const float64x2_t mhat = vmulq_f64(mv, inv1);
    const float64x2_t denom = vaddq_f64(vsqrtq_f64(vmulq_f64(vv, inv2)), epsv);
    const float64x2_t step = vdivq_f64(vmulq_f64(lrv, mhat), denom);
    vst1q_f64(p + i, vsubq_f64(vld1q_f64(p + i), step));
  }
  for (; i < n; ++i) {
    mo[i] = beta1 * mo[i] + (1.0 - beta1) * g[i];
    vo[i] = beta2 * vo[i] + (1.0 - beta2) * g[i] * g[i];
    p[i] -= lr * (mo[i] / bias1) / (std::sqrt(vo[i] / bias2) + eps);
  }
}

}  // namespace

const Ops& neon_ops() {
  static const Ops table = {
      v_add,       v_sub,       v_mul,       v_scale,       v_axpy,
      v_madd,      v_relu,      v_dot,       v_sum,         v_matmul_nn,
      v_matmul_tn, v_matmul_nt, v_adam_update, "neon",
  };
  return table;
}

}  // namespace ehg::kern

#endif  // aarch64

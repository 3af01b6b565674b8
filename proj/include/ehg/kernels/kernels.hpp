#pragma once

#include <cstddef>
#include <vector>

// Dense double-precision kernels behind a runtime-dispatched function table.
// Every arithmetic inner loop in the library goes through kern::active() so a
// single table swap switches the whole engine between the scalar reference
// implementation and the SIMD variants. The scalar table is the semantic
// reference; SIMD tables are equivalence-tested against it.

namespace ehg::kern {

enum class Backend {
  Scalar,
  Avx2,
  Neon,
};

struct Ops {
  // dst[i] = a[i] OP b[i]; dst may alias a or b.
  void (*add)(double* dst, const double* a, const double* b, std::size_t n);
  void (*sub)(double* dst, const double* a, const double* b, std::size_t n);
  void (*mul)(double* dst, const double* a, const double* b, std::size_t n);
  // dst[i] = a[i] * s; dst may alias a.
  void (*scale)(double* dst, const double* a, double s, std::size_t n);
  // y[i] += a * x[i]
  void (*axpy)(double* y, double a, const double* x, std::size_t n);
  // dst[i] += a[i] * b[i]
  void (*madd)(double* dst, const double* a, const double* b, std::size_t n);
  // dst[i] = max(a[i], 0)
  void (*relu)(double* dst, const double* a, std::size_t n);
  double (*dot)(const double* a, const double* b, std::size_t n);
  double (*sum)(const double* a, std::size_t n);

  // Row-major matrix products. When accumulate is false the output is
  // overwritten, otherwise the product is added to it.
  //   matmul_nn: c(MxN) = a(MxK) * b(KxN)
  //   matmul_tn: c(KxN) = a(MxK)^T * b(MxN)
  //   matmul_nt: c(MxK) = a(MxN) * b(KxN)^T
  void (*matmul_nn)(double* c, const double* a, const double* b,
                    std::size_t m, std::size_t k, std::size_t n, bool accumulate);
  void (*matmul_tn)(double* c, const double* a, const double* b,
                    std::size_t m, std::size_t k, std::size_t n, bool accumulate);
  void (*matmul_nt)(double* c, const double* a, const double* b,
                    std::size_t m, std::size_t k, std::size_t n, bool accumulate);

  // One fused Adam step with bias correction:
  //   m = b1*m + (1-b1)*g;  v = b2*v + (1-b2)*g*g
  //   p -= lr * (m/bias1) / (sqrt(v/bias2) + eps)
  void (*adam_update)(double* p, double* m, double* v, const double* g,
                      std::size_t n, double lr, double beta1, double beta2,
                      double eps, double bias1, double bias2);

  const char* name;
};

/// Scalar reference table; always available.
const Ops& scalar_ops();

#if defined(__x86_64__) || defined(_M_X64)
/// AVX2+FMA table. Call only when cpu_has_avx2() is true.
const Ops& avx2_ops();
bool cpu_has_avx2();
#endif

#if defined(__aarch64__) || defined(_M_ARM64)
const Ops& neon_ops();
#endif

/// The table selected at startup (best supported backend), or the one forced
/// with set_backend().
const Ops& active();
Backend active_backend();

/// Force a backend; returns false (and leaves the active table unchanged)
/// when the requested backend is unavailable on this CPU or build.
bool set_backend(Backend b);

const char* backend_name(Backend b);
std::vector<Backend> available_backends();

}  // namespace ehg::kern

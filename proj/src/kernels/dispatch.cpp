#include "ehg/kernels/kernels.hpp"

namespace ehg::kern {
namespace {

const Ops* g_active = nullptr;
Backend g_backend = Backend::Scalar;

void init_default() {
  if (g_active) return;
#if defined(__x86_64__) || defined(_M_X64)
  if (cpu_has_avx2()) {
    g_active = &avx2_ops();
    g_backend = Backend::Avx2;
    return;
  }
#elif defined(__aarch64__) || defined(_M_ARM64)
  g_active = &neon_ops();
  g_backend = Backend::Neon;
  return;
#endif
  g_active = &scalar_ops();
  g_backend = Backend::Scalar;
}

}  // namespace

#if defined(__x86_64__) || defined(_M_X64)
bool cpu_has_avx2() {
  static const bool ok =
      __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
  return ok;
}
#endif

const Ops& active() {
  init_default();
  return *g_active;
}

Backend active_backend() {
  init_default();
  return g_backend;
}

bool set_backend(Backend b) {
  switch (b) {
    case Backend::Scalar:
      g_active = &scalar_ops();
      g_backend = b;
      return true;
    case Backend::Avx2:
#if defined(__x86_64__) || defined(_M_X64)
      if (cpu_has_avx2()) {
        g_active = &avx2_ops();
        g_backend = b;
        return true;
      }
#endif
      return false;
    case Backend::Neon:
#if defined(__aarch64__) || defined(_M_ARM64)
      g_active = &neon_ops();
      g_backend = b;
      return true;
#else
      return false;
#endif
  }
  return false;
}

const char* backend_name(Backend b) {
  switch (b) {
    case Backend::Scalar: return "scalar";
    case Backend::Avx2: return "avx2";
    case Backend::Neon: return "neon";
  }
  return "unknown";
}

std::vector<Backend> available_backends() {
  std::vector<Backend> out{Backend::Scalar};
#if defined(__x86_64__) || defined(_M_X64)
  if (cpu_has_avx2()) out.push_back(Backend::Avx2);
#elif defined(__aarch64__) || defined(_M_ARM64)
  out.push_back(Backend::Neon);
#endif
  return out;
}

}  // namespace ehg::kern

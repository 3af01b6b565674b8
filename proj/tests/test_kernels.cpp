#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>
#include <vector>

#include "ehg/kernels/kernels.hpp"

using namespace ehg;

namespace {

std::vector<double> random_vec(std::size_t n, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> dist(-1.0, 1.0);
  std::vector<double> v(n);
  for (auto& x : v) x = dist(rng);
  return v;
}

// Reassociation (SIMD partial sums, FMA) shifts the last bits; inputs are
// O(1) so a small absolute band is enough.
bool close(double a, double b, double tol = 1e-12) {
  return std::abs(a - b) <= tol * (1.0 + std::max(std::abs(a), std::abs(b)));
}

void check_vec_close(const std::vector<double>& a, const std::vector<double>& b,
                     double tol = 1e-12) {
  REQUIRE(a.size() == b.size());
  for (std::size_t i = 0; i < a.size(); ++i) {
    INFO("index ", i);
    CHECK(close(a[i], b[i], tol));
  }
}

}  // namespace

TEST_CASE("scalar kernels match naive loops") {
  const auto& ops = kern::scalar_ops();
  std::mt19937_64 rng(7);
  for (std::size_t n : {1u, 3u, 4u, 17u, 64u, 65u}) {
    auto a = random_vec(n, rng);
    auto b = random_vec(n, rng);
    std::vector<double> dst(n);

    ops.add(dst.data(), a.data(), b.data(), n);
    for (std::size_t i = 0; i < n; ++i) CHECK(dst[i] == a[i] + b[i]);

    ops.mul(dst.data(), a.data(), b.data(), n);
    for (std::size_t i = 0; i < n; ++i) CHECK(dst[i] == a[i] * b[i]);

    double s = 0.0, d = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      s += a[i];
      d += a[i] * b[i];
    }
    CHECK(ops.sum(a.data(), n) == s);
    CHECK(ops.dot(a.data(), b.data(), n) == d);
  }
}

TEST_CASE("scalar matmul against hand products") {
  const auto& ops = kern::scalar_ops();
  // [[1,2],[3,4]] * I = [[1,2],[3,4]]
  std::vector<double> a{1, 2, 3, 4}, id{1, 0, 0, 1}, c(4);
  ops.matmul_nn(c.data(), a.data(), id.data(), 2, 2, 2, false);
  CHECK(c == std::vector<double>({1, 2, 3, 4}));
  // [[1,2]] * [[3],[4]] = [[11]]
  std::vector<double> u{1, 2}, v{3, 4}, w(1);
  ops.matmul_nn(w.data(), u.data(), v.data(), 1, 2, 1, false);
  CHECK(w[0] == 11.0);
  // accumulate adds on top
  ops.matmul_nn(w.data(), u.data(), v.data(), 1, 2, 1, true);
  CHECK(w[0] == 22.0);
}

TEST_CASE("transposed matmul variants agree with explicit transposes") {
  const auto& ops = kern::scalar_ops();
  std::mt19937_64 rng(11);
  const std::size_t M = 5, K = 3, N = 7;
  auto A = random_vec(M * K, rng);
  auto B = random_vec(M * N, rng);

  // tn: C(KxN) = A^T B
  std::vector<double> C(K * N), ref(K * N, 0.0);
  ops.matmul_tn(C.data(), A.data(), B.data(), M, K, N, false);
  for (std::size_t i = 0; i < M; ++i)
    for (std::size_t p = 0; p < K; ++p)
      for (std::size_t j = 0; j < N; ++j)
        ref[p * N + j] += A[i * K + p] * B[i * N + j];
  check_vec_close(C, ref, 1e-15);

  // nt: C(MxK) = A2 B2^T with A2 MxN, B2 KxN
  auto A2 = random_vec(M * N, rng);
  auto B2 = random_vec(K * N, rng);
  std::vector<double> C2(M * K), ref2(M * K, 0.0);
  ops.matmul_nt(C2.data(), A2.data(), B2.data(), M, K, N, false);
  for (std::size_t i = 0; i < M; ++i)
    for (std::size_t p = 0; p < K; ++p)
      for (std::size_t j = 0; j < N; ++j)
        ref2[i * K + p] += A2[i * N + j] * B2[p * N + j];
  check_vec_close(C2, ref2, 1e-15);
}

TEST_CASE("every available SIMD backend matches the scalar reference") {
  const auto& ref = kern::scalar_ops();
  std::mt19937_64 rng(23);

  for (kern::Backend backend : kern::available_backends()) {
    if (backend == kern::Backend::Scalar) continue;
    REQUIRE(kern::set_backend(backend));
    const auto& ops = kern::active();
    INFO("backend ", ops.name);

    for (std::size_t n : {1u, 2u, 3u, 4u, 5u, 8u, 31u, 64u, 129u, 1000u}) {
      auto a = random_vec(n, rng);
      auto b = random_vec(n, rng);
      std::vector<double> got(n), want(n);

      ops.add(got.data(), a.data(), b.data(), n);
      ref.add(want.data(), a.data(), b.data(), n);
      check_vec_close(got, want);

      ops.sub(got.data(), a.data(), b.data(), n);
      ref.sub(want.data(), a.data(), b.data(), n);
      check_vec_close(got, want);

      ops.mul(got.data(), a.data(), b.data(), n);
      ref.mul(want.data(), a.data(), b.data(), n);
      check_vec_close(got, want);

      ops.scale(got.data(), a.data(), 0.37, n);
      ref.scale(want.data(), a.data(), 0.37, n);
      check_vec_close(got, want);

      ops.relu(got.data(), a.data(), n);
      ref.relu(want.data(), a.data(), n);
      check_vec_close(got, want);

      got = b;
      want = b;
      ops.axpy(got.data(), -1.7, a.data(), n);
      ref.axpy(want.data(), -1.7, a.data(), n);
      check_vec_close(got, want);

      got = b;
      want = b;
      auto c = random_vec(n, rng);
      ops.madd(got.data(), a.data(), c.data(), n);
      ref.madd(want.data(), a.data(), c.data(), n);
      check_vec_close(got, want);

      CHECK(close(ops.sum(a.data(), n), ref.sum(a.data(), n)));
      CHECK(close(ops.dot(a.data(), b.data(), n), ref.dot(a.data(), b.data(), n)));
    }

    // matmul triple, odd shapes to exercise the tails
    for (auto [M, K, N] : {std::array<std::size_t, 3>{1, 1, 1},
                           std::array<std::size_t, 3>{3, 5, 7},
                           std::array<std::size_t, 3>{8, 4, 12},
                           std::array<std::size_t, 3>{13, 9, 5}}) {
      auto A = random_vec(M * K, rng);
      auto B = random_vec(K * N, rng);
      std::vector<double> got(M * N), want(M * N);
      ops.matmul_nn(got.data(), A.data(), B.data(), M, K, N, false);
      ref.matmul_nn(want.data(), A.data(), B.data(), M, K, N, false);
      check_vec_close(got, want);

      auto B2 = random_vec(M * N, rng);
      std::vector<double> gtn(K * N), wtn(K * N);
      ops.matmul_tn(gtn.data(), A.data(), B2.data(), M, K, N, false);
      ref.matmul_tn(wtn.data(), A.data(), B2.data(), M, K, N, false);
      check_vec_close(gtn, wtn);

      auto A3 = random_vec(M * N, rng);
      auto B3 = random_vec(K * N, rng);
      std::vector<double> gnt(M * K, 0.5), wnt(M * K, 0.5);
      ops.matmul_nt(gnt.data(), A3.data(), B3.data(), M, K, N, true);
      ref.matmul_nt(wnt.data(), A3.data(), B3.data(), M, K, N, true);
      check_vec_close(gnt, wnt);
    }

    // adam update step
    for (std::size_t n : {1u, 5u, 64u, 67u}) {
      auto g = random_vec(n, rng);
      auto p1 = random_vec(n, rng);
      auto p2 = p1;
      std::vector<double> m1(n, 0.01), v1(n, 0.02), m2 = m1, v2 = v1;
      ops.adam_update(p1.data(), m1.data(), v1.data(), g.data(), n, 0.1, 0.9,
                      0.999, 1e-8, 0.1, 0.001999);
      ref.adam_update(p2.data(), m2.data(), v2.data(), g.data(), n, 0.1, 0.9,
                      0.999, 1e-8, 0.1, 0.001999);
      check_vec_close(p1, p2);
      check_vec_close(m1, m2);
      check_vec_close(v1, v2);
    }
  }
}

TEST_CASE("backend selection") {
  CHECK(kern::set_backend(kern::Backend::Scalar));
  CHECK(kern::active_backend() == kern::Backend::Scalar);
  CHECK(std::string(kern::active().name) == "scalar");
#if defined(__x86_64__)
  if (kern::cpu_has_avx2()) {
    CHECK(kern::set_backend(kern::Backend::Avx2));
    CHECK(std::string(kern::active().name) == "avx2");
  }
  CHECK_FALSE(kern::set_backend(kern::Backend::Neon));
#endif
}

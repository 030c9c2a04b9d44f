#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "graphfix/fbvp.hpp"
#include "graphfix/kernels.hpp"

using namespace graphfix;
namespace k = graphfix::kernels;

namespace {

std::vector<double> random_vector(std::mt19937_64& rng, std::size_t n) {
  std::uniform_real_distribution<double> u(-2.0, 2.0);
  std::vector<double> v(n);
  for (double& x : v) x = u(rng);
  return v;
}

double abs_dot(const std::vector<double>& a, const std::vector<double>& b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += std::abs(a[i] * b[i]);
  return s;
}

class BackendGuard {
 public:
  BackendGuard() : saved_(k::active_backend()) {}
  ~BackendGuard() { k::set_backend(saved_); }

 private:
  k::Backend saved_;
};

}  // namespace

TEST(Kernels, ScalarReferenceValues) {
  const std::vector<double> a = {1, -2, 3, 4, 5, 6};
  const std::vector<double> x = {1, 1, 2};
  std::vector<double> y(2);
  k::scalar::matvec(a, 2, 3, x, y);
  EXPECT_EQ(y[0], 5.0);
  EXPECT_EQ(y[1], 21.0);
  EXPECT_EQ(k::scalar::max_abs(a), 6.0);
  EXPECT_EQ(k::scalar::max_abs_diff(x, std::vector<double>{1, 4, 2}), 3.0);
  EXPECT_EQ(k::scalar::dot(x, x), 6.0);
  EXPECT_EQ(k::scalar::max_abs({}), 0.0);
}

TEST(Kernels, Avx2MatchesScalarOnAllTailLengths) {
  if (!k::avx2_available()) GTEST_SKIP() << "AVX2 variant not available on this machine";
  std::mt19937_64 rng(99);
  for (std::size_t n = 0; n <= 67; ++n) {
    const auto a = random_vector(rng, n), b = random_vector(rng, n);
    EXPECT_EQ(k::avx2::max_abs(a), k::scalar::max_abs(a)) << n;
    EXPECT_EQ(k::avx2::max_abs_diff(a, b), k::scalar::max_abs_diff(a, b)) << n;
    EXPECT_NEAR(k::avx2::dot(a, b), k::scalar::dot(a, b), 1e-14 * (1.0 + abs_dot(a, b))) << n;
  }
  for (std::size_t rows : {1u, 3u, 8u, 201u})
    for (std::size_t cols : {1u, 2u, 5u, 16u, 201u}) {
      const auto a = random_vector(rng, rows * cols), x = random_vector(rng, cols);
      std::vector<double> ys(rows), yv(rows);
      k::scalar::matvec(a, rows, cols, x, ys);
      k::avx2::matvec(a, rows, cols, x, yv);
      for (std::size_t r = 0; r < rows; ++r) {
        const std::vector<double> row(a.begin() + r * cols, a.begin() + (r + 1) * cols);
        EXPECT_NEAR(yv[r], ys[r], 1e-14 * (1.0 + abs_dot(row, x)));
      }
    }
}

TEST(Kernels, DispatchHonoursForcedBackend) {
  BackendGuard guard;
  EXPECT_EQ(k::set_backend(k::Backend::scalar), k::Backend::scalar);
  EXPECT_EQ(k::active_backend(), k::Backend::scalar);
  const auto chosen = k::set_backend(k::Backend::avx2);
  EXPECT_EQ(chosen, k::avx2_available() ? k::Backend::avx2 : k::Backend::scalar);
  EXPECT_EQ(k::backend_name(k::Backend::avx2), "avx2");
}

TEST(Kernels, SolverAgreesAcrossBackends) {
  if (!k::avx2_available()) GTEST_SKIP() << "AVX2 variant not available on this machine";
  BackendGuard guard;
  fbvp::FbvpProblem p;
  p.beta = 1.5;
  p.g = [](double b, double w) { return 0.25 * std::sin(w) + b; };
  p.gauge = Gauge::constant(0.25);
  k::set_backend(k::Backend::scalar);
  const auto s = fbvp::picard_solve(p);
  k::set_backend(k::Backend::avx2);
  const auto v = fbvp::picard_solve(p);
  EXPECT_LE(sup_distance(s.solution, v.solution), 1e-13);
  EXPECT_EQ(s.report.converged, v.report.converged);
}

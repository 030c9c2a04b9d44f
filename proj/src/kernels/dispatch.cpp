#include <atomic>
#include <cstdlib>
#include <string_view>

#include "graphfix/kernels.hpp"

namespace graphfix::kernels {

#ifndef GRAPHFIX_HAVE_AVX2
// Stubs so the avx2 namespace links on targets without the variant; never
// selected because avx2_available() is false there.
namespace avx2 {
void matvec(std::span<const double> a, std::size_t rows, std::size_t cols,
            std::span<const double> x, std::span<double> y) {
  scalar::matvec(a, rows, cols, x, y);
}
double max_abs_diff(std::span<const double> a, std::span<const double> b) {
  return scalar::max_abs_diff(a, b);
}
double max_abs(std::span<const double> a) { return scalar::max_abs(a); }
double dot(std::span<const double> w, std::span<const double> x) { return scalar::dot(w, x); }
}  // namespace avx2
#endif

namespace {

bool detect_avx2() {
#if defined(GRAPHFIX_HAVE_AVX2) && (defined(__GNUC__) || defined(__clang__))
  __builtin_cpu_init();
  return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
#else
  return false;
#endif
}

Backend initial_backend() {
  // GRAPHFIX_KERNELS=scalar pins the reference path for a whole process.
  if (const char* env = std::getenv("GRAPHFIX_KERNELS"); env && std::string_view(env) == "scalar")
    return Backend::scalar;
  return detect_avx2() ? Backend::avx2 : Backend::scalar;
}

std::atomic<Backend>& current() {
  static std::atomic<Backend> backend{initial_backend()};
  return backend;
}

}  // namespace

Backend active_backend() { return current().load(std::memory_order_relaxed); }

bool avx2_available() {
  static const bool available = detect_avx2();
  return available;
}

Backend set_backend(Backend requested) {
  Backend chosen = (requested == Backend::avx2 && !avx2_available()) ? Backend::scalar : requested;
  current().store(chosen, std::memory_order_relaxed);
  return chosen;
}

std::string_view backend_name(Backend b) { return b == Backend::avx2 ? "avx2" : "scalar"; }

void matvec(std::span<const double> a, std::size_t rows, std::size_t cols,
            std::span<const double> x, std::span<double> y) {
  if (active_backend() == Backend::avx2) return avx2::matvec(a, rows, cols, x, y);
  scalar::matvec(a, rows, cols, x, y);
}

double max_abs_diff(std::span<const double> a, std::span<const double> b) {
  if (active_backend() == Backend::avx2) return avx2::max_abs_diff(a, b);
  return scalar::max_abs_diff(a, b);
}

double max_abs(std::span<const double> a) {
  if (active_backend() == Backend::avx2) return avx2::max_abs(a);
  return scalar::max_abs(a);
}

double dot(std::span<const double> w, std::span<const double> x) {
  if (active_backend() == Backend::avx2) return avx2::dot(w, x);
  return scalar::dot(w, x);
}

}  // namespace graphfix::kernels

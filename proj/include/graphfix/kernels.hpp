#pragma once

// Dense inner loops used by the grid solvers. Every kernel has a scalar
// reference implementation and, on x86-64, an AVX2/FMA variant; the active
// backend is chosen once at startup from CPUID and can be forced for tests.

#include <cstddef>
#include <span>
#include <string_view>

namespace graphfix::kernels {

enum class Backend { scalar, avx2 };

/// Backend currently used by the dispatching entry points below.
Backend active_backend();

/// True when this binary carries the AVX2 variants and the CPU supports them.
bool avx2_available();

/// Forces a backend. Requesting avx2 when unavailable falls back to scalar;
/// returns the backend actually selected.
Backend set_backend(Backend requested);

std::string_view backend_name(Backend b);

/// y[r] = sum_c a[r*cols + c] * x[c] for a row-major rows x cols matrix.
void matvec(std::span<const double> a, std::size_t rows, std::size_t cols,
            std::span<const double> x, std::span<double> y);

/// max_i |a[i] - b[i]|; 0 for empty input.
double max_abs_diff(std::span<const double> a, std::span<const double> b);

/// max_i |a[i]|; 0 for empty input.
double max_abs(std::span<const double> a);

/// sum_i w[i] * x[i].
double dot(std::span<const double> w, std::span<const double> x);

namespace scalar {
void matvec(std::span<const double> a, std::size_t rows, std::size_t cols,
            std::span<const double> x, std::span<double> y);
double max_abs_diff(std::span<const double> a, std::span<const double> b);
double max_abs(std::span<const double> a);
double dot(std::span<const double> w, std::span<const double> x);
}  // namespace scalar

namespace avx2 {
void matvec(std::span<const double> a, std::size_t rows, std::size_t cols,
            std::span<const double> x, std::span<double> y);
double max_abs_diff(std::span<const double> a, std::span<const double> b);
double max_abs(std::span<const double> a);
double dot(std::span<const double> w, std::span<const double> x);
}  // namespace avx2

}  // namespace graphfix::kernels

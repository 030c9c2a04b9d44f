#include <array>
#include <cmath>
#include <fmt/format.h>
#include <numbers>

#include "graphfix/errors.hpp"
#include "graphfix/fbvp.hpp"

namespace graphfix::fbvp {

namespace {

// Lanczos coefficients for g = 7, n = 9.
constexpr double kLanczosG = 7.0;
constexpr std::array<double, 9> kLanczos = {
    0.99999999999980993,     676.5203681218851,     -1259.1392167224028,
    771.32342877765313,      -176.61502916214059,   12.507343278686905,
    -0.13857109526572012,    9.9843695780195716e-6, 1.5056327351493116e-7,
};

double lanczos(double x) {
  x -= 1.0;
  double a = kLanczos[0];
  for (std::size_t i = 1; i < kLanczos.size(); ++i) a += kLanczos[i] / (x + static_cast<double>(i));
  const double t = x + kLanczosG + 0.5;
  // t^{x+1/2} split in two halves so large arguments do not overflow early.
  const double half = std::pow(t, 0.5 * (x + 0.5));
  return std::sqrt(2.0 * std::numbers::pi) * half * (half * std::exp(-t)) * a;
}

}  // namespace

double gamma_function(double x) {
  if (!(x > 0.0)) throw DomainError(fmt::format("Gamma({}) is outside the supported domain x > 0", x));
  if (x == std::floor(x) && x <= 30.0) {
    double f = 1.0;
    for (int k = 2; k < static_cast<int>(x); ++k) f *= k;
    return f;
  }
  if (x < 0.5) return std::numbers::pi / (std::sin(std::numbers::pi * x) * lanczos(1.0 - x));
  return lanczos(x);
}

}  // namespace graphfix::fbvp

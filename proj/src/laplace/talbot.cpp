#include "xdyn/laplace/talbot.hpp"

#include "xdyn/errors.hpp"

#include <Eigen/Eigenvalues>
#include <fmt/format.h>

#include <algorithm>
#include <cmath>
#include <complex>
#include <numbers>

namespace xdyn::laplace {

namespace {

using lcplx = std::complex<long double>;

constexpr long double kShift = -0.6122L;
constexpr long double kCotScale = 0.5017L;
constexpr long double kCotFreq = 0.6407L;
constexpr long double kImagSlope = 0.2645L;

lcplx horner(const std::vector<cplx>& c, lcplx s) {
  lcplx acc{};
  for (auto it = c.rbegin(); it != c.rend(); ++it) {
    acc = acc * s + lcplx(it->real(), it->imag());
  }
  return acc;
}

// Denominator roots from the companion matrix; used only to size the contour.
Eigen::VectorXcd companion_poles(const Polynomial& den) {
  const int n = den.degree();
  if (n < 1) return {};
  const auto& c = den.coefficients();
  Eigen::MatrixXcd comp = Eigen::MatrixXcd::Zero(n, n);
  for (int i = 1; i < n; ++i) comp(i, i - 1) = 1.0;
  for (int i = 0; i < n; ++i) comp(i, n - 1) = -c[static_cast<std::size_t>(i)] / c.back();
  Eigen::ComplexEigenSolver<Eigen::MatrixXcd> solver(comp, false);
  return solver.eigenvalues();
}

int node_count(const RationalLaplace& f, double t, const TalbotOptions& opt) {
  double needed = opt.min_nodes;
  const auto poles = companion_poles(f.denominator());
  for (Eigen::Index i = 0; i < poles.size(); ++i) {
    const cplx p = poles[i];
    if (p.real() * t < -45.0) continue;
    needed = std::max(needed, 5.0 * std::abs(p.imag()) * t);
    if (p.real() > 0.0) needed = std::max(needed, 8.0 * p.real() * t);
  }
  int n = static_cast<int>(std::ceil(needed));
  if (n % 2 != 0) ++n;
  if (n > opt.max_nodes) {
    throw DomainError("t", fmt::format("Talbot contour would need {} nodes at t = {}", n, t));
  }
  return n;
}

}  // namespace

cplx talbot_invert_complex(const RationalLaplace& f, double t, const TalbotOptions& opt) {
  if (!(t > 0.0)) throw DomainError("t", "Talbot inversion needs t > 0");
  if (f.is_zero()) return {};

  const int n = node_count(f, t, opt);
  const long double lt = t;
  const long double mu = static_cast<long double>(n) / lt;
  const auto& num = f.numerator().coefficients();
  const auto& den = f.denominator().coefficients();

  lcplx acc{};
  for (int k = 0; k < n; ++k) {
    const long double theta =
        -std::numbers::pi_v<long double> + (k + 0.5L) * 2.0L * std::numbers::pi_v<long double> / n;
    const long double arg = kCotFreq * theta;
    const long double cot = std::cos(arg) / std::sin(arg);
    const long double sin2 = std::sin(arg) * std::sin(arg);
    const lcplx s = mu * lcplx(kShift + kCotScale * theta * cot, kImagSlope * theta);
    const lcplx ds = mu * lcplx(kCotScale * cot - kCotScale * kCotFreq * theta / sin2, kImagSlope);
    acc += std::exp(s * lt) * horner(num, s) / horner(den, s) * ds;
  }
  const lcplx result = acc / lcplx(0.0L, static_cast<long double>(n));
  return {static_cast<double>(result.real()), static_cast<double>(result.imag())};
}

double talbot_invert(const RationalLaplace& f, double t, const TalbotOptions& opt) {
  const cplx v = talbot_invert_complex(f, t, opt);
  if (std::abs(v.imag()) > 1e-6) {
    throw ConjugatePairingError(
        fmt::format("Talbot inverse has imaginary part {:.3g} at t = {}", v.imag(), t));
  }
  return v.real();
}

}  // namespace xdyn::laplace

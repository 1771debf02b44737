#include "xdyn/measures/measures.hpp"

#include "xdyn/core/conventions.hpp"
#include "xdyn/errors.hpp"

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>
#include <fmt/format.h>

#include <algorithm>
#include <array>
#include <cmath>
#include <functional>

namespace xdyn::measures {

namespace {

constexpr double kLn4 = 1.3862943611198906;
constexpr double kNegativeEigenvalue = -1e-8;
constexpr double kFamilyTolerance = 1e-8;

double safe_sqrt(double x) noexcept { return std::sqrt(std::max(x, 0.0)); }

// -x ln x with 0 ln 0 = 0.
double eta(double x) noexcept { return x > 0.0 ? -x * std::log(x) : 0.0; }

double x_log_x(double x) noexcept { return x > 0.0 ? x * std::log(x) : 0.0; }

double entropy_of_spectrum(const std::array<double, 4>& ev) {
  double s = 0.0;
  for (double v : ev) {
    if (v < kNegativeEigenvalue) {
      throw DomainError("rho", fmt::format("eigenvalue {:.3g} is negative", v));
    }
    s += eta(v);
  }
  return std::clamp(s, 0.0, kLn4);
}

Eigen::Matrix4cd spin_flip() {
  Eigen::Matrix4cd f = Eigen::Matrix4cd::Zero();
  f(0, 3) = f(3, 0) = -1.0;
  f(1, 2) = f(2, 1) = 1.0;
  return f;
}

bool is_x_pattern(const Eigen::Matrix4cd& m) {
  for (int i = 0; i < 4; ++i) {
    for (int j = 0; j < 4; ++j) {
      if (i != j && i + j != 3 && m(i, j) != cplx{}) return false;
    }
  }
  return true;
}

}  // namespace

double concurrence_x_signed(const XState& s) noexcept {
  const double c1 = 2.0 * std::abs(s.w) - 2.0 * safe_sqrt(s.b * s.c);
  const double c2 = 2.0 * std::abs(s.z) - 2.0 * safe_sqrt(s.a * s.d);
  return std::max(c1, c2);
}

double concurrence_x(const XState& s) noexcept {
  return std::clamp(concurrence_x_signed(s), 0.0, 1.0);
}

double concurrence_wootters(const DensityMatrix4& rho) {
  validate(rho);
  std::array<double, 4> roots;
  if (is_x_pattern(rho.m)) {
    const XState s = extract_x(rho);
    const double ad = safe_sqrt(s.a * s.d);
    const double bc = safe_sqrt(s.b * s.c);
    roots = {ad + std::abs(s.w), std::abs(ad - std::abs(s.w)), bc + std::abs(s.z),
             std::abs(bc - std::abs(s.z))};
  } else {
    // sqrt(eig R) are the singular values of W^T F W for rho = W W^dagger.
    Eigen::SelfAdjointEigenSolver<Eigen::Matrix4cd> eig(rho.m);
    Eigen::Matrix4cd w = eig.eigenvectors();
    for (int i = 0; i < 4; ++i) w.col(i) *= safe_sqrt(eig.eigenvalues()(i));
    const Eigen::Matrix4cd tau = w.transpose() * spin_flip() * w;
    const Eigen::Vector4d sv = Eigen::JacobiSVD<Eigen::Matrix4cd>(tau).singularValues();
    roots = {sv(0), sv(1), sv(2), sv(3)};
  }
  std::sort(roots.begin(), roots.end(), std::greater<>());
  return std::clamp(roots[0] - roots[1] - roots[2] - roots[3], 0.0, 1.0);
}

double concurrence_single_excitation(const XState& s) {
  if (std::abs(s.d) > kStateTolerance) {
    throw DomainError("d", fmt::format("single-excitation state needs d = 0, got {}", s.d));
  }
  if (std::abs(s.w) > kStateTolerance) {
    throw DomainError("w", fmt::format("single-excitation state needs w = 0, got |w| = {}", std::abs(s.w)));
  }
  return std::clamp(2.0 * std::abs(s.z), 0.0, 1.0);
}

double entropy(const XState& s) {
  const double outer = std::sqrt((s.a - s.d) * (s.a - s.d) + 4.0 * std::norm(s.w));
  const double inner = std::sqrt((s.b - s.c) * (s.b - s.c) + 4.0 * std::norm(s.z));
  return entropy_of_spectrum({0.5 * (s.a + s.d + outer), 0.5 * (s.a + s.d - outer),
                              0.5 * (s.b + s.c + inner), 0.5 * (s.b + s.c - inner)});
}

double entropy(const DensityMatrix4& rho) {
  Eigen::SelfAdjointEigenSolver<Eigen::Matrix4cd> solver(rho.m, Eigen::EigenvaluesOnly);
  const auto& ev = solver.eigenvalues();
  return entropy_of_spectrum({ev(0), ev(1), ev(2), ev(3)});
}

double entropy_closed_form(const XState& s, BellFamily family) {
  const RadiantCoords rc = radiant_coords(s);
  double value = 0.0;
  if (family == BellFamily::psi) {
    if (std::abs(rc.rho_mm) > kFamilyTolerance || std::abs(rc.rho_pm) > kFamilyTolerance) {
      throw DomainError("rho_mm", "psi-family closed form needs rho_mm = rho_pm = 0");
    }
    const double f = std::sqrt((s.a - s.d) * (s.a - s.d) + 4.0 * std::norm(s.w));
    const double ad = s.a + s.d;
    value = 0.5 * (ad * kLn4 - 2.0 * x_log_x(rc.rho_pp) - x_log_x(ad - f) - x_log_x(ad + f));
  } else {
    if (std::abs(s.d) > kFamilyTolerance || std::abs(s.w) > kFamilyTolerance) {
      throw DomainError("d", "phi-family closed form needs d = w = 0");
    }
    const double pm_sum = rc.rho_pp + rc.rho_mm;
    const double j = std::sqrt((rc.rho_pp - rc.rho_mm) * (rc.rho_pp - rc.rho_mm) +
                               4.0 * std::norm(rc.rho_pm));
    value = 0.5 * (-2.0 * x_log_x(s.a) - x_log_x(pm_sum - j) - x_log_x(pm_sum + j)) +
            0.5 * pm_sum * kLn4;
  }
  return std::clamp(value, 0.0, kLn4);
}

MeasureSample measure(const XState& s) {
  const RadiantCoords rc = radiant_coords(s);
  return {concurrence_x(s), entropy(s), rc.rho_pp, rc.rho_mm, std::abs(rc.rho_pm)};
}

}  // namespace xdyn::measures

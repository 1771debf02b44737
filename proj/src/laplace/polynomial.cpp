#include "xdyn/laplace/polynomial.hpp"

#include "xdyn/errors.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

namespace xdyn::laplace {

namespace {

constexpr double kTrimRelative = 1e-14;

// p(z) and p'(z) by Horner.
std::pair<cplx, cplx> eval_with_derivative(const std::vector<cplx>& c, cplx z) {
  cplx p = c.back();
  cplx dp{};
  for (int i = static_cast<int>(c.size()) - 2; i >= 0; --i) {
    dp = dp * z + p;
    p = p * z + c[static_cast<std::size_t>(i)];
  }
  return {p, dp};
}

}  // namespace

Polynomial::Polynomial(std::vector<cplx> ascending) : coeffs_(std::move(ascending)) { trim(); }

Polynomial::Polynomial(std::initializer_list<cplx> ascending) : coeffs_(ascending) { trim(); }

Polynomial Polynomial::from_real(std::initializer_list<double> ascending) {
  std::vector<cplx> c(ascending.begin(), ascending.end());
  return Polynomial(std::move(c));
}

Polynomial Polynomial::monomial(cplx coeff, int power) {
  std::vector<cplx> c(static_cast<std::size_t>(power) + 1, cplx{});
  c.back() = coeff;
  return Polynomial(std::move(c));
}

void Polynomial::trim() {
  const double scale = max_abs_coefficient();
  if (scale == 0.0) {
    coeffs_.clear();
    return;
  }
  while (!coeffs_.empty() && std::abs(coeffs_.back()) <= kTrimRelative * scale) coeffs_.pop_back();
}

cplx Polynomial::coefficient(int power) const noexcept {
  if (power < 0 || power > degree()) return {};
  return coeffs_[static_cast<std::size_t>(power)];
}

double Polynomial::max_abs_coefficient() const noexcept {
  double m = 0.0;
  for (const auto& c : coeffs_) m = std::max(m, std::abs(c));
  return m;
}

cplx Polynomial::operator()(cplx s) const noexcept {
  cplx acc{};
  for (auto it = coeffs_.rbegin(); it != coeffs_.rend(); ++it) acc = acc * s + *it;
  return acc;
}

Polynomial Polynomial::derivative() const {
  if (coeffs_.size() <= 1) return {};
  std::vector<cplx> d(coeffs_.size() - 1);
  for (std::size_t i = 1; i < coeffs_.size(); ++i) d[i - 1] = static_cast<double>(i) * coeffs_[i];
  return Polynomial(std::move(d));
}

Polynomial Polynomial::conj() const {
  std::vector<cplx> c(coeffs_.size());
  std::transform(coeffs_.begin(), coeffs_.end(), c.begin(), [](cplx v) { return std::conj(v); });
  return Polynomial(std::move(c));
}

std::vector<cplx> Polynomial::taylor_at(cplx center, int order) const {
  // Repeated synthetic division: the k-th remainder is p^(k)(center)/k!.
  std::vector<cplx> work = coeffs_;
  std::vector<cplx> out(static_cast<std::size_t>(std::max(order, 0)), cplx{});
  for (int k = 0; k < order && !work.empty(); ++k) {
    const std::size_t n = work.size();
    cplx acc = work[n - 1];
    std::vector<cplx> quotient(n > 1 ? n - 1 : 0);
    for (std::size_t i = n - 1; i-- > 0;) {
      if (!quotient.empty()) quotient[i] = acc;
      acc = acc * center + work[i];
    }
    out[static_cast<std::size_t>(k)] = acc;
    work = std::move(quotient);
  }
  return out;
}

Polynomial& Polynomial::operator+=(const Polynomial& rhs) {
  if (rhs.coeffs_.size() > coeffs_.size()) coeffs_.resize(rhs.coeffs_.size());
  for (std::size_t i = 0; i < rhs.coeffs_.size(); ++i) coeffs_[i] += rhs.coeffs_[i];
  trim();
  return *this;
}

Polynomial& Polynomial::operator-=(const Polynomial& rhs) {
  if (rhs.coeffs_.size() > coeffs_.size()) coeffs_.resize(rhs.coeffs_.size());
  for (std::size_t i = 0; i < rhs.coeffs_.size(); ++i) coeffs_[i] -= rhs.coeffs_[i];
  trim();
  return *this;
}

Polynomial& Polynomial::operator*=(cplx k) {
  for (auto& c : coeffs_) c *= k;
  trim();
  return *this;
}

Polynomial operator*(const Polynomial& lhs, const Polynomial& rhs) {
  if (lhs.is_zero() || rhs.is_zero()) return {};
  std::vector<cplx> c(lhs.coeffs_.size() + rhs.coeffs_.size() - 1, cplx{});
  for (std::size_t i = 0; i < lhs.coeffs_.size(); ++i)
    for (std::size_t j = 0; j < rhs.coeffs_.size(); ++j) c[i + j] += lhs.coeffs_[i] * rhs.coeffs_[j];
  return Polynomial(std::move(c));
}

double root_residual(const Polynomial& p, cplx root) {
  const double scale =
      p.max_abs_coefficient() * std::pow(std::max(1.0, std::abs(root)), p.degree());
  return std::abs(p(root)) / scale;
}

std::vector<cplx> poly_roots(const Polynomial& p) {
  if (p.degree() < 1) {
    throw DomainError("polynomial", "root finding needs degree >= 1");
  }

  // Split off exact zero roots.
  const auto& all = p.coefficients();
  std::size_t zeros = 0;
  while (all[zeros] == cplx{}) ++zeros;
  std::vector<cplx> roots(zeros, cplx{});
  std::vector<cplx> c(all.begin() + static_cast<std::ptrdiff_t>(zeros), all.end());
  const int n = static_cast<int>(c.size()) - 1;
  if (n == 0) return roots;

  const cplx lead = c.back();
  for (auto& v : c) v /= lead;
  if (n == 1) {
    roots.push_back(-c[0]);
    return roots;
  }

  // Initial guesses on a circle at the Fujiwara-type modulus bound.
  double radius = 0.0;
  for (int k = 0; k < n; ++k) {
    radius = std::max(radius, std::pow(std::abs(c[static_cast<std::size_t>(k)]), 1.0 / (n - k)));
  }
  std::vector<cplx> z(static_cast<std::size_t>(n));
  for (int k = 0; k < n; ++k) {
    const double angle = 2.0 * std::numbers::pi * k / n + 0.4;
    z[static_cast<std::size_t>(k)] = std::polar(radius, angle);
  }

  constexpr int kMaxIterations = 2000;
  constexpr double eps = std::numeric_limits<double>::epsilon();
  std::vector<double> abs_c(c.size());
  for (std::size_t k = 0; k < c.size(); ++k) abs_c[k] = std::abs(c[k]);
  // Horner rounding bound on |p(z)|; below it the iterate cannot improve.
  const auto noise = [&](double r) {
    double acc = 0.0;
    for (auto it = abs_c.rbegin(); it != abs_c.rend(); ++it) acc = acc * r + *it;
    return eps * acc;
  };
  std::vector<bool> done(static_cast<std::size_t>(n), false);
  for (int iter = 0; iter < kMaxIterations; ++iter) {
    bool converged = true;
    for (int k = 0; k < n; ++k) {
      if (done[static_cast<std::size_t>(k)]) continue;
      auto& zk = z[static_cast<std::size_t>(k)];
      const auto [pv, dpv] = eval_with_derivative(c, zk);
      if (std::abs(pv) <= noise(std::abs(zk))) {
        done[static_cast<std::size_t>(k)] = true;
        continue;
      }
      const cplx ratio = pv / dpv;
      cplx repulsion{};
      for (int j = 0; j < n; ++j) {
        if (j != k) repulsion += 1.0 / (zk - z[static_cast<std::size_t>(j)]);
      }
      const cplx step = ratio / (1.0 - ratio * repulsion);
      if (!std::isfinite(step.real()) || !std::isfinite(step.imag())) continue;
      zk -= step;
      if (std::abs(step) > 4.0 * eps * std::max(std::abs(zk), radius * eps)) converged = false;
    }
    if (converged) break;
  }

  // Newton polish, accepted only when the residual decreases.
  for (auto& zk : z) {
    for (int it = 0; it < 3; ++it) {
      const auto [pv, dpv] = eval_with_derivative(c, zk);
      if (dpv == cplx{}) break;
      const cplx candidate = zk - pv / dpv;
      if (std::abs(eval_with_derivative(c, candidate).first) < std::abs(pv)) {
        zk = candidate;
      } else {
        break;
      }
    }
  }

  roots.insert(roots.end(), z.begin(), z.end());
  return roots;
}

}  // namespace xdyn::laplace

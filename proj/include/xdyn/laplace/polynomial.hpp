#pragma once

#include <complex>
#include <initializer_list>
#include <vector>

namespace xdyn::laplace {

using cplx = std::complex<double>;

// Complex polynomial in the Laplace variable, coefficients in ascending powers.
// Trailing coefficients below 1e-14 x (largest magnitude) are trimmed, so the
// leading coefficient of a non-zero polynomial is always significant.
class Polynomial {
 public:
  Polynomial() = default;
  explicit Polynomial(std::vector<cplx> ascending);
  Polynomial(std::initializer_list<cplx> ascending);
  static Polynomial from_real(std::initializer_list<double> ascending);

  // coeff * s^power
  static Polynomial monomial(cplx coeff, int power);

  // -1 for the zero polynomial.
  int degree() const noexcept { return static_cast<int>(coeffs_.size()) - 1; }
  bool is_zero() const noexcept { return coeffs_.empty(); }

  const std::vector<cplx>& coefficients() const noexcept { return coeffs_; }
  cplx coefficient(int power) const noexcept;
  cplx leading() const noexcept { return coeffs_.empty() ? cplx{} : coeffs_.back(); }
  double max_abs_coefficient() const noexcept;

  cplx operator()(cplx s) const noexcept;

  Polynomial derivative() const;
  Polynomial conj() const;

  // Coefficients of p(center + h) in ascending powers of h, up to h^(order-1).
  std::vector<cplx> taylor_at(cplx center, int order) const;

  Polynomial& operator+=(const Polynomial& rhs);
  Polynomial& operator-=(const Polynomial& rhs);
  Polynomial& operator*=(cplx k);

  friend Polynomial operator+(Polynomial lhs, const Polynomial& rhs) { return lhs += rhs; }
  friend Polynomial operator-(Polynomial lhs, const Polynomial& rhs) { return lhs -= rhs; }
  friend Polynomial operator*(const Polynomial& lhs, const Polynomial& rhs);
  friend Polynomial operator*(cplx k, Polynomial p) { return p *= k; }
  friend Polynomial operator*(Polynomial p, cplx k) { return p *= k; }
  friend Polynomial operator*(double k, Polynomial p) { return p *= cplx(k); }

 private:
  void trim();

  std::vector<cplx> coeffs_;
};

// Roots with multiplicity, Aberth-Ehrlich simultaneous iteration followed by a
// guarded Newton polish. Exact zero roots (vanishing low-order coefficients)
// are returned exactly. Throws DomainError for degree < 1.
std::vector<cplx> poly_roots(const Polynomial& p);

// Relative residual |p(root)| / (max|coef| * max(1,|root|)^deg).
double root_residual(const Polynomial& p, cplx root);

}  // namespace xdyn::laplace

#pragma once

#include "xdyn/laplace/polynomial.hpp"

#include <vector>

namespace xdyn::laplace {

// Proper rational function N(s)/D(s).
class RationalLaplace {
 public:
  RationalLaplace() : den_(Polynomial{cplx(1.0)}) {}
  // Throws ContractViolation when the denominator vanishes or deg N > deg D.
  RationalLaplace(Polynomial numerator, Polynomial denominator);

  // Constant c/s, i.e. a time-independent signal c.
  static RationalLaplace constant(cplx c);

  const Polynomial& numerator() const noexcept { return num_; }
  const Polynomial& denominator() const noexcept { return den_; }
  bool is_zero() const noexcept { return num_.is_zero(); }

  cplx operator()(cplx s) const noexcept { return num_(s) / den_(s); }

  // Transform of the complex-conjugate signal: conj(F(conj(s))).
  RationalLaplace conj() const;

  RationalLaplace& operator*=(cplx k);
  friend RationalLaplace operator*(cplx k, RationalLaplace f) { return f *= k; }
  friend RationalLaplace operator*(double k, RationalLaplace f) { return f *= cplx(k); }

  // Sum over the product denominator.
  friend RationalLaplace operator+(const RationalLaplace& f, const RationalLaplace& g);

 private:
  Polynomial num_;
  Polynomial den_;
};

struct PoleTerm {
  cplx pole;
  cplx residue;
  int multiplicity = 1;
};

// f(t) = sum residue * t^(m-1) e^(pole t) / (m-1)!. A pole of multiplicity m
// contributes one term per power 1..m.
struct ExponentialSum {
  std::vector<PoleTerm> terms;

  cplx operator()(double t) const noexcept;
  ExponentialSum& operator+=(const ExponentialSum& rhs);
  ExponentialSum& operator*=(cplx k);
};

ExponentialSum partial_fractions(const RationalLaplace& f);

// Real part of the sum. Throws DomainError for t < 0 and ConjugatePairingError
// when |Im| > 1e-6.
double eval_exp_sum(const ExponentialSum& e, double t);

// lim s->inf of s F(s). Throws ContractViolation for an impulsive transform.
cplx initial_value(const RationalLaplace& f);

// lim s->0 of s F(s). Throws StabilityError unless every pole other than a
// simple one at the origin lies in the open left half-plane.
cplx final_value(const RationalLaplace& f);

}  // namespace xdyn::laplace

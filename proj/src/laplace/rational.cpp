#include "xdyn/laplace/rational.hpp"

#include "xdyn/errors.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

namespace xdyn::laplace {

namespace {

constexpr double kImpulseTolerance = 1e-12;
constexpr double kSelfCheckTolerance = 1e-6;
constexpr double kZeroCoefficient = 1e-14;
constexpr double kStabilityMargin = 1e-10;

using Series = std::vector<cplx>;

Series series_mul(const Series& x, const Series& y, std::size_t order) {
  Series out(order, cplx{});
  for (std::size_t i = 0; i < std::min(order, x.size()); ++i)
    for (std::size_t j = 0; i + j < order && j < y.size(); ++j) out[i + j] += x[i] * y[j];
  return out;
}

// 1/(a + h) to the given order.
Series series_reciprocal_linear(cplx a, std::size_t order) {
  Series out(order);
  cplx term = 1.0 / a;
  for (std::size_t k = 0; k < order; ++k) {
    out[k] = term;
    term *= -1.0 / a;
  }
  return out;
}

struct Cluster {
  cplx pole;
  int multiplicity;
  std::vector<cplx> members;
};

std::vector<Cluster> cluster_roots(const Polynomial& den, const std::vector<cplx>& roots,
                                   double relative) {
  double scale = 0.0;
  for (const auto& r : roots) scale = std::max(scale, std::abs(r));
  const double floor = 1e-3 * (scale > 0.0 ? scale : 1.0);

  const std::size_t n = roots.size();
  std::vector<std::size_t> parent(n);
  std::iota(parent.begin(), parent.end(), std::size_t{0});
  auto find = [&](std::size_t i) {
    while (parent[i] != i) i = parent[i] = parent[parent[i]];
    return i;
  };
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      const double reach =
          relative * std::max({std::abs(roots[i]), std::abs(roots[j]), floor});
      if (std::abs(roots[i] - roots[j]) <= reach) parent[find(i)] = find(j);
    }
  }

  std::vector<Cluster> clusters;
  std::vector<std::size_t> slot(n, n);
  for (std::size_t i = 0; i < n; ++i) {
    const std::size_t root = find(i);
    if (slot[root] == n) {
      slot[root] = clusters.size();
      clusters.push_back({});
    }
    clusters[slot[root]].members.push_back(roots[i]);
  }
  for (auto& c : clusters) {
    cplx sum{};
    for (const auto& m : c.members) sum += m;
    c.pole = sum / static_cast<double>(c.members.size());
    c.multiplicity = static_cast<int>(c.members.size());
    if (c.multiplicity > 1) {
      // The merged pole is a simple root of D^(m-1).
      Polynomial dm = den;
      for (int k = 1; k < c.multiplicity; ++k) dm = dm.derivative();
      const Polynomial dm1 = dm.derivative();
      for (int it = 0; it < 5; ++it) {
        const cplx slope = dm1(c.pole);
        if (slope == cplx{}) break;
        const cplx candidate = c.pole - dm(c.pole) / slope;
        if (std::abs(dm(candidate)) >= std::abs(dm(c.pole))) break;
        c.pole = candidate;
      }
    }
  }
  return clusters;
}

cplx term_value(const PoleTerm& term, double t) {
  double power = 1.0;
  for (int k = 1; k < term.multiplicity; ++k) power *= t / k;
  return term.residue * power * std::exp(term.pole * t);
}

cplx pf_laplace_value(const ExponentialSum& e, cplx s) {
  cplx acc{};
  for (const auto& term : e.terms) acc += term.residue / std::pow(s - term.pole, term.multiplicity);
  return acc;
}

ExponentialSum decompose(const Polynomial& num, const Polynomial& den,
                         const std::vector<Cluster>& clusters) {
  ExponentialSum out;
  const cplx lead = den.leading();
  for (std::size_t i = 0; i < clusters.size(); ++i) {
    const auto& ci = clusters[i];
    const auto order = static_cast<std::size_t>(ci.multiplicity);
    Series g = num.taylor_at(ci.pole, ci.multiplicity);
    for (auto& v : g) v /= lead;
    for (std::size_t j = 0; j < clusters.size(); ++j) {
      if (j == i) continue;
      const Series inv = series_reciprocal_linear(ci.pole - clusters[j].pole, order);
      for (int r = 0; r < clusters[j].multiplicity; ++r) g = series_mul(g, inv, order);
    }
    for (int k = 1; k <= ci.multiplicity; ++k) {
      out.terms.push_back({ci.pole, g[order - static_cast<std::size_t>(k)], k});
    }
  }
  return out;
}

// Smallest relative mismatch between the decomposition and N/D at probes off
// the real axis.
double self_check(const ExponentialSum& e, const Polynomial& num, const Polynomial& den,
                  const std::vector<Cluster>& clusters) {
  double scale = 0.0;
  for (const auto& c : clusters) scale = std::max(scale, std::abs(c.pole));
  if (scale == 0.0) scale = 1.0;
  double best = std::numeric_limits<double>::infinity();
  for (double radius : {1.5, 10.0}) {
    for (double angle : {0.7, 2.1}) {
      const cplx s = std::polar(radius * scale, angle);
      const cplx exact = num(s) / den(s);
      if (exact == cplx{}) continue;
      best = std::min(best, std::abs(pf_laplace_value(e, s) - exact) / std::abs(exact));
    }
  }
  return best;
}

std::vector<cplx> closest_pair(const std::vector<Cluster>& clusters) {
  std::vector<cplx> pair;
  double gap = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < clusters.size(); ++i) {
    for (std::size_t j = i + 1; j < clusters.size(); ++j) {
      const double d = std::abs(clusters[i].pole - clusters[j].pole);
      if (d < gap) {
        gap = d;
        pair = {clusters[i].pole, clusters[j].pole};
      }
    }
  }
  return pair;
}

}  // namespace

RationalLaplace::RationalLaplace(Polynomial numerator, Polynomial denominator)
    : num_(std::move(numerator)), den_(std::move(denominator)) {
  if (den_.is_zero()) throw ContractViolation("rational transform with zero denominator");
  if (num_.degree() > den_.degree()) {
    throw ContractViolation(fmt::format("improper rational transform: deg N = {} > deg D = {}",
                                        num_.degree(), den_.degree()));
  }
}

RationalLaplace RationalLaplace::constant(cplx c) {
  return RationalLaplace(Polynomial{c}, Polynomial{cplx(0.0), cplx(1.0)});
}

RationalLaplace RationalLaplace::conj() const { return RationalLaplace(num_.conj(), den_.conj()); }

RationalLaplace& RationalLaplace::operator*=(cplx k) {
  num_ *= k;
  return *this;
}

RationalLaplace operator+(const RationalLaplace& f, const RationalLaplace& g) {
  if (f.is_zero()) return g;
  if (g.is_zero()) return f;
  return RationalLaplace(f.num_ * g.den_ + g.num_ * f.den_, f.den_ * g.den_);
}

cplx ExponentialSum::operator()(double t) const noexcept {
  cplx acc{};
  for (const auto& term : terms) acc += term_value(term, t);
  return acc;
}

ExponentialSum& ExponentialSum::operator+=(const ExponentialSum& rhs) {
  terms.insert(terms.end(), rhs.terms.begin(), rhs.terms.end());
  return *this;
}

ExponentialSum& ExponentialSum::operator*=(cplx k) {
  for (auto& term : terms) term.residue *= k;
  return *this;
}

ExponentialSum partial_fractions(const RationalLaplace& f) {
  ExponentialSum out;
  Polynomial num = f.numerator();
  const Polynomial& den = f.denominator();
  if (num.is_zero()) return out;

  if (num.degree() == den.degree()) {
    const cplx impulse = num.leading() / den.leading();
    if (std::abs(impulse) > kImpulseTolerance) {
      throw ContractViolation(
          fmt::format("transform has an impulse part of magnitude {:.3g}", std::abs(impulse)));
    }
    num -= impulse * den;
    if (num.is_zero()) return out;
  }
  if (den.degree() == 0) return out;

  const auto roots = poly_roots(den);
  // Aberth splits an m-fold root by roughly eps^(1/m); widen the merge radius
  // until the decomposition passes its self-check.
  double error = 0.0;
  std::vector<cplx> closest;
  for (double relative : {1e-6, 1e-5, 1e-4, 1e-3}) {
    const auto clusters = cluster_roots(den, roots, relative);
    out = decompose(num, den, clusters);
    error = self_check(out, num, den, clusters);
    if (error <= kSelfCheckTolerance) return out;
    closest = closest_pair(clusters);
  }
  throw ClusteredRootsError(
      fmt::format("partial fractions failed self-check (relative error {:.3g})", error), closest);
}

double eval_exp_sum(const ExponentialSum& e, double t) {
  if (!(t >= 0.0)) throw DomainError("t", "time must be non-negative");
  const cplx v = e(t);
  if (std::abs(v.imag()) > 1e-6) {
    throw ConjugatePairingError(
        fmt::format("signal has imaginary part {:.3g} at t = {}", v.imag(), t));
  }
  return v.real();
}

cplx initial_value(const RationalLaplace& f) {
  const auto& num = f.numerator();
  const auto& den = f.denominator();
  if (num.is_zero()) return {};
  if (num.degree() == den.degree()) {
    throw ContractViolation("impulsive transform has no finite initial value");
  }
  if (num.degree() == den.degree() - 1) return num.leading() / den.leading();
  return {};
}

cplx final_value(const RationalLaplace& f) {
  const auto& num = f.numerator();
  const auto& den = f.denominator();
  if (num.is_zero()) return {};

  const auto& c = den.coefficients();
  const double scale = den.max_abs_coefficient();
  std::size_t origin = 0;
  while (origin < c.size() && std::abs(c[origin]) <= kZeroCoefficient * scale) ++origin;
  if (origin > 1) throw StabilityError("pole of order > 1 at the origin");

  const Polynomial reduced(std::vector<cplx>(c.begin() + static_cast<std::ptrdiff_t>(origin), c.end()));
  if (reduced.degree() >= 1) {
    for (const auto& p : poly_roots(reduced)) {
      if (p.real() >= -kStabilityMargin * std::max(std::abs(p), 1e-300)) {
        throw StabilityError(
            fmt::format("pole {}{:+}i is not in the open left half-plane", p.real(), p.imag()));
      }
    }
  }
  if (origin == 0) return {};
  return num(0.0) / reduced(0.0);
}

}  // namespace xdyn::laplace

#include "oracle.hpp"

#include "xdyn/errors.hpp"
#include "xdyn/laplace/polynomial.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <numeric>
#include <random>

namespace xdyn::oracle {

namespace {

double off_diagonal_norm(const Eigen::Matrix4cd& m) {
  double s = 0.0;
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j)
      if (i != j) s += std::norm(m(i, j));
  return std::sqrt(s);
}

// Complex arithmetic in binary128 for the characteristic polynomial; the
// constant term of R is far below double round-off for nearly singular states.
struct Quad {
  __float128 re = 0;
  __float128 im = 0;
};

Quad operator+(Quad x, Quad y) { return {x.re + y.re, x.im + y.im}; }
Quad operator*(Quad x, Quad y) { return {x.re * y.re - x.im * y.im, x.re * y.im + x.im * y.re}; }

using QuadMatrix = std::array<std::array<Quad, 4>, 4>;

QuadMatrix to_quad(const Eigen::Matrix4cd& m) {
  QuadMatrix q;
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j)
      q[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] = {m(i, j).real(), m(i, j).imag()};
  return q;
}

QuadMatrix multiply(const QuadMatrix& x, const QuadMatrix& y) {
  QuadMatrix out{};
  for (std::size_t i = 0; i < 4; ++i)
    for (std::size_t j = 0; j < 4; ++j)
      for (std::size_t k = 0; k < 4; ++k) out[i][j] = out[i][j] + x[i][k] * y[k][j];
  return out;
}

// Characteristic polynomial det(lambda I - a) by Faddeev-LeVerrier.
laplace::Polynomial characteristic_polynomial(const QuadMatrix& a) {
  constexpr int n = 4;
  std::array<Quad, n + 1> c{};
  c[n] = {1, 0};
  QuadMatrix m{};
  for (int k = 1; k <= n; ++k) {
    m = multiply(a, m);
    for (std::size_t i = 0; i < 4; ++i) m[i][i] = m[i][i] + c[static_cast<std::size_t>(n - k + 1)];
    const QuadMatrix am = multiply(a, m);
    Quad tr;
    for (std::size_t i = 0; i < 4; ++i) tr = tr + am[i][i];
    c[static_cast<std::size_t>(n - k)] = {-tr.re / k, -tr.im / k};
  }
  std::vector<cplx> out;
  for (const auto& q : c) out.emplace_back(static_cast<double>(q.re), static_cast<double>(q.im));
  return laplace::Polynomial(std::move(out));
}

// Roots whose imaginary part exposes an unresolved multiple eigenvalue are
// replaced by the mean of their cluster.
std::vector<cplx> merge_split_roots(std::vector<cplx> roots, double scale) {
  const double radius = 1e-3 * scale;
  const std::size_t n = roots.size();
  std::vector<std::size_t> cluster(n);
  std::iota(cluster.begin(), cluster.end(), std::size_t{0});
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j)
      if (std::abs(roots[j] - roots[i]) <= radius) {
        const std::size_t from = cluster[j], to = cluster[i];
        for (auto& c : cluster)
          if (c == from) c = to;
      }
  std::vector<cplx> out = roots;
  for (std::size_t i = 0; i < n; ++i) {
    bool complex_member = false;
    cplx mean{};
    int count = 0;
    for (std::size_t j = 0; j < n; ++j) {
      if (cluster[j] != cluster[i]) continue;
      complex_member = complex_member || std::abs(roots[j].imag()) > 1e-8;
      mean += roots[j];
      ++count;
    }
    if (!complex_member) continue;
    mean /= static_cast<double>(count);
    // A split multiple root of R is real; the residue is splitting noise.
    out[i] = std::abs(mean.imag()) <= radius ? cplx(mean.real(), 0.0) : mean;
  }
  return out;
}

Eigen::Vector4cd random_pure(std::mt19937_64& rng, const std::vector<int>& support) {
  std::normal_distribution<double> normal;
  Eigen::Vector4cd v = Eigen::Vector4cd::Zero();
  for (int idx : support) v(idx) = cplx(normal(rng), normal(rng));
  return v / v.norm();
}

}  // namespace

HermitianEigen eig_hermitian4(const Eigen::Matrix4cd& m) {
  if ((m - m.adjoint()).cwiseAbs().maxCoeff() > 1e-12) {
    throw DomainError("rho", "matrix is not Hermitian");
  }
  Eigen::Matrix4cd a = 0.5 * (m + m.adjoint());
  Eigen::Matrix4cd v = Eigen::Matrix4cd::Identity();
  const double scale = std::max(a.norm(), 1e-300);
  for (int sweep = 0; sweep < 60 && off_diagonal_norm(a) > 1e-16 * scale; ++sweep) {
    for (int p = 0; p < 3; ++p) {
      for (int q = p + 1; q < 4; ++q) {
        const double mag = std::abs(a(p, q));
        if (mag <= 1e-18 * scale) {
          a(p, q) = a(q, p) = 0.0;
          continue;
        }
        // Phase that makes the (p, q) entry real, then a real rotation.
        const cplx phase = a(p, q) / mag;
        const double theta = 0.5 * std::atan2(2.0 * mag, a(p, p).real() - a(q, q).real());
        const double c = std::cos(theta);
        const double s = std::sin(theta);
        Eigen::Matrix4cd u = Eigen::Matrix4cd::Identity();
        u(p, p) = c;
        u(p, q) = -s;
        u(q, p) = s * std::conj(phase);
        u(q, q) = c * std::conj(phase);
        a = (u.adjoint() * a * u).eval();
        v = (v * u).eval();
      }
    }
  }
  std::array<int, 4> order = {0, 1, 2, 3};
  std::sort(order.begin(), order.end(), [&](int i, int j) { return a(i, i).real() > a(j, j).real(); });
  HermitianEigen out;
  for (int k = 0; k < 4; ++k) {
    out.values[static_cast<std::size_t>(k)] = a(order[static_cast<std::size_t>(k)], order[static_cast<std::size_t>(k)]).real();
    out.vectors.col(k) = v.col(order[static_cast<std::size_t>(k)]);
  }
  return out;
}

std::array<double, 4> eig_hermitian4(const DensityMatrix4& rho) { return eig_hermitian4(rho.m).values; }

double wootters_bruteforce(const DensityMatrix4& rho) {
  Eigen::Matrix4cd flip = Eigen::Matrix4cd::Zero();
  flip(0, 3) = flip(3, 0) = -1.0;
  flip(1, 2) = flip(2, 1) = 1.0;
  const QuadMatrix r = multiply(multiply(multiply(to_quad(rho.m), to_quad(flip)), to_quad(rho.m.conjugate())),
                                to_quad(flip));
  // Coefficients at binary128 round-off stand for exact zero eigenvalues.
  std::vector<cplx> c = characteristic_polynomial(r).coefficients();
  double bound = 0.0;
  for (const auto& row : r)
    for (const auto& x : row) bound = std::max(bound, std::hypot(static_cast<double>(x.re), static_cast<double>(x.im)));
  bound = std::max(4.0 * bound, 1e-300);
  for (std::size_t k = 0; k + 1 < c.size(); ++k) {
    if (std::abs(c[k]) > 1e-28 * std::pow(bound, static_cast<int>(c.size() - 1 - k))) break;
    c[k] = 0.0;
  }
  std::vector<cplx> roots = laplace::poly_roots(laplace::Polynomial(std::move(c)));
  double scale = 0.0;
  for (const auto& x : roots) scale = std::max(scale, std::abs(x));
  roots = merge_split_roots(roots, std::max(scale, 1e-300));
  std::array<double, 4> sq;
  for (std::size_t i = 0; i < 4; ++i) {
    if (std::abs(roots[i].imag()) > 1e-8) {
      throw NumericalError("R has a complex eigenvalue");
    }
    sq[i] = std::sqrt(std::max(roots[i].real(), 0.0));
  }
  std::sort(sq.begin(), sq.end(), std::greater<>());
  return std::max(0.0, sq[0] - sq[1] - sq[2] - sq[3]);
}

std::vector<DensityMatrix4> gen_states(const RandomStateGen& gen, int n) {
  std::mt19937_64 rng(gen.seed);
  std::uniform_int_distribution<int> count(1, 4);
  std::exponential_distribution<double> weight(1.0);
  std::bernoulli_distribution coin(0.5);
  std::vector<DensityMatrix4> out;
  out.reserve(static_cast<std::size_t>(std::max(n, 0)));
  for (int i = 0; i < n; ++i) {
    const int k = count(rng);
    std::vector<double> p(static_cast<std::size_t>(k));
    for (auto& x : p) x = weight(rng);
    const double total = std::accumulate(p.begin(), p.end(), 0.0);
    DensityMatrix4 rho;
    for (int j = 0; j < k; ++j) {
      std::vector<int> support;
      switch (gen.family) {
        case StateFamily::general_x:
          support = coin(rng) ? std::vector<int>{0, 3} : std::vector<int>{1, 2};
          break;
        case StateFamily::single_excitation:
          support = {0, 1, 2};
          break;
        case StateFamily::physical_dense:
          support = {0, 1, 2, 3};
          break;
      }
      const Eigen::Vector4cd psi = random_pure(rng, support);
      rho.m += (p[static_cast<std::size_t>(j)] / total) * (psi * psi.adjoint());
    }
    rho.m = 0.5 * (rho.m + rho.m.adjoint()).eval();
    out.push_back(rho);
  }
  return out;
}

SingleExcitation as_single_excitation(const DensityMatrix4& rho) {
  SingleExcitation se;
  se.a = rho.m(0, 0).real();
  se.b = rho.m(1, 1).real();
  se.c = rho.m(2, 2).real();
  se.j = rho.m(0, 1);
  se.k = rho.m(0, 2);
  se.z = rho.m(1, 2);
  return se;
}

}  // namespace xdyn::oracle

#include "xdyn/core/model.hpp"

#include "xdyn/core/conventions.hpp"
#include "xdyn/errors.hpp"

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>
#include <fmt/format.h>

namespace xdyn {

namespace {

void require_unit_interval(double value, const char* field) {
  if (!(value >= 0.0 && value <= 1.0)) {
    throw DomainError(field, fmt::format("must lie in [0, 1], got {}", value));
  }
}

void require_angle(double theta) {
  if (!(theta >= 0.0 && theta < 2.0 * kPi)) {
    throw DomainError("theta", fmt::format("must lie in [0, 2pi), got {}", theta));
  }
}

XState ewl_phi_state(double r, double alpha2, double theta) {
  const double mixed = (1.0 - r) / 4.0;
  const double coherence = r * std::sqrt(alpha2 * (1.0 - alpha2));
  XState s;
  s.a = mixed;
  s.b = r * alpha2 + mixed;
  s.c = r * (1.0 - alpha2) + mixed;
  s.d = mixed;
  s.z = coherence * unit_phase(theta);
  return s;
}

XState ewl_psi_state(double r, double alpha2, double theta) {
  const double mixed = (1.0 - r) / 4.0;
  const double coherence = r * std::sqrt(alpha2 * (1.0 - alpha2));
  XState s;
  s.a = r * alpha2 + mixed;
  s.b = mixed;
  s.c = mixed;
  s.d = r * (1.0 - alpha2) + mixed;
  s.w = coherence * unit_phase(theta);
  return s;
}

Eigen::Matrix3cd single_excitation_block(const SingleExcitation& se) {
  Eigen::Matrix3cd m;
  m << se.a, se.j, se.k,
      std::conj(se.j), se.b, se.z,
      std::conj(se.k), std::conj(se.z), se.c;
  return m;
}

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

}  // namespace

cplx unit_phase(double theta) noexcept {
  double re = std::cos(theta);
  double im = std::sin(theta);
  constexpr double snap = 4e-16;
  if (std::abs(re) < snap) re = 0.0;
  if (std::abs(im) < snap) im = 0.0;
  return {re, im};
}

ReservoirParams::ReservoirParams(double gamma, double omega)
    : gamma_(gamma), omega_(omega), gamma0_(4.0 * omega * omega / gamma) {
  if (!(gamma > 0.0) || !std::isfinite(gamma)) {
    throw DomainError("gamma", fmt::format("must be positive, got {}", gamma));
  }
  if (!(omega > 0.0) || !std::isfinite(omega)) {
    throw DomainError("omega", fmt::format("must be positive, got {}", omega));
  }
}

std::array<double, 8> XState::as_vector() const noexcept {
  return {a, b, c, d, w.real(), w.imag(), z.real(), z.imag()};
}

XState XState::from_vector(const std::array<double, 8>& v) noexcept {
  XState s;
  s.a = v[0];
  s.b = v[1];
  s.c = v[2];
  s.d = v[3];
  s.w = {v[4], v[5]};
  s.z = {v[6], v[7]};
  return s;
}

XState operator+(const XState& lhs, const XState& rhs) noexcept {
  XState s;
  s.a = lhs.a + rhs.a;
  s.b = lhs.b + rhs.b;
  s.c = lhs.c + rhs.c;
  s.d = lhs.d + rhs.d;
  s.w = lhs.w + rhs.w;
  s.z = lhs.z + rhs.z;
  return s;
}

XState operator*(double k, const XState& s) noexcept {
  XState out;
  out.a = k * s.a;
  out.b = k * s.b;
  out.c = k * s.c;
  out.d = k * s.d;
  out.w = k * s.w;
  out.z = k * s.z;
  return out;
}

double max_abs_diff(const XState& lhs, const XState& rhs) noexcept {
  const auto u = lhs.as_vector();
  const auto v = rhs.as_vector();
  double worst = 0.0;
  for (std::size_t i = 0; i < u.size(); ++i) worst = std::max(worst, std::abs(u[i] - v[i]));
  return worst;
}

void validate(const XState& s, double tol) {
  if (std::abs(s.trace() - 1.0) > tol) {
    throw DomainError("trace", fmt::format("a+b+c+d = {} deviates from 1", s.trace()));
  }
  const std::array<std::pair<const char*, double>, 4> pops{
      {{"a", s.a}, {"b", s.b}, {"c", s.c}, {"d", s.d}}};
  for (const auto& [name, value] : pops) {
    if (value < -tol || value > 1.0 + tol) {
      throw DomainError(name, fmt::format("population {} outside [0, 1]", value));
    }
  }
  if (std::norm(s.w) > s.a * s.d + tol) {
    throw DomainError("w", fmt::format("|w|^2 = {} exceeds a*d = {}", std::norm(s.w), s.a * s.d));
  }
  if (std::norm(s.z) > s.b * s.c + tol) {
    throw DomainError("z", fmt::format("|z|^2 = {} exceeds b*c = {}", std::norm(s.z), s.b * s.c));
  }
}

void validate(const DensityMatrix4& rho, double psd_tol) {
  const double herm = (rho.m - rho.m.adjoint()).cwiseAbs().maxCoeff();
  if (herm > kHermitianTolerance) {
    throw DomainError("rho", fmt::format("not Hermitian (deviation {})", herm));
  }
  const cplx tr = rho.m.trace();
  if (std::abs(tr - 1.0) > kStateTolerance) {
    throw DomainError("rho", fmt::format("trace {} deviates from 1", tr.real()));
  }
  Eigen::SelfAdjointEigenSolver<Eigen::Matrix4cd> es(rho.m, Eigen::EigenvaluesOnly);
  if (es.eigenvalues().minCoeff() < -psd_tol) {
    throw DomainError("rho", fmt::format("negative eigenvalue {}", es.eigenvalues().minCoeff()));
  }
}

DensityMatrix4 to_dense(const XState& s) {
  DensityMatrix4 rho;
  rho.m(0, 0) = s.a;
  rho.m(1, 1) = s.b;
  rho.m(2, 2) = s.c;
  rho.m(3, 3) = s.d;
  rho.m(0, 3) = s.w;
  rho.m(3, 0) = std::conj(s.w);
  rho.m(1, 2) = s.z;
  rho.m(2, 1) = std::conj(s.z);
  return rho;
}

XState extract_x(const DensityMatrix4& rho) noexcept {
  XState s;
  s.a = rho.m(0, 0).real();
  s.b = rho.m(1, 1).real();
  s.c = rho.m(2, 2).real();
  s.d = rho.m(3, 3).real();
  s.w = rho.m(0, 3);
  s.z = rho.m(1, 2);
  return s;
}

RadiantCoords radiant_coords(const XState& s) noexcept {
  RadiantCoords rc;
  const double half_sum = 0.5 * (s.b + s.c);
  rc.rho_pp = half_sum + s.z.real();
  rc.rho_mm = half_sum - s.z.real();
  rc.rho_pm = cplx(0.5 * (s.b - s.c), kRadiantCoherenceSign * s.z.imag());
  return rc;
}

SinglePairBlock from_radiant(const RadiantCoords& rc) noexcept {
  const cplx pm = rc.rho_pm;
  const cplx mp = std::conj(pm);
  SinglePairBlock blk;
  blk.b = (0.5 * (rc.rho_pp + rc.rho_mm + pm + mp)).real();
  blk.c = (0.5 * (rc.rho_pp + rc.rho_mm - pm - mp)).real();
  blk.z = 0.5 * (rc.rho_pp - rc.rho_mm - pm + mp);
  return blk;
}

std::string kind_name(const InitialStateSpec& spec) {
  return std::visit(overloaded{
                        [](const BellPhi&) { return std::string("bell-phi"); },
                        [](const BellPsi&) { return std::string("bell-psi"); },
                        [](const EwlPhi&) { return std::string("ewl-phi"); },
                        [](const EwlPsi&) { return std::string("ewl-psi"); },
                        [](const Werner&) { return std::string("werner"); },
                        [](const WernerLike&) { return std::string("werner-like"); },
                        [](const FactorizedMixed&) { return std::string("factorized-mixed"); },
                        [](const SingleExcitation&) { return std::string("single-excitation"); },
                        [](const RawX&) { return std::string("raw-x"); },
                    },
                    spec);
}

void validate(const InitialStateSpec& spec) {
  std::visit(overloaded{
                 [](const BellPhi& s) {
                   require_unit_interval(s.alpha2, "alpha2");
                   require_angle(s.theta);
                 },
                 [](const BellPsi& s) {
                   require_unit_interval(s.alpha2, "alpha2");
                   require_angle(s.theta);
                 },
                 [](const EwlPhi& s) {
                   require_unit_interval(s.r, "r");
                   require_unit_interval(s.alpha2, "alpha2");
                   require_angle(s.theta);
                 },
                 [](const EwlPsi& s) {
                   require_unit_interval(s.r, "r");
                   require_unit_interval(s.alpha2, "alpha2");
                   require_angle(s.theta);
                 },
                 [](const Werner& s) { require_unit_interval(s.r, "r"); },
                 [](const WernerLike& s) {
                   require_unit_interval(s.r, "r");
                   if (s.bell_index < 0 || s.bell_index > 3) {
                     throw DomainError("bell_index",
                                       fmt::format("must be 0..3, got {}", s.bell_index));
                   }
                 },
                 [](const FactorizedMixed& s) { require_unit_interval(s.alpha2, "alpha2"); },
                 [](const SingleExcitation& s) {
                   for (auto [name, v] : {std::pair{"a", s.a}, {"b", s.b}, {"c", s.c}}) {
                     if (v < -kStateTolerance || v > 1.0 + kStateTolerance) {
                       throw DomainError(name, fmt::format("population {} outside [0, 1]", v));
                     }
                   }
                   if (std::abs(s.a + s.b + s.c - 1.0) > kStateTolerance) {
                     throw DomainError("trace",
                                       fmt::format("a+b+c = {} deviates from 1", s.a + s.b + s.c));
                   }
                   Eigen::SelfAdjointEigenSolver<Eigen::Matrix3cd> es(single_excitation_block(s),
                                                                      Eigen::EigenvaluesOnly);
                   if (es.eigenvalues().minCoeff() < -kStateTolerance) {
                     throw DomainError("z", fmt::format("single-excitation block not positive "
                                                        "(eigenvalue {})",
                                                        es.eigenvalues().minCoeff()));
                   }
                 },
                 [](const RawX& s) { validate(s.state, kStateTolerance); },
             },
             spec);
}

XState construct_initial(const InitialStateSpec& spec) {
  validate(spec);
  return std::visit(
      overloaded{
          [](const BellPhi& s) { return ewl_phi_state(1.0, s.alpha2, s.theta); },
          [](const BellPsi& s) { return ewl_psi_state(1.0, s.alpha2, s.theta); },
          [](const EwlPhi& s) { return ewl_phi_state(s.r, s.alpha2, s.theta); },
          [](const EwlPsi& s) { return ewl_psi_state(s.r, s.alpha2, s.theta); },
          [](const Werner& s) { return ewl_phi_state(s.r, 0.5, kPi); },
          [](const WernerLike& s) {
            switch (s.bell_index) {
              case 0: return ewl_psi_state(s.r, 0.5, 0.0);
              case 1: return ewl_psi_state(s.r, 0.5, kPi);
              case 2: return ewl_phi_state(s.r, 0.5, 0.0);
              default: return ewl_phi_state(s.r, 0.5, kPi);
            }
          },
          [](const FactorizedMixed& s) {
            const double p = s.alpha2;
            const double q = 1.0 - p;
            XState x;
            x.a = p * p;
            x.b = q * p;
            x.c = p * q;
            x.d = q * q;
            return x;
          },
          [](const SingleExcitation& s) {
            XState x;
            x.a = s.a;
            x.b = s.b;
            x.c = s.c;
            x.z = s.z;
            return x;
          },
          [](const RawX& s) { return s.state; },
      },
      spec);
}

DensityMatrix4 construct_initial_dense(const InitialStateSpec& spec) {
  DensityMatrix4 rho = to_dense(construct_initial(spec));
  if (const auto* se = std::get_if<SingleExcitation>(&spec)) {
    rho.m(0, 1) = se->j;
    rho.m(1, 0) = std::conj(se->j);
    rho.m(0, 2) = se->k;
    rho.m(2, 0) = std::conj(se->k);
  }
  return rho;
}

}  // namespace xdyn

#include "xdyn/solutions/pseudomode.hpp"

#include "xdyn/errors.hpp"

#include <fmt/format.h>

#include <cmath>

namespace xdyn::solutions {

namespace {

constexpr double kTraceTolerance = 1e-6;

Polynomial real_poly(std::initializer_list<double> ascending) {
  return Polynomial::from_real(ascending);
}

const Polynomial& s_poly() {
  static const Polynomial s = real_poly({0.0, 1.0});
  return s;
}

struct Blocks {
  double g;
  double w;
  ReservoirPolynomials rp;
  Polynomial p_dd;
  Polynomial p_ee;
  Polynomial p_ff;
  Polynomial g_plus_s;        // Gamma + s
  Polynomial super_radiant;   // 8 Omega^2 + (Gamma + s)(Gamma + 2 s)
};

Blocks make_blocks(const ReservoirParams& params) {
  const double g = params.scaled_gamma();
  const double w = params.scaled_omega();
  const double g2 = g * g, g3 = g2 * g, g4 = g3 * g, g5 = g4 * g;
  const double w2 = w * w, w4 = w2 * w2;
  Blocks b{g, w, reservoir_polynomials(g, w), {}, {}, {}, {}, {}};
  b.p_dd = real_poly({6 * g5 - 40 * g3 * w2 + 448 * g * w4, 31 * g4 - 100 * g2 * w2 + 480 * w4,
                      60 * g3 - 68 * g * w2, 55 * g2 - 8 * w2, 24 * g, 4});
  b.p_ee = real_poly({6 * g3 + 8 * g * w2, 13 * g2 + 12 * w2, 9 * g, 2});
  b.p_ff = real_poly({6 * g5 + 152 * g3 * w2 + 320 * g * w4, 31 * g4 + 412 * g2 * w2 + 288 * w4,
                      60 * g3 + 364 * g * w2, 55 * g2 + 104 * w2, 24 * g, 4});
  b.g_plus_s = real_poly({g, 1});
  b.super_radiant = real_poly({8 * w2 + g2, 3 * g, 2});
  return b;
}

RationalLaplace zero_transform() { return RationalLaplace(Polynomial(), real_poly({1.0})); }

std::size_t index(Label label) { return static_cast<std::size_t>(label); }

}  // namespace

ReservoirPolynomials reservoir_polynomials(double gamma, double omega) {
  const double g = gamma, w = omega;
  const double g2 = g * g, w2 = w * w;
  ReservoirPolynomials rp;
  const Polynomial k1 = real_poly({16 * g * w2, 2 * g2 + 24 * w2, 3 * g, 1});
  const Polynomial k2 = real_poly({3 * g2 * g + 28 * g * w2, 11 * g2 + 24 * w2, 12 * g, 4});
  rp.k = k1 * k2;
  rp.j = real_poly({g, 2}) * real_poly({8 * w2, g, 1});
  rp.l = real_poly({6 * g2 * g + 56 * g * w2, 31 * g2 + 60 * w2, 45 * g, 20});
  return rp;
}

ReservoirPolynomials reservoir_polynomials(const ReservoirParams& params) {
  return reservoir_polynomials(params.gamma(), params.omega());
}

std::string_view label_name(Label label) noexcept {
  static constexpr std::array<std::string_view, kLabelCount> names = {
      "aa", "bb", "cc", "dd", "ee", "ff", "pp", "mm", "pm", "mp", "af"};
  return names[static_cast<std::size_t>(label)];
}

PseudomodeSolution::PseudomodeSolution(std::array<RationalLaplace, kLabelCount> transforms)
    : transforms_(std::move(transforms)) {
  for (std::size_t i = 0; i < kLabelCount; ++i) signals_[i] = laplace::partial_fractions(transforms_[i]);
}

const RationalLaplace& PseudomodeSolution::transform(Label label) const noexcept {
  return transforms_[index(label)];
}

const ExponentialSum& PseudomodeSolution::signal(Label label) const noexcept {
  return signals_[index(label)];
}

cplx PseudomodeSolution::value(Label label, double tau) const noexcept {
  return signals_[index(label)](tau);
}

PseudomodeSolution ewl_phi_solution(double r, double alpha2, double theta,
                                    const ReservoirParams& params) {
  validate(InitialStateSpec{EwlPhi{r, alpha2, theta}});
  const Blocks b = make_blocks(params);
  const auto& [k, j, l] = b.rp;
  const double g = b.g, w2 = b.w * b.w, w4 = w2 * w2;
  const double alpha = std::sqrt(alpha2);
  const double beta = std::sqrt(1.0 - alpha2);
  const double x = 1.0 + r + 4.0 * alpha * beta * r * unit_phase(theta).real();
  const double rm1 = r - 1.0;
  const Polynomial jk = j * k;

  std::array<RationalLaplace, kLabelCount> t;
  t[index(Label::aa)] = RationalLaplace(
      -1.0 * (rm1 * jk + (64 * g * g * w4 * rm1) * l - (8 * g * w2 * x) * k), 4.0 * (s_poly() * jk));
  t[index(Label::bb)] = RationalLaplace((2 * w2) * (x * k - (8 * g * w2 * rm1) * l), jk);
  t[index(Label::cc)] = RationalLaplace((-48 * w4 * rm1) * b.g_plus_s, k);
  const Polynomial dd_num = (-8 * g * w2 * rm1) * b.p_dd + x * (b.super_radiant * k);
  const Polynomial ee_num = (-2 * w2 * rm1) * b.p_ee;
  t[index(Label::dd)] = RationalLaplace(dd_num, 4.0 * jk);
  t[index(Label::ee)] = RationalLaplace(ee_num, k);
  t[index(Label::ff)] = RationalLaplace(-rm1 * b.p_ff, 4.0 * k);
  t[index(Label::pp)] = RationalLaplace(dd_num + 4.0 * (j * ee_num), 4.0 * jk);
  t[index(Label::mm)] =
      RationalLaplace::constant(r * (1.0 - 2.0 * alpha * beta * unit_phase(theta).real()) / 2.0 + (1.0 - r) / 4.0);
  // Imaginary part taken with -sin(theta) so that the coherence matches the
  // e^{+i theta} phase of z(0).
  const cplx coherence = r * cplx(-1.0 + 2.0 * alpha2, -2.0 * alpha * beta * unit_phase(theta).imag());
  t[index(Label::pm)] = RationalLaplace(coherence * real_poly({g, 2}), real_poly({8 * w2, 2 * g, 4}));
  t[index(Label::mp)] = t[index(Label::pm)].conj();
  t[index(Label::af)] = zero_transform();
  return PseudomodeSolution(std::move(t));
}

PseudomodeSolution ewl_psi_solution(double r, double alpha2, double theta,
                                    const ReservoirParams& params, const Corrections& corrections) {
  validate(InitialStateSpec{EwlPsi{r, alpha2, theta}});
  const Blocks b = make_blocks(params);
  const auto& [k, j, l] = b.rp;
  const double g = b.g, w2 = b.w * b.w, w4 = w2 * w2;
  const double alpha = std::sqrt(alpha2);
  const double beta = std::sqrt(1.0 - alpha2);
  const double y = -1.0 + (-3.0 + 4.0 * alpha2) * r;
  const double alp = corrections.psi_alp_as_alpha_squared ? alpha2 : alpha;
  const double y_alp = -1.0 + (-3.0 + 4.0 * alp) * r;
  const double rm1 = r - 1.0;
  const Polynomial jk = j * k;

  std::array<RationalLaplace, kLabelCount> t;
  t[index(Label::aa)] = RationalLaplace(
      -1.0 * ((-1.0 + r - 4.0 * alpha2 * r) * jk + (8 * g * w2 * rm1) * k + (64 * g * g * w4 * y_alp) * l),
      4.0 * (s_poly() * jk));
  t[index(Label::bb)] = RationalLaplace((2 * w2) * (-rm1 * k - (8 * g * w2 * y) * l), jk);
  t[index(Label::cc)] = RationalLaplace((-48 * w4 * y) * b.g_plus_s, k);
  const Polynomial dd_num = -1.0 * (rm1 * (b.super_radiant * k) + (8 * g * w2 * y) * b.p_dd);
  const Polynomial ee_num = (-2 * w2 * y) * b.p_ee;
  t[index(Label::dd)] = RationalLaplace(dd_num, 4.0 * jk);
  t[index(Label::ee)] = RationalLaplace(ee_num, k);
  t[index(Label::ff)] = RationalLaplace(-y * b.p_ff, 4.0 * k);
  t[index(Label::pp)] = RationalLaplace(dd_num + 4.0 * (j * ee_num), 4.0 * jk);
  t[index(Label::mm)] = corrections.psi_subradiant_population
                            ? RationalLaplace::constant((1.0 - r) / 4.0)
                            : zero_transform();
  t[index(Label::pm)] = zero_transform();
  t[index(Label::mp)] = zero_transform();
  const Polynomial af_den = corrections.psi_af_denominator
                                ? real_poly({4 * g * w2, g * g + 12 * w2, 3 * g, 2})
                                : real_poly({4 * g * w2 + 12 * w2, g * g, 3 * g, 2});
  const cplx phase = corrections.psi_af_phase ? unit_phase(theta) : cplx(1.0);
  t[index(Label::af)] = RationalLaplace((alpha * beta * r) * phase * b.super_radiant, af_den);
  return PseudomodeSolution(std::move(t));
}

XState reconstruct_from_values_unchecked(const std::array<cplx, kLabelCount>& v) noexcept {
  auto at = [&](Label label) { return v[index(label)]; };
  const cplx pp = at(Label::pp), mm = at(Label::mm), pm = at(Label::pm), mp = at(Label::mp);
  XState s;
  s.a = (at(Label::aa) + at(Label::bb) + at(Label::cc)).real();
  s.b = (0.5 * (pp + mm + pm + mp)).real();
  s.c = (0.5 * (pp + mm - pm - mp)).real();
  s.d = at(Label::ff).real();
  s.w = at(Label::af);
  s.z = 0.5 * (pp - mm - pm + mp);
  return s;
}

XState reconstruct_from_values(const std::array<cplx, kLabelCount>& v) {
  const XState s = reconstruct_from_values_unchecked(v);
  const double deviation = s.trace() - 1.0;
  if (!(std::abs(deviation) <= kTraceTolerance)) {
    throw ConsistencyError(fmt::format("reconstructed trace deviates from 1 by {:.3g}", deviation));
  }
  return s;
}

XState reconstruct_unchecked(const PseudomodeSolution& sol, double tau) noexcept {
  std::array<cplx, kLabelCount> v;
  for (auto label : kAllLabels) v[index(label)] = sol.value(label, tau);
  return reconstruct_from_values_unchecked(v);
}

XState reconstruct(const PseudomodeSolution& sol, double tau) {
  if (!(tau >= 0.0)) throw DomainError("t", "time must be non-negative");
  std::array<cplx, kLabelCount> v;
  for (auto label : kAllLabels) v[index(label)] = sol.value(label, tau);
  return reconstruct_from_values(v);
}

}  // namespace xdyn::solutions

#pragma once

// Laplace-domain solutions of the pseudomode model for the extended
// Werner-like initial states. All transforms use the scaled Laplace variable
// s / gamma0, so their inverses are functions of the scaled time gamma0 t.

#include "xdyn/core/model.hpp"
#include "xdyn/laplace/rational.hpp"

#include <array>
#include <string_view>

namespace xdyn::solutions {

using laplace::ExponentialSum;
using laplace::Polynomial;
using laplace::RationalLaplace;

struct ReservoirPolynomials {
  Polynomial k;  // degree 6
  Polynomial j;  // degree 3
  Polynomial l;  // degree 3
};

// Expansion for explicit (gamma, omega) values.
ReservoirPolynomials reservoir_polynomials(double gamma, double omega);
ReservoirPolynomials reservoir_polynomials(const ReservoirParams& params);

// Entries of the solution: a/b/c are both qubits down with 0/1/2 pseudomode
// quanta, d/e the super-radiant state with 0/1 quanta, f both qubits up;
// m is the sub-radiant state, p the super-radiant one.
enum class Label { aa, bb, cc, dd, ee, ff, pp, mm, pm, mp, af };
inline constexpr std::size_t kLabelCount = 11;
inline constexpr std::array<Label, kLabelCount> kAllLabels = {
    Label::aa, Label::bb, Label::cc, Label::dd, Label::ee, Label::ff,
    Label::pp, Label::mm, Label::pm, Label::mp, Label::af};

std::string_view label_name(Label label) noexcept;

// Fixes applied to the printed Psi-family expressions. Disabling them
// reproduces the formulas exactly as printed.
struct Corrections {
  bool psi_subradiant_population = true;  // rho_mm = (1-r)/4 instead of 0
  bool psi_af_denominator = true;         // 12 Omega^2 s instead of 12 Omega^2
  bool psi_alp_as_alpha_squared = true;   // "alp" read as alpha^2
  bool psi_af_phase = true;               // rho_af carries e^{i theta}

  static Corrections none() noexcept { return {false, false, false, false}; }
  friend bool operator==(const Corrections&, const Corrections&) = default;
};

class PseudomodeSolution {
 public:
  explicit PseudomodeSolution(std::array<RationalLaplace, kLabelCount> transforms);

  const RationalLaplace& transform(Label label) const noexcept;
  const ExponentialSum& signal(Label label) const noexcept;
  cplx value(Label label, double tau) const noexcept;

 private:
  std::array<RationalLaplace, kLabelCount> transforms_;
  std::array<ExponentialSum, kLabelCount> signals_;
};

PseudomodeSolution ewl_phi_solution(double r, double alpha2, double theta,
                                    const ReservoirParams& params);
PseudomodeSolution ewl_psi_solution(double r, double alpha2, double theta,
                                    const ReservoirParams& params,
                                    const Corrections& corrections = {});

// Applies the reconstruction map to entry values; throws ConsistencyError when
// the trace deviates from 1 by more than 1e-6.
XState reconstruct_from_values(const std::array<cplx, kLabelCount>& v);
XState reconstruct_from_values_unchecked(const std::array<cplx, kLabelCount>& v) noexcept;

// State at scaled time tau >= 0.
XState reconstruct(const PseudomodeSolution& sol, double tau);
XState reconstruct_unchecked(const PseudomodeSolution& sol, double tau) noexcept;

}  // namespace xdyn::solutions

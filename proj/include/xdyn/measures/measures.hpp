#pragma once

#include "xdyn/core/model.hpp"

namespace xdyn::measures {

// max{0, 2|w| - 2 sqrt(bc), 2|z| - 2 sqrt(ad)}, clamped to [0, 1].
double concurrence_x(const XState& s) noexcept;

// max{C1, C2} without the clamp at zero. Negative values measure how deep a
// state sits inside the separable region; used to bracket dark periods.
double concurrence_x_signed(const XState& s) noexcept;

// Wootters concurrence from the spectrum of rho (sy x sy) rho* (sy x sy).
// Throws DomainError for inputs that are not valid density matrices.
double concurrence_wootters(const DensityMatrix4& rho);

// 2|z| for states with at most one excitation; throws DomainError naming d or w
// when they are not zero within 1e-10.
double concurrence_single_excitation(const XState& s);

// Von Neumann entropy in nats. Throws DomainError for eigenvalues below -1e-8.
double entropy(const XState& s);
double entropy(const DensityMatrix4& rho);

enum class BellFamily { psi, phi };

// Closed-form entropies of the Bell-like evolutions. The phi form includes the
// (rho_pp + rho_mm) ln 2 term needed to agree with the eigenvalue formula.
// Throws DomainError when the state does not have the family's structure.
double entropy_closed_form(const XState& s, BellFamily family);

struct MeasureSample {
  double concurrence = 0.0;
  double entropy = 0.0;
  double rho_pp = 0.0;
  double rho_mm = 0.0;
  double abs_rho_pm = 0.0;
};

MeasureSample measure(const XState& s);

}  // namespace xdyn::measures

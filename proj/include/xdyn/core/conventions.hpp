#pragma once

// Fixed conventions shared by every module.

namespace xdyn {

// Sign of Im z inside the super/sub-radiant coherence:
//   rho_pm = (b - c)/2 + i * kRadiantCoherenceSign * Im z  ==  <+|rho|->.
// -1 is the only choice for which the inverse map
//   b = (pp + mm + pm + mp)/2,  c = (pp + mm - pm - mp)/2,  z = (pp - mm - pm + mp)/2
// recovers (b, c, z).
inline constexpr double kRadiantCoherenceSign = -1.0;

// Absolute tolerance for state invariants (trace, block positivity).
inline constexpr double kStateTolerance = 1e-10;

// Hermiticity tolerance for dense density matrices.
inline constexpr double kHermitianTolerance = 1e-12;

}  // namespace xdyn

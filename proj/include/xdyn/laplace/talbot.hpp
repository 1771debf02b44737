#pragma once

#include "xdyn/laplace/rational.hpp"

namespace xdyn::laplace {

struct TalbotOptions {
  // Lower bound on the node count; raised automatically for oscillatory or
  // growing transforms. Round-off grows like exp(0.17 N), so larger counts are
  // refused with a DomainError.
  int min_nodes = 64;
  int max_nodes = 192;
};

// Numerical inverse Laplace transform on the Weideman-Trefethen cotangent
// contour. Throws DomainError for t <= 0.
cplx talbot_invert_complex(const RationalLaplace& f, double t, const TalbotOptions& opt = {});

// Real part; throws ConjugatePairingError when |Im| > 1e-6.
double talbot_invert(const RationalLaplace& f, double t, const TalbotOptions& opt = {});

}  // namespace xdyn::laplace

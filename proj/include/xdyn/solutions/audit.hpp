#pragma once

// Formula audits over the closed-form solutions: initial values, trace,
// sub-radiant invariance, final values and agreement of the two inverters.

#include "xdyn/solutions/pseudomode.hpp"

#include <functional>
#include <string>
#include <vector>

namespace xdyn::audit {

using solutions::Corrections;
using solutions::Label;

struct Check {
  std::string name;
  bool pass = false;
  double value = 0.0;      // worst observed deviation
  double tolerance = 0.0;
  std::string detail;
};

enum class Family { phi, psi };
std::string family_name(Family f);

struct Grid {
  std::vector<double> r{0.0, 0.25, 0.5, 0.75, 1.0};
  std::vector<double> alpha2{0.0, 0.25, 0.5, 0.75, 1.0};
  std::vector<double> theta{0.0, 1.5707963267948966, 3.141592653589793, 4.71238898038469};
};

solutions::PseudomodeSolution solution_for(Family f, double r, double alpha2, double theta,
                                           const ReservoirParams& params, const Corrections& corrections);

// Entry values at t = 0 implied by an initial X-state with the pseudomode in
// its ground state.
std::array<cplx, solutions::kLabelCount> expected_initial_entries(const XState& s);

// One check per family and entry, plus the reconstructed state per family.
std::vector<Check> initial_value_audit(const ReservoirParams& params, const Corrections& corrections,
                                       const Grid& grid = {}, double tol = 1e-8);

Check trace_audit(Family f, const ReservoirParams& params, const Corrections& corrections,
                  const std::vector<double>& times, const Grid& grid = {}, double tol = 1e-8);

Check subradiant_audit(Family f, const ReservoirParams& params, const Corrections& corrections,
                       const std::vector<double>& times, const Grid& grid = {}, double tol = 1e-9);

// Final-value theorem against the inverted signal once every decaying mode
// has fallen below e^-40.
Check final_value_audit(Family f, const ReservoirParams& params, const Corrections& corrections,
                        const Grid& grid = {}, double tol = 1e-9);

// Partial fractions vs Talbot. The error is taken relative to
// max(|f(t)|, floor * max_t |f(t)|) so that zeros and decayed tails do not
// turn round-off into a failure.
Check dual_inversion_audit(const ReservoirParams& params, const Corrections& corrections,
                           const std::vector<double>& times, const Grid& grid, double tol = 1e-6,
                           double floor = 1e-3);

// 50 log-spaced samples in [0.01, 20].
std::vector<double> dual_inversion_times();

// Stationary concurrence of EwlPhi{r, 1/2, pi} against (1 + 3r)/4 and of
// BellPsi{1/2} against 0.
std::vector<Check> stationary_audit(const ReservoirParams& params, double tol = 1e-6);

// Standard transform pairs through both inverters.
std::vector<Check> transform_corpus(double omega = 1.0, double tol = 1e-8);

}  // namespace xdyn::audit

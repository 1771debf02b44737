#include "xdyn/solutions/audit.hpp"

#include "xdyn/errors.hpp"
#include "xdyn/laplace/talbot.hpp"
#include "xdyn/measures/measures.hpp"
#include "xdyn/solutions/evolution.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <cmath>
#include <limits>

namespace xdyn::audit {

namespace {

using solutions::kAllLabels;
using solutions::kLabelCount;
using solutions::label_name;

std::size_t index(Label l) { return static_cast<std::size_t>(l); }

template <class F>
void for_grid(const Grid& grid, F&& f) {
  for (double r : grid.r)
    for (double a2 : grid.alpha2)
      for (double th : grid.theta) f(r, a2, th);
}

XState initial_for(Family f, double r, double a2, double th) {
  return f == Family::phi ? construct_initial(EwlPhi{r, a2, th}) : construct_initial(EwlPsi{r, a2, th});
}

std::string point(double r, double a2, double th) { return fmt::format("r={} alpha2={} theta={:.4f}", r, a2, th); }

}  // namespace

std::string family_name(Family f) { return f == Family::phi ? "ewl-phi" : "ewl-psi"; }

solutions::PseudomodeSolution solution_for(Family f, double r, double alpha2, double theta,
                                           const ReservoirParams& params, const Corrections& corrections) {
  return f == Family::phi ? solutions::ewl_phi_solution(r, alpha2, theta, params)
                          : solutions::ewl_psi_solution(r, alpha2, theta, params, corrections);
}

std::array<cplx, kLabelCount> expected_initial_entries(const XState& s) {
  std::array<cplx, kLabelCount> v{};
  const double half = 0.5 * (s.b + s.c);
  const cplx pm(0.5 * (s.b - s.c), -s.z.imag());
  v[index(Label::aa)] = s.a;
  v[index(Label::dd)] = half + s.z.real();
  v[index(Label::ff)] = s.d;
  v[index(Label::pp)] = half + s.z.real();
  v[index(Label::mm)] = half - s.z.real();
  v[index(Label::pm)] = pm;
  v[index(Label::mp)] = std::conj(pm);
  v[index(Label::af)] = s.w;
  return v;
}

std::vector<Check> initial_value_audit(const ReservoirParams& params, const Corrections& corrections,
                                       const Grid& grid, double tol) {
  std::vector<Check> out;
  for (Family f : {Family::phi, Family::psi}) {
    std::array<double, kLabelCount> worst{};
    std::array<std::string, kLabelCount> where;
    double worst_state = 0.0;
    std::string state_where;
    for_grid(grid, [&](double r, double a2, double th) {
      const auto sol = solution_for(f, r, a2, th, params, corrections);
      const XState s0 = initial_for(f, r, a2, th);
      const auto expected = expected_initial_entries(s0);
      for (Label l : kAllLabels) {
        double residual;
        try {
          residual = std::abs(laplace::initial_value(sol.transform(l)) - expected[index(l)]);
        } catch (const Error&) {
          residual = std::numeric_limits<double>::infinity();
        }
        if (!(residual <= worst[index(l)])) {
          worst[index(l)] = residual;
          where[index(l)] = point(r, a2, th);
        }
      }
      const double d = max_abs_diff(solutions::reconstruct_unchecked(sol, 0.0), s0);
      if (d > worst_state) {
        worst_state = d;
        state_where = point(r, a2, th);
      }
    });
    for (Label l : kAllLabels) {
      const double w = worst[index(l)];
      out.push_back({fmt::format("initial value {} rho_{}", family_name(f), label_name(l)), w <= tol, w, tol,
                     w > 0.0 ? "worst at " + where[index(l)] : ""});
    }
    out.push_back({fmt::format("initial state {}", family_name(f)), worst_state <= tol, worst_state, tol,
                   worst_state > 0.0 ? "worst at " + state_where : ""});
  }
  return out;
}

Check trace_audit(Family f, const ReservoirParams& params, const Corrections& corrections,
                  const std::vector<double>& times, const Grid& grid, double tol) {
  double worst = 0.0;
  std::string where;
  bool deficit_matches = true;
  bool any_deficit = false;
  for_grid(grid, [&](double r, double a2, double th) {
    const auto sol = solution_for(f, r, a2, th, params, corrections);
    for (double t : times) {
      const double dev = std::abs(solutions::reconstruct_unchecked(sol, t).trace() - 1.0);
      if (dev > worst) {
        worst = dev;
        where = fmt::format("{} t={}", point(r, a2, th), t);
      }
    }
    const double deficit = 1.0 - solutions::reconstruct_unchecked(sol, 0.0).trace();
    if (std::abs(deficit) > tol) any_deficit = true;
    if (std::abs(deficit - (1.0 - r) / 4.0) > 1e-9) deficit_matches = false;
  });
  Check c{fmt::format("trace {}", family_name(f)), worst <= tol, worst, tol, ""};
  if (worst > 0.0) c.detail = "worst at " + where;
  if (any_deficit && deficit_matches) c.detail += "; t=0 deficit equals (1-r)/4 at every grid point";
  return c;
}

Check subradiant_audit(Family f, const ReservoirParams& params, const Corrections& corrections,
                       const std::vector<double>& times, const Grid& grid, double tol) {
  double worst = 0.0;
  double worst_formula = 0.0;
  std::string where;
  for_grid(grid, [&](double r, double a2, double th) {
    const auto sol = solution_for(f, r, a2, th, params, corrections);
    const double mm0 = radiant_coords(solutions::reconstruct_unchecked(sol, 0.0)).rho_mm;
    for (double t : times) {
      const double dev = std::abs(radiant_coords(solutions::reconstruct_unchecked(sol, t)).rho_mm - mm0);
      if (dev > worst) {
        worst = dev;
        where = fmt::format("{} t={}", point(r, a2, th), t);
      }
    }
    if (f == Family::phi) {
      const double closed =
          r * (1.0 - 2.0 * std::sqrt(a2 * (1.0 - a2)) * std::cos(th)) / 2.0 + (1.0 - r) / 4.0;
      worst_formula = std::max(worst_formula, std::abs(mm0 - closed));
    }
  });
  Check c{fmt::format("sub-radiant invariance {}", family_name(f)), worst <= tol && worst_formula <= 1e-14,
          std::max(worst, worst_formula), tol, ""};
  if (worst > 0.0) c.detail = "worst at " + where;
  if (f == Family::phi) c.detail += fmt::format("; closed-form constant residual {:.3g}", worst_formula);
  return c;
}

Check final_value_audit(Family f, const ReservoirParams& params, const Corrections& corrections,
                        const Grid& grid, double tol) {
  double worst = 0.0;
  std::string where;
  std::string unstable;
  for_grid(grid, [&](double r, double a2, double th) {
    const auto sol = solution_for(f, r, a2, th, params, corrections);
    for (Label l : kAllLabels) {
      const auto& sig = sol.signal(l);
      double slowest = std::numeric_limits<double>::infinity();
      for (const auto& term : sig.terms)
        if (term.pole.real() < -1e-12) slowest = std::min(slowest, -term.pole.real());
      const double late = std::isfinite(slowest) ? 60.0 / slowest : 1.0;
      try {
        const double dev = std::abs(laplace::final_value(sol.transform(l)) - sig(late));
        if (dev > worst) {
          worst = dev;
          where = fmt::format("{} rho_{}", point(r, a2, th), label_name(l));
        }
      } catch (const StabilityError&) {
        if (unstable.empty()) unstable = fmt::format("rho_{} has no finite limit at {}", label_name(l), point(r, a2, th));
      }
    }
  });
  Check c{fmt::format("final value {}", family_name(f)), unstable.empty() && worst <= tol, worst, tol, ""};
  if (!unstable.empty())
    c.detail = unstable;
  else if (worst > 0.0)
    c.detail = "worst at " + where;
  return c;
}

std::vector<double> dual_inversion_times() {
  std::vector<double> t(50);
  for (int i = 0; i < 50; ++i) t[static_cast<std::size_t>(i)] = 0.01 * std::pow(2000.0, i / 49.0);
  return t;
}

Check dual_inversion_audit(const ReservoirParams& params, const Corrections& corrections,
                           const std::vector<double>& times, const Grid& grid, double tol, double floor) {
  double worst = 0.0;
  std::string where;
  for (Family f : {Family::phi, Family::psi}) {
    for_grid(grid, [&](double r, double a2, double th) {
      const auto sol = solution_for(f, r, a2, th, params, corrections);
      for (Label l : kAllLabels) {
        if (sol.transform(l).is_zero()) continue;
        const auto& sig = sol.signal(l);
        double peak = 0.0;
        for (double t : times) peak = std::max(peak, std::abs(sig(t)));
        for (double t : times) {
          const cplx pf = sig(t);
          const cplx tb = laplace::talbot_invert_complex(sol.transform(l), t);
          const double rel = std::abs(pf - tb) / std::max({std::abs(pf), floor * peak, 1e-300});
          if (rel > worst) {
            worst = rel;
            where = fmt::format("{} {} rho_{} t={:.4g}", family_name(f), point(r, a2, th), label_name(l), t);
          }
        }
      }
    });
  }
  return {fmt::format("dual inversion Omega/Gamma={}", params.omega() / params.gamma()), worst <= tol, worst, tol,
          worst > 0.0 ? "worst at " + where : ""};
}

std::vector<Check> stationary_audit(const ReservoirParams& params, double tol) {
  std::vector<Check> out;
  for (double r : {0.4, 0.7, 1.0}) {
    const XState s = solutions::stationary_state(EwlPhi{r, 0.5, kPi}, params);
    const double c = measures::concurrence_x(s);
    const double dev = std::abs(c - (1.0 + 3.0 * r) / 4.0);
    out.push_back({fmt::format("stationary concurrence ewl-phi r={} theta=pi", r), dev <= tol, dev, tol,
                   fmt::format("C = {:.12g}, (1+3r)/4 = {:.12g}", c, (1.0 + 3.0 * r) / 4.0)});
  }
  const double c = measures::concurrence_x(solutions::stationary_state(BellPsi{0.5, 0.0}, params));
  out.push_back({"stationary concurrence bell-psi alpha2=1/2", c <= tol, c, tol, fmt::format("C = {:.3g}", c)});
  return out;
}

std::vector<Check> transform_corpus(double omega, double tol) {
  using laplace::Polynomial;
  using laplace::RationalLaplace;
  struct Pair {
    std::string name;
    RationalLaplace f;
    std::function<double(double)> exact;
  };
  const double w = std::sqrt(2.0) * omega;
  const std::vector<Pair> pairs = {
      {"1/(s+1)", RationalLaplace(Polynomial{1.0}, Polynomial{1.0, 1.0}), [](double t) { return std::exp(-t); }},
      {"1/(s(s+1))", RationalLaplace(Polynomial{1.0}, Polynomial{0.0, 1.0, 1.0}),
       [](double t) { return 1.0 - std::exp(-t); }},
      {"1/(s+1)^2", RationalLaplace(Polynomial{1.0}, Polynomial{1.0, 2.0, 1.0}),
       [](double t) { return t * std::exp(-t); }},
      {"s/(s^2+2 Omega^2)", RationalLaplace(Polynomial{0.0, 1.0}, Polynomial{2.0 * omega * omega, 0.0, 1.0}),
       [w](double t) { return std::cos(w * t); }},
  };
  std::vector<Check> out;
  for (const auto& p : pairs) {
    const auto sum = laplace::partial_fractions(p.f);
    double worst = 0.0;
    for (double t : {0.1, 0.5, 1.0, 2.0, 5.0, 10.0}) {
      const double exact = p.exact(t);
      worst = std::max(worst, std::abs(laplace::eval_exp_sum(sum, t) - exact));
      worst = std::max(worst, std::abs(laplace::talbot_invert(p.f, t) - exact));
    }
    out.push_back({"transform pair " + p.name, worst <= tol, worst, tol, "partial fractions and Talbot"});
  }
  return out;
}

}  // namespace xdyn::audit

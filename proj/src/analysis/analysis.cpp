#include "xdyn/analysis/analysis.hpp"

#include "xdyn/errors.hpp"
#include "xdyn/measures/measures.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <limits>
#include <thread>

namespace xdyn::analysis {

namespace {

constexpr double kInvGolden = 0.6180339887498949;
constexpr double kSingleExcitationTol = 1e-10;

struct Minimum {
  double time;
  double value;
};

template <class F>
Minimum golden_minimum(F&& f, double lo, double hi, double tol) {
  double x1 = hi - kInvGolden * (hi - lo);
  double x2 = lo + kInvGolden * (hi - lo);
  double f1 = f(x1);
  double f2 = f(x2);
  while (hi - lo > tol) {
    if (f1 <= f2) {
      hi = x2;
      x2 = x1;
      f2 = f1;
      x1 = hi - kInvGolden * (hi - lo);
      f1 = f(x1);
    } else {
      lo = x1;
      x1 = x2;
      f1 = f2;
      x2 = lo + kInvGolden * (hi - lo);
      f2 = f(x2);
    }
  }
  return f1 <= f2 ? Minimum{x1, f1} : Minimum{x2, f2};
}

// Crossing of inside(t) between a point where it is false and one where it is true.
template <class P>
double bisect(P&& inside, double out, double in, double tol) {
  while (std::abs(in - out) > tol) {
    const double mid = 0.5 * (in + out);
    if (inside(mid)) {
      in = mid;
    } else {
      out = mid;
    }
  }
  return 0.5 * (in + out);
}

struct Candidate {
  double start;
  double end;
  Minimum deepest;
  bool open_start;
  bool open_end;
};

const solutions::Evolution& evaluator(const Trajectory& traj) {
  if (!traj.evolution) throw DomainError("trajectory", "no evaluator attached");
  if (traj.times.size() < 2 || traj.times.size() != traj.states.size()) {
    throw DomainError("trajectory", "needs at least two samples with matching states");
  }
  return *traj.evolution;
}

std::vector<Candidate> dark_candidates(const Trajectory& traj, const EventOptions& opt) {
  const auto& ev = evaluator(traj);
  const auto& t = traj.times;
  const std::size_t n = t.size();
  auto cs = [&](double tau) { return measures::concurrence_x_signed(ev.state_at(tau)); };
  auto dark = [&](double tau) { return cs(tau) <= opt.zero_tol; };

  std::vector<double> c(n);
  for (std::size_t i = 0; i < n; ++i) c[i] = measures::concurrence_x_signed(traj.states[i]);
  for (std::size_t i = 0; i + 1 < n; ++i) {
    const double jump = std::abs(std::clamp(c[i + 1], 0.0, 1.0) - std::clamp(c[i], 0.0, 1.0));
    if (jump >= opt.max_sample_change) {
      throw ResolutionError(fmt::format("concurrence changes by {:.3g} between t = {} and t = {}; refine the grid",
                                        jump, t[i], t[i + 1]));
    }
  }

  std::vector<Candidate> out;
  std::size_t i = 0;
  while (i < n) {
    if (c[i] <= opt.zero_tol) {
      std::size_t j = i;
      while (j + 1 < n && c[j + 1] <= opt.zero_tol) ++j;
      Candidate cand;
      cand.open_start = i == 0;
      cand.open_end = j == n - 1;
      cand.start = cand.open_start ? t[0] : bisect(dark, t[i - 1], t[i], opt.time_tol);
      cand.end = cand.open_end ? t[n - 1] : bisect(dark, t[j + 1], t[j], opt.time_tol);
      cand.deepest = {t[i], c[i]};
      for (std::size_t k = i; k <= j; ++k)
        if (c[k] < cand.deepest.value) cand.deepest = {t[k], c[k]};
      if (cand.end > cand.start) {
        const Minimum m = golden_minimum(cs, cand.start, cand.end, 0.1 * opt.time_tol);
        if (m.value < cand.deepest.value) cand.deepest = m;
      }
      out.push_back(cand);
      i = j + 1;
    } else if (i > 0 && i + 1 < n && c[i] <= c[i - 1] && c[i] <= c[i + 1]) {
      // A zero can hide between samples around a sampled local minimum.
      const Minimum m = golden_minimum(cs, t[i - 1], t[i + 1], 0.1 * opt.time_tol);
      if (m.value <= opt.zero_tol) {
        out.push_back({bisect(dark, t[i - 1], m.time, opt.time_tol), bisect(dark, t[i + 1], m.time, opt.time_tol), m,
                       false, false});
      }
      ++i;
    } else {
      ++i;
    }
  }

  std::vector<Candidate> merged;
  for (const auto& cand : out) {
    if (!merged.empty() && cand.start <= merged.back().end) {
      auto& last = merged.back();
      last.end = std::max(last.end, cand.end);
      last.open_end = last.open_end || cand.open_end;
      if (cand.deepest.value < last.deepest.value) last.deepest = cand.deepest;
    } else {
      merged.push_back(cand);
    }
  }
  return merged;
}

bool is_isolated(const Candidate& c, double zero_tol) { return c.deepest.value > -zero_tol; }

}  // namespace

std::vector<Interval> EntanglementEvents::finite_dark_periods() const {
  std::vector<Interval> out;
  for (const auto& p : dark_periods)
    if (!p.degenerate()) out.push_back(p);
  return out;
}

EntanglementEvents detect_events(const Trajectory& traj, const EventOptions& options) {
  const auto candidates = dark_candidates(traj, options);
  EntanglementEvents events;
  for (std::size_t k = 0; k < candidates.size(); ++k) {
    const auto& c = candidates[k];
    if (is_isolated(c, options.zero_tol)) {
      events.dark_periods.push_back({c.deepest.time, c.deepest.time});
      continue;
    }
    events.dark_periods.push_back({c.start, c.end});
    if (c.open_end) continue;
    if (c.open_start) {
      if (k == 0) events.birth_time = c.end;
    } else {
      ++events.revivals;
    }
  }
  events.stationary_concurrence = measures::concurrence_x(traj.evolution->stationary());
  return events;
}

double stationary_concurrence(const InitialStateSpec& spec, const ReservoirParams& params,
                              const solutions::Corrections& corrections) {
  return measures::concurrence_x(solutions::Evolution(spec, params, corrections).stationary());
}

std::vector<Extremum> local_extrema(const std::vector<double>& times, const std::vector<double>& values,
                                    double noise_floor) {
  if (times.size() != values.size()) throw DomainError("series", "times and values differ in length");
  std::vector<Extremum> out;
  const std::size_t n = values.size();
  for (std::size_t i = 1; i + 1 < n; ++i) {
    const double left = values[i] - values[i - 1];
    const double right = values[i] - values[i + 1];
    const bool maximum = left > noise_floor && right >= -noise_floor;
    const bool minimum = left < -noise_floor && right <= noise_floor;
    if (!maximum && !minimum) continue;
    const double x0 = times[i - 1], x1 = times[i], x2 = times[i + 1];
    const double f0 = values[i - 1], f1 = values[i], f2 = values[i + 1];
    const double num = (x1 - x0) * (x1 - x0) * (f1 - f2) - (x1 - x2) * (x1 - x2) * (f1 - f0);
    const double den = (x1 - x0) * (f1 - f2) - (x1 - x2) * (f1 - f0);
    double x = x1;
    if (den != 0.0) x = std::clamp(x1 - 0.5 * num / den, x0, x2);
    // Lagrange interpolation through the three samples.
    const double value = f0 * (x - x1) * (x - x2) / ((x0 - x1) * (x0 - x2)) +
                         f1 * (x - x0) * (x - x2) / ((x1 - x0) * (x1 - x2)) +
                         f2 * (x - x0) * (x - x1) / ((x2 - x0) * (x2 - x1));
    out.push_back({x, value, maximum, i});
  }
  return out;
}

double ExtremaReport::max_distance() const noexcept {
  double d = 0.0;
  for (const auto& m : matches) d = std::max(d, m.distance);
  return d;
}

ExtremaReport extrema_alignment(const std::vector<double>& times, const std::vector<double>& series_a,
                                const std::vector<double>& series_b, const AlignmentOptions& options) {
  if (times.empty() || series_a.empty() || series_b.empty()) {
    throw DomainError("series", "empty series");
  }
  if (series_a.size() != times.size() || series_b.size() != times.size()) {
    throw DomainError("series", "series must share the time grid");
  }
  ExtremaReport report;
  report.window = options.window;
  report.a = local_extrema(times, series_a, options.noise_floor);
  report.b = local_extrema(times, series_b, options.noise_floor);

  std::vector<ExtremaMatch> candidates;
  for (std::size_t i = 0; i < report.a.size(); ++i) {
    for (std::size_t j = 0; j < report.b.size(); ++j) {
      if (options.same_kind && report.a[i].maximum != report.b[j].maximum) continue;
      const double d = std::abs(report.a[i].time - report.b[j].time);
      if (d <= options.window) candidates.push_back({i, j, d});
    }
  }
  std::stable_sort(candidates.begin(), candidates.end(),
                   [](const ExtremaMatch& x, const ExtremaMatch& y) { return x.distance < y.distance; });
  std::vector<bool> used_a(report.a.size(), false), used_b(report.b.size(), false);
  for (const auto& c : candidates) {
    if (used_a[c.a] || used_b[c.b]) continue;
    used_a[c.a] = used_b[c.b] = true;
    report.matches.push_back(c);
  }
  std::sort(report.matches.begin(), report.matches.end(),
            [](const ExtremaMatch& x, const ExtremaMatch& y) { return x.a < y.a; });
  report.unmatched_a = report.a.size() - report.matches.size();
  report.unmatched_b = report.b.size() - report.matches.size();
  return report;
}

bool ZeroConditionReport::all_equal(double tol) const noexcept {
  return std::all_of(entries.begin(), entries.end(),
                     [tol](const ZeroConditionEntry& e) { return e.pp_minus_mm < tol && e.pp_minus_abs_pm < tol; });
}

ZeroConditionReport zero_condition_check(const Trajectory& traj, const EventOptions& options) {
  for (const auto& s : traj.states) {
    if (std::abs(s.d) > kSingleExcitationTol) throw DomainError("d", "trajectory is not single-excitation");
    if (std::abs(s.w) > kSingleExcitationTol) throw DomainError("w", "trajectory is not single-excitation");
  }
  const auto candidates = dark_candidates(traj, options);
  ZeroConditionReport report;
  for (const auto& c : candidates) {
    const XState s = traj.evolution->state_at(c.deepest.time);
    const RadiantCoords rc = radiant_coords(s);
    ZeroConditionEntry e;
    e.time = c.deepest.time;
    e.rho_pp = rc.rho_pp;
    e.rho_mm = rc.rho_mm;
    e.abs_rho_pm = std::abs(rc.rho_pm);
    e.pp_minus_mm = std::abs(rc.rho_pp - rc.rho_mm);
    e.pp_minus_abs_pm = std::abs(rc.rho_pp - e.abs_rho_pm);
    e.k = 2.0 * rc.rho_mm;
    if (s.b < 1e-4) {
      e.branch = ZeroBranch::excited_01;
    } else if (s.c < 1e-4) {
      e.branch = ZeroBranch::excited_10;
    }
    report.entries.push_back(e);
  }
  return report;
}

std::string axis_name(SweepAxis axis) {
  switch (axis) {
    case SweepAxis::r:
      return "r";
    case SweepAxis::alpha2:
      return "alpha2";
    case SweepAxis::theta:
      return "theta";
  }
  return "";
}

SweepAxis parse_axis(const std::string& name) {
  if (name == "r") return SweepAxis::r;
  if (name == "alpha2") return SweepAxis::alpha2;
  if (name == "theta") return SweepAxis::theta;
  throw DomainError("axis", fmt::format("unknown axis '{}'", name));
}

InitialStateSpec with_axis(const InitialStateSpec& spec, SweepAxis axis, double value) {
  InitialStateSpec out = spec;
  bool applied = false;
  auto set = [&](double& field) {
    field = value;
    applied = true;
  };
  std::visit(
      [&](auto& s) {
        if constexpr (requires { s.r; }) {
          if (axis == SweepAxis::r) set(s.r);
        }
        if constexpr (requires { s.alpha2; }) {
          if (axis == SweepAxis::alpha2) set(s.alpha2);
        }
        if constexpr (requires { s.theta; }) {
          if (axis == SweepAxis::theta) set(s.theta);
        }
      },
      out);
  if (!applied) {
    throw DomainError("axis", fmt::format("{} has no parameter '{}'", kind_name(spec), axis_name(axis)));
  }
  validate(out);
  return out;
}

SweepGrid sweep(const InitialStateSpec& spec_template, SweepAxis axis, const std::vector<double>& values,
                const ReservoirParams& params, const std::vector<double>& times,
                const solutions::Corrections& corrections, unsigned threads) {
  SweepGrid grid;
  grid.axis_name = axis_name(axis);
  grid.axis_values = values;
  grid.times = times;
  grid.params = params;
  grid.spec_template = spec_template;

  std::vector<InitialStateSpec> specs;
  specs.reserve(values.size());
  for (double v : values) specs.push_back(with_axis(spec_template, axis, v));

  grid.concurrence.assign(values.size(), std::vector<double>(times.size(), 0.0));
  std::vector<std::exception_ptr> errors(values.size());
  std::atomic<std::size_t> next{0};
  auto work = [&] {
    for (std::size_t row = next++; row < specs.size(); row = next++) {
      try {
        auto ev = std::make_shared<const solutions::Evolution>(specs[row], params, corrections);
        const auto traj = solutions::propagate(ev, times);
        for (std::size_t k = 0; k < times.size(); ++k) {
          grid.concurrence[row][k] = measures::concurrence_x(traj.states[k]);
        }
      } catch (...) {
        errors[row] = std::current_exception();
      }
    }
  };

  unsigned workers = threads == 0 ? std::max(1u, std::thread::hardware_concurrency()) : threads;
  workers = static_cast<unsigned>(std::min<std::size_t>(workers, std::max<std::size_t>(specs.size(), 1)));
  {
    std::vector<std::jthread> pool;
    for (unsigned w = 1; w < workers; ++w) pool.emplace_back(work);
    work();
  }
  for (const auto& e : errors)
    if (e) std::rethrow_exception(e);
  return grid;
}

}  // namespace xdyn::analysis

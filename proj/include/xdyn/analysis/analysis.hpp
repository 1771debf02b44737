#pragma once

#include "xdyn/solutions/evolution.hpp"

#include <optional>
#include <string>
#include <vector>

namespace xdyn::analysis {

using solutions::Trajectory;

struct Interval {
  double start = 0.0;
  double end = 0.0;

  // Isolated zeros are stored with start == end.
  bool degenerate() const noexcept { return end <= start; }
};

struct EntanglementEvents {
  // Closed intervals with concurrence <= zero_tol, increasing and disjoint.
  std::vector<Interval> dark_periods;
  // End of an initial finite dark period, if the trajectory starts separable.
  std::optional<double> birth_time;
  // Finite dark periods after t = 0 that end with positive concurrence.
  int revivals = 0;
  double stationary_concurrence = 0.0;

  std::vector<Interval> finite_dark_periods() const;
};

struct EventOptions {
  double zero_tol = 1e-6;
  double time_tol = 1e-7;
  // Largest concurrence jump tolerated between neighbouring samples.
  double max_sample_change = 0.05;
};

// Throws ResolutionError when the sampling is too coarse and DomainError when
// the trajectory has no evaluator attached.
EntanglementEvents detect_events(const Trajectory& traj, const EventOptions& options = {});

double stationary_concurrence(const InitialStateSpec& spec, const ReservoirParams& params,
                              const solutions::Corrections& corrections = {});

struct Extremum {
  double time = 0.0;
  double value = 0.0;
  bool maximum = false;
  std::size_t sample = 0;
};

// Interior local extrema by the three-point test, refined by a parabola
// through the neighbours. Changes below noise_floor do not count as slopes.
std::vector<Extremum> local_extrema(const std::vector<double>& times, const std::vector<double>& values,
                                    double noise_floor = 1e-12);

struct ExtremaMatch {
  std::size_t a = 0;
  std::size_t b = 0;
  double distance = 0.0;
};

struct ExtremaReport {
  std::vector<Extremum> a;
  std::vector<Extremum> b;
  std::vector<ExtremaMatch> matches;
  std::size_t unmatched_a = 0;
  std::size_t unmatched_b = 0;
  double window = 0.0;

  double max_distance() const noexcept;
};

struct AlignmentOptions {
  double window = 0.1;
  bool same_kind = true;
  double noise_floor = 1e-12;
};

// Greedy one-to-one matching, closest pairs first. Throws DomainError for
// empty or mismatched series.
ExtremaReport extrema_alignment(const std::vector<double>& times, const std::vector<double>& series_a,
                                const std::vector<double>& series_b, const AlignmentOptions& options = {});

enum class ZeroBranch { excited_01, excited_10, unclassified };

struct ZeroConditionEntry {
  double time = 0.0;
  double rho_pp = 0.0;
  double rho_mm = 0.0;
  double abs_rho_pm = 0.0;
  double pp_minus_mm = 0.0;      // |rho_pp - rho_mm|
  double pp_minus_abs_pm = 0.0;  // |rho_pp - |rho_pm||
  ZeroBranch branch = ZeroBranch::unclassified;
  double k = 0.0;  // 2 rho_mm
};

struct ZeroConditionReport {
  std::vector<ZeroConditionEntry> entries;

  bool all_equal(double tol = 1e-4) const noexcept;
};

// For single-excitation trajectories; throws DomainError naming d or w otherwise.
ZeroConditionReport zero_condition_check(const Trajectory& traj, const EventOptions& options = {});

enum class SweepAxis { r, alpha2, theta };

std::string axis_name(SweepAxis axis);
SweepAxis parse_axis(const std::string& name);

// Copy of the template with one field replaced; DomainError if the family has
// no such field.
InitialStateSpec with_axis(const InitialStateSpec& spec, SweepAxis axis, double value);

struct SweepGrid {
  std::string axis_name;
  std::vector<double> axis_values;
  std::vector<double> times;
  std::vector<std::vector<double>> concurrence;  // [axis index][time index]
  ReservoirParams params{1.0, 1.0};
  InitialStateSpec spec_template;
};

// One trajectory per axis value, computed on up to `threads` workers
// (0 = hardware concurrency). Output order does not depend on scheduling.
SweepGrid sweep(const InitialStateSpec& spec_template, SweepAxis axis, const std::vector<double>& values,
                const ReservoirParams& params, const std::vector<double>& times,
                const solutions::Corrections& corrections = {}, unsigned threads = 0);

}  // namespace xdyn::analysis

#pragma once

#include "xdyn/solutions/pseudomode.hpp"

#include <Eigen/Core>

#include <memory>
#include <vector>

namespace xdyn::solutions {

// Eight EWL solutions whose initial X-vectors span the X-state space, plus the
// inverse of their initial-condition matrix.
class PropagatorColumns {
 public:
  explicit PropagatorColumns(const ReservoirParams& params, const Corrections& corrections = {});

  static const std::array<InitialStateSpec, 8>& basis_specs();

  const std::vector<std::shared_ptr<const PseudomodeSolution>>& solutions() const noexcept {
    return solutions_;
  }
  const Eigen::Matrix<double, 8, 8>& initial_matrix() const noexcept { return initial_; }
  const Eigen::Matrix<double, 8, 8>& decomposition() const noexcept { return inverse_; }
  double condition_number() const noexcept { return condition_; }

  // Affine weights reproducing the given initial state; throws SpanError when
  // the residual exceeds 1e-8.
  std::array<double, 8> weights(const XState& initial) const;

 private:
  std::vector<std::shared_ptr<const PseudomodeSolution>> solutions_;
  Eigen::Matrix<double, 8, 8> initial_;
  Eigen::Matrix<double, 8, 8> inverse_;
  double condition_ = 0.0;
};

// Time evolution of one initial state: a weighted sum of pseudomode solutions.
// EWL-family specs use a single solution directly.
class Evolution {
 public:
  Evolution(const InitialStateSpec& spec, const ReservoirParams& params,
            const Corrections& corrections = {});

  const InitialStateSpec& spec() const noexcept { return spec_; }
  const ReservoirParams& params() const noexcept { return params_; }

  struct Component {
    double weight;
    std::shared_ptr<const PseudomodeSolution> solution;
  };
  const std::vector<Component>& components() const noexcept { return components_; }

  // Combined time signal of one entry.
  const ExponentialSum& signal(Label label) const noexcept;

  // State at scaled time tau = gamma0 t.
  XState state_at(double tau) const;

  // t -> infinity limit from the final-value theorem on every entry.
  XState stationary() const;

 private:
  InitialStateSpec spec_;
  ReservoirParams params_;
  std::vector<Component> components_;
  std::array<ExponentialSum, kLabelCount> signals_;
};

struct Trajectory {
  std::vector<double> times;  // scaled time gamma0 t
  std::vector<XState> states;
  ReservoirParams params{1.0, 1.0};
  InitialStateSpec spec;
  std::shared_ptr<const Evolution> evolution;
};

// Throws DomainError unless times are non-negative and strictly increasing.
Trajectory propagate(const InitialStateSpec& spec, const ReservoirParams& params,
                     const std::vector<double>& times);
Trajectory propagate(std::shared_ptr<const Evolution> evolution, const std::vector<double>& times);

XState stationary_state(const InitialStateSpec& spec, const ReservoirParams& params);

// n evenly spaced samples on [0, tmax].
std::vector<double> linear_times(double tmax, int n);

}  // namespace xdyn::solutions

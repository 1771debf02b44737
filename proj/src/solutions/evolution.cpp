#include "xdyn/solutions/evolution.hpp"

#include "xdyn/errors.hpp"

#include <Eigen/LU>
#include <Eigen/SVD>
#include <fmt/format.h>

#include <cmath>
#include <optional>

namespace xdyn::solutions {

namespace {

constexpr double kMaxCondition = 1e6;
constexpr double kSpanResidual = 1e-8;

std::shared_ptr<const PseudomodeSolution> solve_ewl(const InitialStateSpec& spec,
                                                    const ReservoirParams& params,
                                                    const Corrections& corrections) {
  if (const auto* phi = std::get_if<EwlPhi>(&spec)) {
    return std::make_shared<const PseudomodeSolution>(
        ewl_phi_solution(phi->r, phi->alpha2, phi->theta, params));
  }
  const auto& psi = std::get<EwlPsi>(spec);
  return std::make_shared<const PseudomodeSolution>(
      ewl_psi_solution(psi.r, psi.alpha2, psi.theta, params, corrections));
}

// EWL form of the families that have one; nullopt for the rest.
std::optional<InitialStateSpec> as_ewl(const InitialStateSpec& spec) {
  if (const auto* s = std::get_if<BellPhi>(&spec)) return EwlPhi{1.0, s->alpha2, s->theta};
  if (const auto* s = std::get_if<BellPsi>(&spec)) return EwlPsi{1.0, s->alpha2, s->theta};
  if (std::holds_alternative<EwlPhi>(spec) || std::holds_alternative<EwlPsi>(spec)) return spec;
  if (const auto* s = std::get_if<Werner>(&spec)) return EwlPhi{s->r, 0.5, kPi};
  if (const auto* s = std::get_if<WernerLike>(&spec)) {
    switch (s->bell_index) {
      case 0: return EwlPsi{s->r, 0.5, 0.0};
      case 1: return EwlPsi{s->r, 0.5, kPi};
      case 2: return EwlPhi{s->r, 0.5, 0.0};
      default: return EwlPhi{s->r, 0.5, kPi};
    }
  }
  return std::nullopt;
}

Eigen::Matrix<double, 8, 1> to_eigen(const XState& s) {
  const auto v = s.as_vector();
  return Eigen::Map<const Eigen::Matrix<double, 8, 1>>(v.data());
}

}  // namespace

const std::array<InitialStateSpec, 8>& PropagatorColumns::basis_specs() {
  static const std::array<InitialStateSpec, 8> specs = {
      EwlPsi{1.0, 0.5, 0.0},  EwlPsi{1.0, 0.5, kPi / 2}, EwlPsi{1.0, 0.25, 0.0},
      EwlPsi{0.0, 0.5, 0.0},  EwlPhi{1.0, 0.5, 0.0},     EwlPhi{1.0, 0.5, kPi / 2},
      EwlPhi{1.0, 0.25, 0.0}, EwlPhi{1.0, 0.25, kPi}};
  return specs;
}

PropagatorColumns::PropagatorColumns(const ReservoirParams& params, const Corrections& corrections) {
  const auto& specs = basis_specs();
  for (std::size_t i = 0; i < specs.size(); ++i) {
    solutions_.push_back(solve_ewl(specs[i], params, corrections));
    initial_.col(static_cast<Eigen::Index>(i)) = to_eigen(construct_initial(specs[i]));
  }
  Eigen::JacobiSVD<Eigen::Matrix<double, 8, 8>> svd(initial_);
  const auto& sv = svd.singularValues();
  condition_ = sv(0) / sv(7);
  if (!(condition_ < kMaxCondition)) {
    throw SpanError(fmt::format("superposition basis is ill-conditioned ({:.3g})", condition_));
  }
  inverse_ = initial_.inverse();
}

std::array<double, 8> PropagatorColumns::weights(const XState& initial) const {
  const Eigen::Matrix<double, 8, 1> x = to_eigen(initial);
  const Eigen::Matrix<double, 8, 1> w = inverse_ * x;
  const Eigen::Matrix<double, 8, 1> residual = initial_ * w - x;
  Eigen::Index worst = 0;
  const double err = residual.cwiseAbs().maxCoeff(&worst);
  if (err > kSpanResidual) {
    static constexpr std::array<const char*, 8> names = {"a", "b", "c", "d", "Re w", "Im w", "Re z", "Im z"};
    throw SpanError(fmt::format("component {} not reachable (residual {:.3g})",
                                names[static_cast<std::size_t>(worst)], err));
  }
  std::array<double, 8> out;
  for (int i = 0; i < 8; ++i) out[static_cast<std::size_t>(i)] = w(i);
  return out;
}

Evolution::Evolution(const InitialStateSpec& spec, const ReservoirParams& params,
                     const Corrections& corrections)
    : spec_(spec), params_(params) {
  validate(spec);
  if (auto ewl = as_ewl(spec)) {
    components_.push_back({1.0, solve_ewl(*ewl, params, corrections)});
  } else {
    const PropagatorColumns columns(params, corrections);
    const auto w = columns.weights(construct_initial(spec));
    for (std::size_t i = 0; i < w.size(); ++i) {
      if (w[i] != 0.0) components_.push_back({w[i], columns.solutions()[i]});
    }
  }
  for (auto label : kAllLabels) {
    auto& combined = signals_[static_cast<std::size_t>(label)];
    for (const auto& c : components_) {
      ExponentialSum part = c.solution->signal(label);
      part *= c.weight;
      combined += part;
    }
  }
}

const ExponentialSum& Evolution::signal(Label label) const noexcept {
  return signals_[static_cast<std::size_t>(label)];
}

XState Evolution::state_at(double tau) const {
  if (!(tau >= 0.0)) throw DomainError("t", "time must be non-negative");
  std::array<cplx, kLabelCount> v;
  for (std::size_t i = 0; i < kLabelCount; ++i) v[i] = signals_[i](tau);
  return reconstruct_from_values(v);
}

XState Evolution::stationary() const {
  std::array<cplx, kLabelCount> v{};
  for (auto label : kAllLabels) {
    for (const auto& c : components_) {
      v[static_cast<std::size_t>(label)] += c.weight * laplace::final_value(c.solution->transform(label));
    }
  }
  return reconstruct_from_values(v);
}

Trajectory propagate(std::shared_ptr<const Evolution> evolution, const std::vector<double>& times) {
  for (std::size_t i = 0; i < times.size(); ++i) {
    if (!(times[i] >= 0.0)) throw DomainError("times", "sample times must be non-negative");
    if (i > 0 && !(times[i] > times[i - 1])) {
      throw DomainError("times", "sample times must be strictly increasing");
    }
  }
  Trajectory traj{times, {}, evolution->params(), evolution->spec(), evolution};
  traj.states.reserve(times.size());
  for (double t : times) traj.states.push_back(evolution->state_at(t));
  return traj;
}

Trajectory propagate(const InitialStateSpec& spec, const ReservoirParams& params,
                     const std::vector<double>& times) {
  return propagate(std::make_shared<const Evolution>(spec, params), times);
}

XState stationary_state(const InitialStateSpec& spec, const ReservoirParams& params) {
  return Evolution(spec, params).stationary();
}

std::vector<double> linear_times(double tmax, int n) {
  if (!(tmax > 0.0)) throw DomainError("tmax", "must be positive");
  if (n < 2) throw DomainError("steps", "need at least two samples");
  std::vector<double> t(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) t[static_cast<std::size_t>(i)] = tmax * i / (n - 1);
  return t;
}

}  // namespace xdyn::solutions

#pragma once

// Two-qubit X-state model: reservoir parameters, the X-form density matrix,
// initial-state families and the super/sub-radiant coordinates.
//
// Basis ordering throughout: {|00>, |10>, |01>, |11>}.

#include <Eigen/Core>

#include <array>
#include <complex>
#include <numbers>
#include <string>
#include <variant>

namespace xdyn {

using cplx = std::complex<double>;

// Lorentzian reservoir: width gamma, collective coupling omega, and the derived
// Markovian decay rate gamma0 = 4 omega^2 / gamma. Qubits are resonant with the
// Lorentzian peak.
class ReservoirParams {
 public:
  ReservoirParams(double gamma, double omega);

  double gamma() const noexcept { return gamma_; }
  double omega() const noexcept { return omega_; }
  double gamma0() const noexcept { return gamma0_; }

  // Parameters in units where gamma0 == 1.
  double scaled_gamma() const noexcept { return gamma_ / gamma0_; }
  double scaled_omega() const noexcept { return omega_ / gamma0_; }

 private:
  double gamma_;
  double omega_;
  double gamma0_;
};

struct XState {
  double a = 0.0;  // |00>
  double b = 0.0;  // |10>
  double c = 0.0;  // |01>
  double d = 0.0;  // |11>
  cplx w{};        // <00|rho|11>
  cplx z{};        // <10|rho|01>

  double trace() const noexcept { return a + b + c + d; }

  // (a, b, c, d, Re w, Im w, Re z, Im z)
  std::array<double, 8> as_vector() const noexcept;
  static XState from_vector(const std::array<double, 8>& v) noexcept;

  friend bool operator==(const XState&, const XState&) = default;
};

XState operator+(const XState& lhs, const XState& rhs) noexcept;
XState operator*(double k, const XState& s) noexcept;

// Largest element-wise absolute difference.
double max_abs_diff(const XState& lhs, const XState& rhs) noexcept;

// Throws DomainError when the trace, population range or block positivity
// invariants fail by more than tol.
void validate(const XState& s, double tol = 1e-10);

// Dense 4x4 density matrix.
struct DensityMatrix4 {
  Eigen::Matrix4cd m = Eigen::Matrix4cd::Zero();
};

// Throws DomainError unless the matrix is Hermitian, unit-trace and PSD.
void validate(const DensityMatrix4& rho, double psd_tol = 1e-9);

DensityMatrix4 to_dense(const XState& s);

// Reads the X-pattern entries; ignores everything else.
XState extract_x(const DensityMatrix4& rho) noexcept;

struct RadiantCoords {
  double rho_pp = 0.0;  // <+|rho|+>
  double rho_mm = 0.0;  // <-|rho|->
  cplx rho_pm{};        // <+|rho|->
};

// |+-> = (|10> +- |01>)/sqrt(2).
RadiantCoords radiant_coords(const XState& s) noexcept;

struct SinglePairBlock {
  double b = 0.0;
  double c = 0.0;
  cplx z{};
};

// Inverse of radiant_coords on the {|10>, |01>} block.
SinglePairBlock from_radiant(const RadiantCoords& rc) noexcept;

// ---------------------------------------------------------------------------
// Initial-state families.

// alpha|10> + e^{i theta} sqrt(1-alpha^2)|01>
struct BellPhi {
  double alpha2 = 0.5;
  double theta = 0.0;
};

// alpha|00> + e^{i theta} sqrt(1-alpha^2)|11>
struct BellPsi {
  double alpha2 = 0.5;
  double theta = 0.0;
};

// r |Phi><Phi| + (1-r)/4 I
struct EwlPhi {
  double r = 1.0;
  double alpha2 = 0.5;
  double theta = 0.0;
};

// r |Psi><Psi| + (1-r)/4 I
struct EwlPsi {
  double r = 1.0;
  double alpha2 = 0.5;
  double theta = 0.0;
};

// r |singlet><singlet| + (1-r)/4 I
struct Werner {
  double r = 1.0;
};

// r |M><M| + (1-r)/4 I with M one of the Bell states:
// 0: (|00>+|11>)/sqrt2, 1: (|00>-|11>)/sqrt2, 2: (|10>+|01>)/sqrt2, 3: (|10>-|01>)/sqrt2.
struct WernerLike {
  double r = 1.0;
  int bell_index = 0;
};

// Product of two identical single-qubit states alpha2|0><0| + (1-alpha2)|1><1|.
struct FactorizedMixed {
  double alpha2 = 0.5;
};

// Mixed state with at most one excitation. j = <00|rho|10>, k = <00|rho|01>.
// The j, k coherences do not couple to the X block under the common-reservoir
// evolution; they only enter the positivity check.
struct SingleExcitation {
  double a = 1.0;
  double b = 0.0;
  double c = 0.0;
  cplx j{};
  cplx k{};
  cplx z{};
};

struct RawX {
  XState state;
};

using InitialStateSpec = std::variant<BellPhi, BellPsi, EwlPhi, EwlPsi, Werner, WernerLike,
                                      FactorizedMixed, SingleExcitation, RawX>;

// Short machine name of the family ("bell-phi", "ewl-psi", ...).
std::string kind_name(const InitialStateSpec& spec);

// Throws DomainError naming the offending field.
void validate(const InitialStateSpec& spec);

// Exact matrix elements of the requested state (X part).
XState construct_initial(const InitialStateSpec& spec);

// Full dense initial state, including single-excitation j/k coherences.
DensityMatrix4 construct_initial_dense(const InitialStateSpec& spec);

inline constexpr double kPi = std::numbers::pi;

// e^{i theta}, with components below 4e-16 snapped to zero so that theta = pi
// gives exactly -1.
cplx unit_phase(double theta) noexcept;

}  // namespace xdyn

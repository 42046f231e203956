#pragma once

#include <utility>
#include <vector>

#include "rigidmem/types.hpp"

namespace rigidmem {

/// Coefficients of the quadratic Hamiltonian h = (a1 x1^2 + a2 x2^2 + a3 x3^2) / 2.
class RigidBodyParams {
 public:
  /// Throws DomainError unless a1 > a2 > a3 > 0.
  RigidBodyParams(double a1, double a2, double a3);

  /// Skips the ordering check. Meant for tests probing degenerate bodies.
  static RigidBodyParams unchecked(double a1, double a2, double a3);

  double a1() const noexcept { return a_[0]; }
  double a2() const noexcept { return a_[1]; }
  double a3() const noexcept { return a_[2]; }
  const State3& coefficients() const noexcept { return a_; }

 private:
  struct Unchecked {};
  RigidBodyParams(Unchecked, double a1, double a2, double a3) : a_(a1, a2, a3) {}

  State3 a_;
};

/// Principal moments, delayed-torque coupling strength and equilibrium magnitude
/// for the Euler-Poincare body with distributed delay.
class InertiaSetup {
 public:
  /// Throws DomainError unless I1 > I2 > I3 > 0 and m != 0.
  InertiaSetup(double I1, double I2, double I3, double coupling, double m);

  static InertiaSetup unchecked(double I1, double I2, double I3, double coupling, double m);

  double I1() const noexcept { return inertia_[0]; }
  double I2() const noexcept { return inertia_[1]; }
  double I3() const noexcept { return inertia_[2]; }
  const State3& moments() const noexcept { return inertia_; }
  double coupling() const noexcept { return coupling_; }
  double m() const noexcept { return m_; }

  InertiaSetup with_coupling(double coupling) const;
  InertiaSetup with_m(double m) const;

 private:
  struct Unchecked {};
  InertiaSetup(Unchecked, double I1, double I2, double I3, double coupling, double m)
      : inertia_(I1, I2, I3), coupling_(coupling), m_(m) {}

  State3 inertia_;
  double coupling_;
  double m_;
};

double hamiltonian(const RigidBodyParams& p, const State3& x);
State3 hamiltonian_gradient(const RigidBodyParams& p, const State3& x);

/// c(x) = |x|^2 / 2, the Casimir of the so(3) Poisson structure.
double casimir(const State3& x);

/// The antisymmetric Poisson tensor P(x); P(x) x = 0.
Matrix3 poisson_tensor(const State3& x);

/// g = grad h grad h^T - |grad h|^2 Id. Symmetric, negative semidefinite, g grad h = 0.
Matrix3 metric_tensor(const RigidBodyParams& p, const State3& x);

/// Free rigid body: x' = P(x) grad h(x).
State3 rhs_classical(const RigidBodyParams& p, const State3& x);

/// Metriplectic rigid body: x' = P grad h + g grad c. Conserves h, dissipates c.
State3 rhs_revised(const RigidBodyParams& p, const State3& x);

/// Rigid body driven by the delayed average xd (the tilde variable).
State3 rhs_delayed(const RigidBodyParams& p, const State3& x, const State3& xd);

/// Revised rigid body with distributed delay, coded term for term,
/// including the a2 a3 xd2 x2 x3 term of the third component.
State3 rhs_revised_delayed(const RigidBodyParams& p, const State3& x, const State3& xd);

/// Omega' = I^-1 [ (I Omega) x Omega + coupling (I Omega) x ((I Omegad) x Omegad) ].
State3 rhs_ep_delayed(const InertiaSetup& s, const State3& omega, const State3& omegad);

enum class SystemKind {
  kClassical,
  kRevised,
  kDelayed,
  kRevisedDelayed,
  kEpDelayed,
  kFractional,
  kFractionalRevised,
};

/// Axis equilibria (m,0,0), (0,m,0), (0,0,m) for the coordinate systems.
/// Throws DomainError for m == 0 or for kEpDelayed (use the InertiaSetup overload).
std::vector<State3> find_equilibria(SystemKind kind, double m);

/// Omega_i = m / I_i on axis i, using s.m().
std::vector<State3> find_equilibria(const InertiaSetup& s);

struct DelayedLinearization {
  Matrix3 A;  ///< Jacobian w.r.t. the instantaneous state.
  Matrix3 B;  ///< Jacobian w.r.t. the delayed state, per unit coupling.
};

/// Linearization U' = A U + coupling B Ud of rhs_ep_delayed at (Omega_1, Omega_1).
DelayedLinearization linearize_ep_delayed(const InertiaSetup& s);

}  // namespace rigidmem

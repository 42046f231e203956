#include "rigidmem/models.hpp"

#include <cmath>
#include <sstream>

#include <Eigen/Geometry>

namespace rigidmem {

RigidBodyParams::RigidBodyParams(double a1, double a2, double a3) : a_(a1, a2, a3) {
  if (!(a1 > a2 && a2 > a3 && a3 > 0.0) || !a_.allFinite()) {
    std::ostringstream os;
    os << "rigid body coefficients must satisfy a1 > a2 > a3 > 0, got (" << a1 << ", " << a2
       << ", " << a3 << ")";
    throw DomainError(os.str());
  }
}

RigidBodyParams RigidBodyParams::unchecked(double a1, double a2, double a3) {
  return RigidBodyParams(Unchecked{}, a1, a2, a3);
}

InertiaSetup::InertiaSetup(double I1, double I2, double I3, double coupling, double m)
    : inertia_(I1, I2, I3), coupling_(coupling), m_(m) {
  if (!(I1 > I2 && I2 > I3 && I3 > 0.0) || !inertia_.allFinite()) {
    std::ostringstream os;
    os << "principal moments must satisfy I1 > I2 > I3 > 0, got (" << I1 << ", " << I2 << ", "
       << I3 << ")";
    throw DomainError(os.str());
  }
  if (m == 0.0 || !std::isfinite(m)) throw DomainError("equilibrium magnitude m must be nonzero");
  if (!std::isfinite(coupling)) throw DomainError("coupling must be finite");
}

InertiaSetup InertiaSetup::unchecked(double I1, double I2, double I3, double coupling, double m) {
  return InertiaSetup(Unchecked{}, I1, I2, I3, coupling, m);
}

InertiaSetup InertiaSetup::with_coupling(double coupling) const {
  InertiaSetup s = *this;
  s.coupling_ = coupling;
  return s;
}

InertiaSetup InertiaSetup::with_m(double m) const {
  InertiaSetup s = *this;
  s.m_ = m;
  return s;
}

double hamiltonian(const RigidBodyParams& p, const State3& x) {
  return 0.5 * (p.a1() * x[0] * x[0] + p.a2() * x[1] * x[1] + p.a3() * x[2] * x[2]);
}

State3 hamiltonian_gradient(const RigidBodyParams& p, const State3& x) {
  return p.coefficients().cwiseProduct(x);
}

double casimir(const State3& x) { return 0.5 * x.squaredNorm(); }

Matrix3 poisson_tensor(const State3& x) {
  Matrix3 P;
  // clang-format off
  P <<  0.0,   x[2], -x[1],
       -x[2],  0.0,   x[0],
        x[1], -x[0],  0.0;
  // clang-format on
  return P;
}

Matrix3 metric_tensor(const RigidBodyParams& p, const State3& x) {
  const State3 grad = hamiltonian_gradient(p, x);
  Matrix3 g = grad * grad.transpose();
  g.diagonal().array() -= grad.squaredNorm();
  return g;
}

State3 rhs_classical(const RigidBodyParams& p, const State3& x) {
  const double a1 = p.a1(), a2 = p.a2(), a3 = p.a3();
  // Expanded P(x) grad h, term order shared with rhs_delayed so that x = xd agrees bitwise.
  return {a2 * x[1] * x[2] - a3 * x[1] * x[2], a3 * x[0] * x[2] - a1 * x[0] * x[2],
          a1 * x[0] * x[1] - a2 * x[0] * x[1]};
}

State3 rhs_revised(const RigidBodyParams& p, const State3& x) {
  const double a1 = p.a1(), a2 = p.a2(), a3 = p.a3();
  const double x1 = x[0], x2 = x[1], x3 = x[2];
  return {
      (a2 - a3) * x2 * x3 + a2 * (a1 - a2) * x1 * x2 * x2 + a3 * (a1 - a3) * x1 * x3 * x3,
      (a3 - a1) * x1 * x3 + a3 * (a2 - a3) * x2 * x3 * x3 + a1 * (a2 - a1) * x2 * x1 * x1,
      (a1 - a2) * x1 * x2 + a1 * (a3 - a1) * x3 * x1 * x1 + a2 * (a3 - a2) * x3 * x2 * x2,
  };
}

State3 rhs_delayed(const RigidBodyParams& p, const State3& x, const State3& xd) {
  const double a1 = p.a1(), a2 = p.a2(), a3 = p.a3();
  return {
      a2 * xd[1] * x[2] - a3 * xd[1] * xd[2],
      a3 * x[0] * xd[2] - a1 * xd[0] * x[2],
      a1 * xd[0] * xd[1] - a2 * x[0] * xd[1],
  };
}

State3 rhs_revised_delayed(const RigidBodyParams& p, const State3& x, const State3& xd) {
  const double a1 = p.a1(), a2 = p.a2(), a3 = p.a3();
  const double x1 = x[0], x2 = x[1], x3 = x[2];
  const double y1 = xd[0], y2 = xd[1], y3 = xd[2];
  return {
      a2 * y2 * x3 - a3 * y2 * y3 + a1 * a2 * y1 * x2 * x2,
      a3 * x1 * y3 - a1 * y1 * x3 - a1 * a1 * x1 * y1 * x2 - a3 * a3 * x2 * x3 * y3,
      a1 * y1 * x2 - a2 * x1 * y2 + a2 * a3 * y2 * x2 * x3,
  };
}

State3 rhs_ep_delayed(const InertiaSetup& s, const State3& omega, const State3& omegad) {
  const State3& I = s.moments();
  const State3 M = I.cwiseProduct(omega);
  const State3 Md = I.cwiseProduct(omegad);
  const State3 torque = M.cross(omega) + s.coupling() * M.cross(Md.cross(omegad));
  return torque.cwiseQuotient(I);
}

std::vector<State3> find_equilibria(SystemKind kind, double m) {
  if (kind == SystemKind::kEpDelayed)
    throw DomainError("Euler-Poincare equilibria depend on the inertia; pass an InertiaSetup");
  if (m == 0.0 || !std::isfinite(m)) throw DomainError("equilibrium magnitude m must be nonzero");
  return {State3(m, 0, 0), State3(0, m, 0), State3(0, 0, m)};
}

std::vector<State3> find_equilibria(const InertiaSetup& s) {
  if (s.m() == 0.0) throw DomainError("equilibrium magnitude m must be nonzero");
  return {State3(s.m() / s.I1(), 0, 0), State3(0, s.m() / s.I2(), 0),
          State3(0, 0, s.m() / s.I3())};
}

DelayedLinearization linearize_ep_delayed(const InertiaSetup& s) {
  const double I1 = s.I1(), I2 = s.I2(), I3 = s.I3(), m = s.m();
  DelayedLinearization lin{Matrix3::Zero(), Matrix3::Zero()};
  lin.A(1, 2) = (I3 - I1) * m / (I1 * I2);
  lin.A(2, 1) = (I1 - I2) * m / (I1 * I3);
  lin.B(1, 1) = (I2 - I1) * m * m / (I1 * I2);
  lin.B(2, 2) = (I3 - I1) * m * m / (I1 * I3);
  return lin;
}

}  // namespace rigidmem

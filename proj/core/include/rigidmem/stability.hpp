#pragma once

#include <functional>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Core>

#include "rigidmem/kernels.hpp"
#include "rigidmem/models.hpp"
#include "rigidmem/types.hpp"

namespace rigidmem {

/// c2 w^2 + c1 w + c0 in w = lambda^order. The common lambda^order factor of the
/// full characteristic equation is kept as a structural zero root.
struct CharQuadratic {
  double c2 = 1.0;
  double c1 = 0.0;
  double c0 = 0.0;
  bool structural_zero = true;

  Complex operator()(Complex w) const { return (c2 * w + c1) * w + c0; }
  std::pair<Complex, Complex> roots() const;
};

enum class Equilibrium { kM1, kM2, kM3 };
enum class Verdict { kAsymptoticallyStable, kMarginal, kUnstable };

const char* to_string(Verdict v);
const char* to_string(Equilibrium e);

/// Which plane the reported roots live in.
enum class RootPlane { kW, kLambda };

struct RootInfo {
  Complex root;
  /// w-plane: |arg w| - order pi / 2. lambda-plane: -Re(lambda). Positive is the stable side.
  double margin;
};

struct StabilityReport {
  RootPlane plane = RootPlane::kW;
  double order = 1.0;
  std::vector<RootInfo> roots;
  Verdict verdict = Verdict::kMarginal;
  bool structural_zero_root = false;
  /// Right-half-plane root count from the argument principle (lambda-plane analyses).
  std::optional<int> rhp_root_count;
  std::optional<double> critical_delay;
  std::optional<double> critical_delay_bound;
  /// Conditions recorded for reference, e.g. closed-form sufficient conditions.
  std::vector<std::pair<std::string, std::string>> metadata;

  /// Root with the smallest margin, if any.
  std::optional<RootInfo> dominant_root() const;
  /// Flat `key = value` block.
  std::string to_text() const;
};

/// Characteristic polynomial in w = lambda^order at an axis equilibrium of the
/// fractional (revised = false) or revised fractional rigid body.
CharQuadratic char_frac_equilibrium(const RigidBodyParams& p, Equilibrium which, double m,
                                    bool revised);

/// Sector test: stable iff every root has |arg w| > order pi / 2 (margin > 1e-12),
/// marginal if the smallest margin is within 1e-12 of zero.
StabilityReport matignon_classify(const CharQuadratic& q, double order);

/// The reduced (tangent-space) characteristic function of the delayed
/// Euler-Poincare body at Omega_1:
///   lam^2 - c m^2/I1 ((I2-I1)/I2 + (I3-I1)/I3) lam K
///   + c^2 m^4/(I1^2 I2 I3) (I2-I1)(I3-I1) K^2 - (I1-I2)(I3-I1) m^2/(I1^2 I2 I3),
/// with K = laplace(kernel, lam) and c the coupling.
Complex char_ep_eval(const InertiaSetup& s, const DelayKernel& kernel, Complex lam);

/// Closed-form sufficient delay bound for Omega_1 with a Dirac kernel:
/// I1 (I3 (I1-I2) + I2 (I1-I3)) / (3 |c| m^2 (I1-I2)(I1-I3)).
/// Throws DomainError unless I1 > I2, I1 > I3, c != 0, m != 0.
double tau_c_formula(const InertiaSetup& s);

struct DelayCrossing {
  double tau;
  double omega;
  double residual;
};

/// Smallest delay tau > 0 at which char_ep_eval (Dirac kernel) has a root
/// lambda = i omega with 0 < omega <= omega_max, found on `grid` omega samples
/// and polished by Newton. nullopt if there is none.
std::optional<DelayCrossing> critical_delay_scan(const InertiaSetup& s, double omega_max,
                                                 std::size_t grid);

/// det(lam^order Id - A - laplace(kernel, lam) B) on the principal branch.
Complex frac_delay_char_eval(const Eigen::MatrixXd& A, const Eigen::MatrixXd& B, double order,
                             const DelayKernel& kernel, Complex lam);

/// True when lam lies within `tol` of the principal branch cut (-inf, 0].
bool near_branch_cut(Complex lam, double tol = 1e-10);

struct ContourOptions {
  double sigma_max = 50.0;
  double omega_max = 50.0;
  std::size_t base_segments = 4096;
  int max_depth = 40;
};

struct ContourCount {
  int zeros = 0;
  /// A zero sits on (or numerically at) the contour, usually the imaginary axis.
  bool boundary_zero = false;
};

/// Zeros of f in [0, sigma_max] x [-omega_max, omega_max] by the argument
/// principle with adaptive subdivision of the boundary.
ContourCount count_rhp_zeros(const std::function<Complex(Complex)>& f,
                             const ContourOptions& opt = {});

/// Distinct zeros of f reached by Newton from a seed grid over
/// [re_lo, re_hi] x [0, im_hi] (conjugates of real-coefficient roots are added).
/// Zeros on the principal branch cut (-inf, 0] are skipped.
std::vector<Complex> newton_roots(const std::function<Complex(Complex)>& f, double re_lo,
                                  double re_hi, double im_hi, int nx = 12, int ny = 24);

/// Stability of Omega_1 for the delayed Euler-Poincare body with a given kernel.
StabilityReport ep_delay_check(const InertiaSetup& s, const DelayKernel& kernel,
                               const ContourOptions& opt = {});

/// D^order x = a x(t - tau): root scan of lam^order - a e^{-lam tau}.
StabilityReport scalar_frac_delay_check(double a, double order, double tau,
                                        const ContourOptions& opt = {});

/// D^order x = y - k1 x, D^order y = -(k1 + k2) y + x(t - tau).
StabilityReport planar_frac_delay_check(double k1, double k2, double order, double tau,
                                        const ContourOptions& opt = {});

/// The 2x2 matrices of the planar benchmark: instantaneous A and delayed B.
std::pair<Eigen::Matrix2d, Eigen::Matrix2d> planar_benchmark_matrices(double k1, double k2);

}  // namespace rigidmem

#include "rigidmem/stability.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>

#include <Eigen/Dense>

#include "rigidmem/trajectory.hpp"

namespace rigidmem {
namespace {

constexpr double kSectorTol = 1e-12;
constexpr double kPi = std::numbers::pi;

void require_order(double order) {
  if (!(order > 0.0 && order <= 1.0)) throw DomainError("order must lie in (0, 1]");
}

// Reduced characteristic quadratic lam^2 - c1 lam K + c2 K^2 + c0.
struct EpCoefficients {
  double c1, c2, c0;
};

EpCoefficients ep_coefficients(const InertiaSetup& s) {
  const double I1 = s.I1(), I2 = s.I2(), I3 = s.I3(), m = s.m(), c = s.coupling();
  const double m2 = m * m;
  const double denom = I1 * I1 * I2 * I3;
  return {
      c * m2 / I1 * ((I2 - I1) / I2 + (I3 - I1) / I3),
      c * c * m2 * m2 / denom * (I2 - I1) * (I3 - I1),
      -(I1 - I2) * (I3 - I1) / denom * m2,
  };
}

Verdict verdict_from_margin(double min_margin) {
  if (min_margin > kSectorTol) return Verdict::kAsymptoticallyStable;
  if (min_margin < -kSectorTol) return Verdict::kUnstable;
  return Verdict::kMarginal;
}

Complex pow_principal(Complex lam, double order) {
  if (order == 1.0) return lam;
  if (lam == Complex(0.0, 0.0)) return {0.0, 0.0};
  return std::pow(lam, order);
}

Verdict verdict_from_count(const ContourCount& c) {
  if (c.zeros > 0) return Verdict::kUnstable;
  if (c.boundary_zero) return Verdict::kMarginal;
  return Verdict::kAsymptoticallyStable;
}

void attach_lambda_roots(StabilityReport& r, const std::vector<Complex>& roots) {
  for (const Complex& z : roots) r.roots.push_back({z, -z.real()});
  std::sort(r.roots.begin(), r.roots.end(),
            [](const RootInfo& a, const RootInfo& b) { return a.margin < b.margin; });
  if (r.roots.size() > 8) r.roots.resize(8);
}

}  // namespace

const char* to_string(Verdict v) {
  switch (v) {
    case Verdict::kAsymptoticallyStable: return "asymptotically-stable";
    case Verdict::kMarginal: return "marginal";
    case Verdict::kUnstable: return "unstable";
  }
  return "unknown";
}

const char* to_string(Equilibrium e) {
  switch (e) {
    case Equilibrium::kM1: return "M1";
    case Equilibrium::kM2: return "M2";
    case Equilibrium::kM3: return "M3";
  }
  return "unknown";
}

std::pair<Complex, Complex> CharQuadratic::roots() const {
  if (c2 == 0.0) throw DomainError("characteristic quadratic needs c2 != 0");
  const Complex disc = std::sqrt(Complex(c1 * c1 - 4.0 * c2 * c0, 0.0));
  // Pick the sign that avoids cancellation.
  const Complex plus = c1 + disc, minus = c1 - disc;
  const Complex q = -0.5 * (std::abs(plus) >= std::abs(minus) ? plus : minus);
  if (q == Complex(0.0, 0.0)) return {Complex(0.0, 0.0), Complex(0.0, 0.0)};
  return {q / c2, c0 / q};
}

std::optional<RootInfo> StabilityReport::dominant_root() const {
  if (roots.empty()) return std::nullopt;
  return *std::min_element(roots.begin(), roots.end(),
                           [](const RootInfo& a, const RootInfo& b) { return a.margin < b.margin; });
}

std::string StabilityReport::to_text() const {
  std::ostringstream os;
  os << "plane = " << (plane == RootPlane::kW ? "w" : "lambda") << '\n';
  os << "order = " << format_double(order) << '\n';
  os << "verdict = " << to_string(verdict) << '\n';
  os << "structural_zero_root = " << (structural_zero_root ? "true" : "false") << '\n';
  for (std::size_t i = 0; i < roots.size(); ++i) {
    os << "root." << i << " = " << format_double(roots[i].root.real()) << ", "
       << format_double(roots[i].root.imag()) << '\n';
    os << "margin." << i << " = " << format_double(roots[i].margin) << '\n';
  }
  if (rhp_root_count) os << "rhp_root_count = " << *rhp_root_count << '\n';
  if (critical_delay_bound) os << "tau_c = " << format_double(*critical_delay_bound) << '\n';
  if (critical_delay) os << "tau_crossing = " << format_double(*critical_delay) << '\n';
  for (const auto& [k, v] : metadata) os << "meta." << k << " = " << v << '\n';
  return os.str();
}

CharQuadratic char_frac_equilibrium(const RigidBodyParams& p, Equilibrium which, double m,
                                    bool revised) {
  if (m == 0.0 || !std::isfinite(m)) throw DomainError("equilibrium magnitude m must be nonzero");
  const double a1 = p.a1(), a2 = p.a2(), a3 = p.a3();
  const double m2 = m * m;
  CharQuadratic q;
  switch (which) {
    case Equilibrium::kM1:
      q.c0 = (a1 - a3) * (a1 - a2) * m2;
      if (revised) {
        q.c1 = -a1 * (a2 + a3 - 2.0 * a1) * m2;
        q.c0 *= a1 * a1 * m2 + 1.0;
      }
      break;
    case Equilibrium::kM2:
      q.c0 = -(a1 - a2) * (a2 - a3) * m2;
      if (revised) {
        q.c1 = -a2 * (a1 + a3 - 2.0 * a2) * m2;
        q.c0 *= a2 * a2 * m2 + 1.0;
      }
      break;
    case Equilibrium::kM3:
      q.c0 = (a1 - a3) * (a2 - a3) * m2;
      if (revised) {
        q.c1 = -a3 * (a1 + a2 - 2.0 * a3) * m2;
        q.c0 *= a3 * a3 * m2 + 1.0;
      }
      break;
  }
  return q;
}

StabilityReport matignon_classify(const CharQuadratic& q, double order) {
  require_order(order);
  StabilityReport r;
  r.plane = RootPlane::kW;
  r.order = order;
  r.structural_zero_root = q.structural_zero;
  const auto [w1, w2] = q.roots();
  double min_margin = std::numeric_limits<double>::infinity();
  for (const Complex& w : {w1, w2}) {
    const double margin = std::abs(std::arg(w)) - order * kPi / 2.0;
    r.roots.push_back({w, margin});
    min_margin = std::min(min_margin, margin);
  }
  r.verdict = verdict_from_margin(min_margin);
  if (q.structural_zero)
    r.metadata.emplace_back("structural_zero", "neutral direction along the equilibrium axis");
  return r;
}

Complex char_ep_eval(const InertiaSetup& s, const DelayKernel& kernel, Complex lam) {
  const EpCoefficients c = ep_coefficients(s);
  if (c.c1 == 0.0 && c.c2 == 0.0) return lam * lam + c.c0;
  const Complex K = laplace(kernel, lam);
  return lam * lam - c.c1 * lam * K + c.c2 * K * K + c.c0;
}

double tau_c_formula(const InertiaSetup& s) {
  const double I1 = s.I1(), I2 = s.I2(), I3 = s.I3(), m = s.m(), c = s.coupling();
  if (!(I1 > I2 && I1 > I3)) throw DomainError("tau_c requires I1 > I2 and I1 > I3");
  if (c == 0.0) throw DomainError("tau_c requires a nonzero coupling");
  if (m == 0.0) throw DomainError("tau_c requires m != 0");
  return I1 * (I3 * (I1 - I2) + I2 * (I1 - I3)) / (3.0 * std::abs(c) * m * m * (I1 - I2) * (I1 - I3));
}

std::optional<DelayCrossing> critical_delay_scan(const InertiaSetup& s, double omega_max,
                                                 std::size_t grid) {
  if (!(omega_max > 0.0) || grid < 2) throw DomainError("crossing scan needs omega_max > 0, grid >= 2");
  const EpCoefficients c = ep_coefficients(s);
  if (c.c1 == 0.0 && c.c2 == 0.0) return std::nullopt;

  // At lam = i w the characteristic function is a quadratic in E = e^{-i w tau}:
  // c2 E^2 - i c1 w E + (c0 - w^2) = 0. A crossing needs |E| = 1.
  auto branches = [&](double w) -> std::vector<Complex> {
    const Complex bq(0.0, -c.c1 * w);
    const double cq = c.c0 - w * w;
    if (c.c2 == 0.0) return {-cq / bq};
    const Complex disc = std::sqrt(bq * bq - 4.0 * c.c2 * cq);
    std::vector<Complex> r = {(-bq + disc) / (2.0 * c.c2), (-bq - disc) / (2.0 * c.c2)};
    std::sort(r.begin(), r.end(), [](Complex a, Complex b) { return std::abs(a) < std::abs(b); });
    return r;
  };
  auto gap = [&](double w, std::size_t i) { return std::abs(branches(w)[i]) - 1.0; };

  auto residual = [&](double w, double tau) {
    return char_ep_eval(s, DelayKernel::dirac(std::max(tau, 0.0)), Complex(0.0, w));
  };

  std::optional<DelayCrossing> best;
  const std::size_t nb = branches(omega_max).size();
  for (std::size_t bi = 0; bi < nb; ++bi) {
    double w_prev = omega_max / static_cast<double>(grid);
    double g_prev = gap(w_prev, bi);
    for (std::size_t k = 2; k <= grid; ++k) {
      const double w = omega_max * static_cast<double>(k) / static_cast<double>(grid);
      const double g = gap(w, bi);
      if ((g_prev <= 0.0) != (g <= 0.0)) {
        double lo = w_prev, hi = w, glo = g_prev;
        for (int it = 0; it < 200 && hi - lo > 1e-15 * hi; ++it) {
          const double mid = 0.5 * (lo + hi);
          const double gm = gap(mid, bi);
          if ((gm <= 0.0) == (glo <= 0.0)) {
            lo = mid;
            glo = gm;
          } else {
            hi = mid;
          }
        }
        double om = 0.5 * (lo + hi);
        const Complex E = branches(om)[bi];
        double phase = -std::arg(E);
        if (phase < 0.0) phase += 2.0 * kPi;
        double tau = phase / om;

        // Newton on the two real equations Re/Im of the characteristic function.
        for (int it = 0; it < 30; ++it) {
          const Complex F = residual(om, tau);
          if (std::abs(F) < 1e-15) break;
          const double dw = 1e-7 * std::max(1.0, om), dt = 1e-7 * std::max(1.0, tau);
          const Complex Fw = (residual(om + dw, tau) - residual(om - dw, tau)) / (2.0 * dw);
          const Complex Ft = (residual(om, tau + dt) - residual(om, tau - dt)) / (2.0 * dt);
          Eigen::Matrix2d J;
          J << Fw.real(), Ft.real(), Fw.imag(), Ft.imag();
          const Eigen::Vector2d delta = J.fullPivLu().solve(Eigen::Vector2d(-F.real(), -F.imag()));
          if (!delta.allFinite()) break;
          om += delta[0];
          tau += delta[1];
          if (std::abs(delta[0]) < 1e-15 * std::max(1.0, om) &&
              std::abs(delta[1]) < 1e-15 * std::max(1.0, tau))
            break;
        }
        const double res = std::abs(residual(om, tau));
        if (tau >= 0.0 && om > 0.0 && (!best || tau < best->tau)) best = DelayCrossing{tau, om, res};
      }
      w_prev = w;
      g_prev = g;
    }
  }
  return best;
}

Complex frac_delay_char_eval(const Eigen::MatrixXd& A, const Eigen::MatrixXd& B, double order,
                             const DelayKernel& kernel, Complex lam) {
  require_order(order);
  if (A.rows() != A.cols() || B.rows() != A.rows() || B.cols() != A.cols())
    throw DomainError("A and B must be square matrices of equal size");
  const Complex w = pow_principal(lam, order);
  const Complex K = laplace(kernel, lam);
  Eigen::MatrixXcd M = -A.cast<Complex>() - K * B.cast<Complex>();
  M.diagonal().array() += w;
  return M.determinant();
}

bool near_branch_cut(Complex lam, double tol) {
  return lam.real() <= tol && std::abs(lam.imag()) <= tol;
}

ContourCount count_rhp_zeros(const std::function<Complex(Complex)>& f, const ContourOptions& opt) {
  ContourCount out;
  const Complex corners[] = {{0.0, -opt.omega_max},
                             {opt.sigma_max, -opt.omega_max},
                             {opt.sigma_max, opt.omega_max},
                             {0.0, opt.omega_max}};
  const std::size_t per_edge = std::max<std::size_t>(opt.base_segments / 4, 8);

  // Accumulates the argument change of f along [za, zb]; subdivides until each
  // piece turns by at most pi/4.
  std::function<double(Complex, Complex, Complex, Complex, int)> walk =
      [&](Complex za, Complex zb, Complex fa, Complex fb, int depth) -> double {
    if (fa == Complex(0.0, 0.0) || fb == Complex(0.0, 0.0)) {
      out.boundary_zero = true;
      return 0.0;
    }
    const double d = std::arg(fb / fa);
    if (std::abs(d) <= kPi / 4.0) return d;
    if (depth >= opt.max_depth) {
      out.boundary_zero = true;
      return d;
    }
    const Complex zm = 0.5 * (za + zb);
    const Complex fm = f(zm);
    return walk(za, zm, fa, fm, depth + 1) + walk(zm, zb, fm, fb, depth + 1);
  };

  double total = 0.0;
  for (int e = 0; e < 4; ++e) {
    const Complex za = corners[e], zb = corners[(e + 1) % 4];
    Complex z_prev = za;
    Complex f_prev = f(za);
    for (std::size_t i = 1; i <= per_edge; ++i) {
      const Complex z = za + (zb - za) * (static_cast<double>(i) / static_cast<double>(per_edge));
      const Complex fz = f(z);
      total += walk(z_prev, z, f_prev, fz, 0);
      z_prev = z;
      f_prev = fz;
    }
  }
  out.zeros = static_cast<int>(std::lround(total / (2.0 * kPi)));
  return out;
}

std::vector<Complex> newton_roots(const std::function<Complex(Complex)>& f, double re_lo,
                                  double re_hi, double im_hi, int nx, int ny) {
  std::vector<Complex> found;
  auto add = [&](Complex z) {
    for (const Complex& r : found)
      if (std::abs(r - z) < 1e-7 * std::max(1.0, std::abs(z))) return;
    found.push_back(z);
  };
  for (int i = 0; i < nx; ++i) {
    for (int j = 0; j < ny; ++j) {
      Complex z(re_lo + (re_hi - re_lo) * (i + 0.5) / nx, im_hi * (j + 0.5) / ny);
      bool ok = false;
      for (int it = 0; it < 60; ++it) {
        const Complex fz = f(z);
        const double dz = 1e-7 * std::max(1.0, std::abs(z));
        const Complex df = (f(z + dz) - f(z - dz)) / (2.0 * dz);
        if (df == Complex(0.0, 0.0) || !std::isfinite(std::abs(df))) break;
        const Complex step = fz / df;
        z -= step;
        if (!std::isfinite(std::abs(z)) || std::abs(z) > 1e6) break;
        if (std::abs(step) < 1e-14 * std::max(1.0, std::abs(z))) {
          ok = true;
          break;
        }
      }
      if (!ok || near_branch_cut(z, 1e-8)) continue;
      if (std::abs(f(z)) > 1e-9 * std::max(1.0, std::abs(z) * std::abs(z))) continue;
      add(z);
      const Complex zc = std::conj(z);
      if (std::abs(z.imag()) > 1e-12 && std::abs(f(zc)) < 1e-9 * std::max(1.0, std::norm(zc)))
        add(zc);
    }
  }
  std::sort(found.begin(), found.end(),
            [](Complex a, Complex b) { return a.real() > b.real() || (a.real() == b.real() && a.imag() > b.imag()); });
  return found;
}

StabilityReport ep_delay_check(const InertiaSetup& s, const DelayKernel& kernel,
                               const ContourOptions& opt) {
  auto f = [&](Complex lam) { return char_ep_eval(s, kernel, lam); };
  StabilityReport r;
  r.plane = RootPlane::kLambda;
  r.order = 1.0;
  r.structural_zero_root = true;
  const ContourCount count = count_rhp_zeros(f, opt);
  r.rhp_root_count = count.zeros;
  r.verdict = verdict_from_count(count);

  double re_lo = -2.0;
  if (const auto chain = chain_reduce(kernel)) re_lo = std::max(re_lo, -0.9 * chain->rate);
  attach_lambda_roots(r, newton_roots(f, re_lo, 2.0, 4.0));

  try {
    r.critical_delay_bound = tau_c_formula(s);
  } catch (const DomainError& e) {
    r.metadata.emplace_back("tau_c", e.what());
  }
  if (const auto crossing = critical_delay_scan(s, opt.omega_max, 20000)) {
    r.critical_delay = crossing->tau;
    r.metadata.emplace_back("crossing_omega", format_double(crossing->omega));
  }
  r.metadata.emplace_back("kernel", std::string(kernel.name()));
  r.metadata.emplace_back("delay_bounds", "tau_c and tau_crossing refer to a Dirac kernel");
  return r;
}

StabilityReport scalar_frac_delay_check(double a, double order, double tau,
                                        const ContourOptions& opt) {
  require_order(order);
  if (!(tau >= 0.0)) throw DomainError("delay must be >= 0");
  Eigen::MatrixXd A = Eigen::MatrixXd::Zero(1, 1);
  Eigen::MatrixXd B = Eigen::MatrixXd::Constant(1, 1, a);
  const DelayKernel kernel = DelayKernel::dirac(tau);
  auto f = [&](Complex lam) { return frac_delay_char_eval(A, B, order, kernel, lam); };

  StabilityReport r;
  r.plane = RootPlane::kLambda;
  r.order = order;
  const ContourCount count = count_rhp_zeros(f, opt);
  r.rhp_root_count = count.zeros;
  r.verdict = verdict_from_count(count);
  attach_lambda_roots(r, newton_roots(f, -1.0, 2.0, 6.0));

  bool resonant = false;
  if (a < 0.0 && tau > 0.0) {
    const double lhs = std::pow(-a, 1.0 / order);
    const double shift = order * kPi / 2.0;
    // Nearest k for ((2k+1) pi - shift) / tau = +-lhs.
    const double kf = (lhs * tau + shift - kPi) / (2.0 * kPi);
    for (double k : {std::floor(kf), std::ceil(kf)}) {
      const double v = ((2.0 * k + 1.0) * kPi - shift) / tau;
      if (std::abs(std::abs(v) - lhs) < 1e-12 * std::max(1.0, lhs)) resonant = true;
    }
  }
  r.metadata.emplace_back("sufficient_condition",
                          "a < 0 and (-a)^(1/alpha) != +-((2k+1)pi - alpha pi/2)/tau for all k");
  r.metadata.emplace_back("sufficient_condition_met", (a < 0.0 && !resonant) ? "true" : "false");
  return r;
}

std::pair<Eigen::Matrix2d, Eigen::Matrix2d> planar_benchmark_matrices(double k1, double k2) {
  Eigen::Matrix2d A;
  A << -k1, 1.0, 0.0, -(k1 + k2);
  Eigen::Matrix2d B;
  B << 0.0, 0.0, 1.0, 0.0;
  return {A, B};
}

StabilityReport planar_frac_delay_check(double k1, double k2, double order, double tau,
                                        const ContourOptions& opt) {
  require_order(order);
  if (!(k1 >= 0.0) || !(k2 > 0.0)) throw DomainError("planar benchmark needs k1 >= 0, k2 > 0");
  if (!(tau >= 0.0)) throw DomainError("delay must be >= 0");
  const auto [A2, B2] = planar_benchmark_matrices(k1, k2);
  const Eigen::MatrixXd A = A2, B = B2;
  const DelayKernel kernel = DelayKernel::dirac(tau);
  auto f = [&](Complex lam) { return frac_delay_char_eval(A, B, order, kernel, lam); };

  StabilityReport r;
  r.plane = RootPlane::kLambda;
  r.order = order;
  const ContourCount count = count_rhp_zeros(f, opt);
  r.rhp_root_count = count.zeros;
  r.verdict = verdict_from_count(count);
  attach_lambda_roots(r, newton_roots(f, -1.0, 2.0, 6.0));
  r.metadata.emplace_back("sufficient_condition", "k1 > 0 and k2 > 1/k1 - k (k unbound)");
  r.metadata.emplace_back("sufficient_condition_k1_positive", k1 > 0.0 ? "true" : "false");
  return r;
}

}  // namespace rigidmem

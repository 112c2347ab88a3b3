#include "xyqrg/measures.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <stdexcept>
#include <string>

namespace xyqrg {

namespace {

constexpr double kPi = 3.14159265358979323846;

double clamp_nonneg(double v, double slack = 1e-9) {
  if (v < 0.0 && v > -slack) return 0.0;
  return v;
}

double xlog2x(double p) {
  if (p <= 1e-15) return 0.0;
  return p * std::log2(p);
}

// Entropy of a 2x2 Hermitian PSD matrix with arbitrary trace; the trace is
// treated as already normalized by the caller.
double entropy_2x2(const Eigen::Matrix2cd& m) {
  const double tr = std::real(m(0, 0)) + std::real(m(1, 1));
  const double det =
      std::real(m(0, 0)) * std::real(m(1, 1)) - std::norm(m(0, 1));
  const double disc = std::sqrt(std::max(0.0, 0.25 * tr * tr - det));
  const double lo = std::clamp(0.5 * tr - disc, 0.0, 1.0);
  const double hi = std::clamp(0.5 * tr + disc, 0.0, 1.0);
  return -xlog2x(lo) - xlog2x(hi);
}

Eigen::Matrix2cd marginal_a(const Eigen::MatrixXcd& r) {
  Eigen::Matrix2cd m;
  for (int a = 0; a < 2; ++a)
    for (int ap = 0; ap < 2; ++ap)
      m(a, ap) = r(2 * a + 0, 2 * ap + 0) + r(2 * a + 1, 2 * ap + 1);
  return m;
}

Eigen::Matrix2cd marginal_b(const Eigen::MatrixXcd& r) {
  Eigen::Matrix2cd m;
  for (int b = 0; b < 2; ++b)
    for (int bp = 0; bp < 2; ++bp)
      m(b, bp) = r(0 + b, 0 + bp) + r(2 + b, 2 + bp);
  return m;
}

Eigen::Vector3d bloch_vector(const Eigen::Matrix2cd& m) {
  Eigen::Vector3d a;
  a(0) = std::real(m(0, 1) + m(1, 0));
  a(1) = std::real(Complex(0, 1) * (m(0, 1) - m(1, 0)));
  a(2) = std::real(m(0, 0) - m(1, 1));
  return a;
}

// Correlation matrix T_ij = Tr[rho (sigma_i (x) sigma_j)]; real for Hermitian
// rho up to roundoff.
Eigen::Matrix3d correlation_matrix(const Eigen::MatrixXcd& r) {
  Eigen::Matrix3d t;
  const std::array<Eigen::Matrix2cd, 3> sig = {pauli(Axis::X), pauli(Axis::Y),
                                               pauli(Axis::Z)};
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) {
      Eigen::Matrix4cd op;
      for (int a = 0; a < 2; ++a)
        for (int ap = 0; ap < 2; ++ap)
          for (int b = 0; b < 2; ++b)
            for (int bp = 0; bp < 2; ++bp)
              op(2 * a + b, 2 * ap + bp) = sig[i](a, ap) * sig[j](b, bp);
      t(i, j) = std::real((r * op).trace());
    }
  return t;
}

Eigen::Matrix2cd projector_along(double theta, double phi) {
  const Eigen::Vector3d n(std::sin(theta) * std::cos(phi),
                          std::sin(theta) * std::sin(phi), std::cos(theta));
  Eigen::Matrix2cd p = 0.5 * Eigen::Matrix2cd::Identity();
  p += 0.5 * (n(0) * pauli(Axis::X) + n(1) * pauli(Axis::Y) +
              n(2) * pauli(Axis::Z));
  return p;
}

double trace_norm_4x4_hermitian(const Eigen::Matrix4cd& m) {
  Eigen::SelfAdjointEigenSolver<Eigen::Matrix4cd> es(m,
                                                     Eigen::EigenvaluesOnly);
  return es.eigenvalues().cwiseAbs().sum();
}

// ---------------------------------------------------------------------------
// shared 2-parameter Nelder-Mead (minimization)
// ---------------------------------------------------------------------------

struct Nm2dResult {
  double x = 0.0, y = 0.0, f = 0.0;
  bool converged = false;
};

template <typename F>
Nm2dResult nelder_mead_2d(F&& f, double x0, double y0, double dx, double dy,
                          double ftol, int max_iters) {
  struct Vertex {
    double x, y, f;
  };
  std::array<Vertex, 3> v = {Vertex{x0, y0, f(x0, y0)},
                             Vertex{x0 + dx, y0, f(x0 + dx, y0)},
                             Vertex{x0, y0 + dy, f(x0, y0 + dy)}};
  auto by_f = [](const Vertex& a, const Vertex& b) { return a.f < b.f; };
  bool converged = false;
  for (int it = 0; it < max_iters; ++it) {
    std::sort(v.begin(), v.end(), by_f);
    const double diam =
        std::max(std::hypot(v[1].x - v[0].x, v[1].y - v[0].y),
                 std::hypot(v[2].x - v[0].x, v[2].y - v[0].y));
    if (v[2].f - v[0].f < ftol && diam < 1e-8) {
      converged = true;
      break;
    }
    const double cx = 0.5 * (v[0].x + v[1].x);
    const double cy = 0.5 * (v[0].y + v[1].y);
    auto eval = [&](double t) {
      const double px = cx + t * (cx - v[2].x);
      const double py = cy + t * (cy - v[2].y);
      return Vertex{px, py, f(px, py)};
    };
    Vertex refl = eval(1.0);
    if (refl.f < v[0].f) {
      Vertex expd = eval(2.0);
      v[2] = (expd.f < refl.f) ? expd : refl;
    } else if (refl.f < v[1].f) {
      v[2] = refl;
    } else {
      Vertex ctr = (refl.f < v[2].f) ? eval(0.5) : eval(-0.5);
      if (ctr.f < std::min(refl.f, v[2].f)) {
        v[2] = ctr;
      } else {
        for (int i = 1; i < 3; ++i) {
          v[i].x = v[0].x + 0.5 * (v[i].x - v[0].x);
          v[i].y = v[0].y + 0.5 * (v[i].y - v[0].y);
          v[i].f = f(v[i].x, v[i].y);
        }
      }
    }
  }
  std::sort(v.begin(), v.end(), by_f);
  return {v[0].x, v[0].y, v[0].f, converged};
}

}  // namespace

// ---------------------------------------------------------------------------
// identifiers
// ---------------------------------------------------------------------------

const char* measure_name(Measure m) {
  switch (m) {
    case Measure::Ne: return "ne";
    case Measure::Qd: return "qd";
    case Measure::Mid: return "mid";
    case Measure::Min: return "min";
    case Measure::Gqd: return "gqd";
    case Measure::Chsh: return "chsh";
    case Measure::Conc: return "c";
  }
  return "?";
}

std::optional<Measure> measure_from_name(const std::string& name) {
  for (Measure m : all_measures())
    if (name == measure_name(m)) return m;
  return std::nullopt;
}

const char* provenance_name(Provenance p, bool degraded) {
  if (degraded) {
    switch (p) {
      case Provenance::ClosedForm: return "closed-degraded";
      case Provenance::Generic: return "generic-degraded";
      case Provenance::BothAgree: return "both-degraded";
    }
  }
  switch (p) {
    case Provenance::ClosedForm: return "closed";
    case Provenance::Generic: return "generic";
    case Provenance::BothAgree: return "both";
  }
  return "?";
}

// ---------------------------------------------------------------------------
// entropies
// ---------------------------------------------------------------------------

double von_neumann_entropy(const Eigen::MatrixXcd& rho) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(rho,
                                                     Eigen::EigenvaluesOnly);
  if (es.info() != Eigen::Success)
    throw NumericalError("entropy: eigensolver failed");
  double s = 0.0;
  for (Eigen::Index i = 0; i < es.eigenvalues().size(); ++i) {
    double lam = es.eigenvalues()(i);
    if (lam < -1e-12)
      throw NumericalError("entropy: eigenvalue " + std::to_string(lam) +
                           " below tolerance");
    s -= xlog2x(std::max(lam, 0.0));
  }
  return s;
}

double mutual_information(const Eigen::MatrixXcd& rho4) {
  return entropy_2x2(marginal_a(rho4)) + entropy_2x2(marginal_b(rho4)) -
         von_neumann_entropy(rho4);
}

// ---------------------------------------------------------------------------
// negativity
// ---------------------------------------------------------------------------

double negativity(const TwoQubitState& s) {
  const Eigen::MatrixXcd& r = s.rho.mat();
  Eigen::Matrix4cd pt;
  for (int a = 0; a < 2; ++a)
    for (int ap = 0; ap < 2; ++ap)
      for (int b = 0; b < 2; ++b)
        for (int bp = 0; bp < 2; ++bp)
          pt(2 * a + b, 2 * ap + bp) = r(2 * a + bp, 2 * ap + b);
  const double tn = trace_norm_4x4_hermitian(pt);
  return clamp_nonneg(0.5 * (tn - 1.0), 1e-12);
}

double negativity_closed(const DoubletCoefficients& d, PairKind kind) {
  const double g1 = d.g(1), g2 = d.g(2), g3 = d.g(3), g4 = d.g(4), g5 = d.g(5);
  double a, dd, off;
  if (kind == PairKind::CenterCorner) {
    a = 3 * g1 * g1 + g2 * g2;
    dd = 3 * g4 * g4 + g5 * g5;
    off = g1 * g3 + 3 * g2 * g4;  // inner anti-diagonal entry
  } else {
    a = 2 * g1 * g1 + g3 * g3 + g4 * g4;
    dd = 2 * g2 * g2 + g4 * g4 + g5 * g5;
    off = g1 * g1 + g2 * g2 + 2 * g4 * g4;  // central entry
  }
  const double raw =
      0.5 * std::sqrt((a - dd) * (a - dd) + 4 * off * off) - 0.5 * (a + dd);
  return std::max(0.0, raw);
}

double negativity_x_closed(const TwoQubitState& s) {
  if (!s.x_structure)
    throw std::invalid_argument("negativity_x_closed: state is not X-shaped");
  const Eigen::MatrixXcd& r = s.rho.mat();
  const double a = std::real(r(0, 0)), b = std::real(r(1, 1));
  const double c = std::real(r(2, 2)), dd = std::real(r(3, 3));
  const double w = std::abs(r(0, 3)), z = std::abs(r(1, 2));
  const double outer =
      0.5 * std::sqrt((a - dd) * (a - dd) + 4 * z * z) - 0.5 * (a + dd);
  const double central =
      0.5 * std::sqrt((b - c) * (b - c) + 4 * w * w) - 0.5 * (b + c);
  return std::max(0.0, outer) + std::max(0.0, central);
}

// ---------------------------------------------------------------------------
// quantum discord
// ---------------------------------------------------------------------------

namespace {

// Average conditional entropy of A after a projective measurement on B along
// (theta, phi).
double conditional_entropy_b(const Eigen::MatrixXcd& r, double theta,
                             double phi) {
  double total = 0.0;
  for (int sign = 0; sign < 2; ++sign) {
    const Eigen::Matrix2cd p =
        sign == 0 ? projector_along(theta, phi)
                  : (Eigen::Matrix2cd::Identity() - projector_along(theta, phi))
                        .eval();
    Eigen::Matrix2cd m = Eigen::Matrix2cd::Zero();
    for (int a = 0; a < 2; ++a)
      for (int ap = 0; ap < 2; ++ap)
        for (int u = 0; u < 2; ++u)
          for (int v = 0; v < 2; ++v)
            m(a, ap) += r(2 * a + u, 2 * ap + v) * p(v, u);
    const double prob = std::real(m(0, 0) + m(1, 1));
    if (prob > 1e-14) total += prob * entropy_2x2(m / prob);
  }
  return total;
}

}  // namespace

DiscordResult quantum_discord(const TwoQubitState& s,
                              const DiscordOptions& opts) {
  const Eigen::MatrixXcd& r = s.rho.mat();
  const double s_b = entropy_2x2(marginal_b(r));
  const double s_ab = von_neumann_entropy(r);

  double best = std::numeric_limits<double>::infinity();
  double best_theta = 0.0, best_phi = 0.0;
  auto consider = [&](double theta, double phi) {
    const double c = conditional_entropy_b(r, theta, phi);
    if (c < best) {
      best = c;
      best_theta = theta;
      best_phi = phi;
    }
  };
  for (int i = 0; i < opts.grid_theta; ++i) {
    const double theta = kPi * i / (opts.grid_theta - 1);
    for (int k = 0; k < opts.grid_phi; ++k)
      consider(theta, 2.0 * kPi * k / opts.grid_phi);
  }
  // Two local grid zooms around the coarse winner (spacing /4 per stage) so
  // the grid stage alone lands within ~1e-5 of the basin bottom; the simplex
  // afterwards only polishes.
  double span_t = kPi / (opts.grid_theta - 1);
  double span_p = 2.0 * kPi / opts.grid_phi;
  for (int stage = 0; stage < 2; ++stage) {
    const double ct = best_theta, cp = best_phi;
    for (int i = -4; i <= 4; ++i)
      for (int k = -4; k <= 4; ++k)
        consider(ct + i * span_t / 4.0, cp + k * span_p / 4.0);
    span_t /= 4.0;
    span_p /= 4.0;
  }
  const double grid_value = clamp_nonneg(s_b - s_ab + best);

  const double dt = 0.5 * span_t;
  const double dp = 0.5 * span_p;
  Nm2dResult nm = nelder_mead_2d(
      [&](double th, double ph) { return conditional_entropy_b(r, th, ph); },
      best_theta, best_phi, dt, dp, opts.refine_tol, opts.max_refine_iters);

  DiscordResult out;
  out.grid_value = grid_value;
  out.value = clamp_nonneg(s_b - s_ab + std::min(best, nm.f));
  out.theta = nm.x;
  out.phi = nm.y;
  out.degraded = !nm.converged;
  return out;
}

// ---------------------------------------------------------------------------
// measurement-induced disturbance
// ---------------------------------------------------------------------------

namespace {

// Deterministic eigenbasis of a qubit marginal: near-maximally-mixed marginals
// fall back to the computational basis; otherwise eigenvectors with the
// largest component rotated to the positive real axis.
std::array<Eigen::Vector2cd, 2> marginal_basis(const Eigen::Matrix2cd& m) {
  Eigen::Matrix2cd dev = m - 0.5 * Eigen::Matrix2cd::Identity();
  if (dev.cwiseAbs().maxCoeff() < 1e-9)
    return {Eigen::Vector2cd(1, 0), Eigen::Vector2cd(0, 1)};
  Eigen::SelfAdjointEigenSolver<Eigen::Matrix2cd> es(m);
  std::array<Eigen::Vector2cd, 2> basis;
  for (int k = 0; k < 2; ++k) {
    Eigen::Vector2cd v = es.eigenvectors().col(k);
    const int lead = std::abs(v(0)) >= std::abs(v(1)) ? 0 : 1;
    v *= std::abs(v(lead)) / v(lead);
    basis[k] = v;
  }
  return basis;
}

}  // namespace

double mid(const TwoQubitState& s) {
  const Eigen::MatrixXcd& r = s.rho.mat();
  const Eigen::Matrix2cd ma = marginal_a(r), mb = marginal_b(r);
  const auto basis_a = marginal_basis(ma);
  const auto basis_b = marginal_basis(mb);

  double p[2][2];
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j) {
      Eigen::Vector4cd ket;
      for (int a = 0; a < 2; ++a)
        for (int b = 0; b < 2; ++b)
          ket(2 * a + b) = basis_a[i](a) * basis_b[j](b);
      p[i][j] = std::max(0.0, std::real(ket.dot(r * ket)));
    }
  const double pa[2] = {p[0][0] + p[0][1], p[1][0] + p[1][1]};
  const double pb[2] = {p[0][0] + p[1][0], p[0][1] + p[1][1]};

  double i_cl = 0.0;
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j)
      if (p[i][j] > 1e-15 && pa[i] > 1e-15 && pb[j] > 1e-15)
        i_cl += p[i][j] * std::log2(p[i][j] / (pa[i] * pb[j]));

  return clamp_nonneg(mutual_information(r) - i_cl);
}

// ---------------------------------------------------------------------------
// measurement-induced nonlocality
// ---------------------------------------------------------------------------

double min_nonlocality_closed(const CorrelationVector& t, PairKind kind) {
  if (kind == PairKind::CenterCorner)
    return std::max({std::abs(t.c1), std::abs(t.c2), std::abs(t.c3)});
  return std::max(std::abs(t.c1), std::abs(t.c2));
}

namespace {

// Trace-norm disturbance of a projective measurement on party A along n.
double min_disturbance(const Eigen::MatrixXcd& r, double theta, double phi) {
  const Eigen::Matrix2cd p0 = projector_along(theta, phi);
  const Eigen::Matrix2cd p1 = Eigen::Matrix2cd::Identity() - p0;
  Eigen::Matrix4cd post = Eigen::Matrix4cd::Zero();
  for (const Eigen::Matrix2cd& pk : {p0, p1}) {
    Eigen::Matrix4cd k = Eigen::Matrix4cd::Zero();
    for (int a = 0; a < 2; ++a)
      for (int ap = 0; ap < 2; ++ap)
        for (int b = 0; b < 2; ++b)
          k(2 * a + b, 2 * ap + b) = pk(a, ap);
    post += k * r * k;
  }
  return trace_norm_4x4_hermitian(Eigen::Matrix4cd(r) - post);
}

}  // namespace

double min_nonlocality_numeric(const TwoQubitState& s) {
  const Eigen::MatrixXcd& r = s.rho.mat();
  const Eigen::Vector3d a = bloch_vector(marginal_a(r));
  if (a.norm() > 1e-9) {
    const double theta = std::acos(std::clamp(a(2) / a.norm(), -1.0, 1.0));
    const double phi = std::atan2(a(1), a(0));
    return min_disturbance(r, theta, phi);
  }
  // Degenerate marginal: every basis preserves it; maximize the disturbance.
  const int nt = 33, np = 32;
  double best = -1.0, bt = 0.0, bp = 0.0;
  for (int i = 0; i < nt; ++i) {
    const double theta = kPi * i / (nt - 1);
    for (int k = 0; k < np; ++k) {
      const double phi = 2.0 * kPi * k / np;
      const double d = min_disturbance(r, theta, phi);
      if (d > best) {
        best = d;
        bt = theta;
        bp = phi;
      }
    }
  }
  Nm2dResult nm = nelder_mead_2d(
      [&](double th, double ph) { return -min_disturbance(r, th, ph); }, bt,
      bp, 0.5 * kPi / (nt - 1), kPi / np, 1e-12, 300);
  return std::max(best, -nm.f);
}

// ---------------------------------------------------------------------------
// geometric discord
// ---------------------------------------------------------------------------

double gqd_closed(const CorrelationVector& t) {
  const double c1s = t.c1 * t.c1, c2s = t.c2 * t.c2;
  const double czz = t.c3 * t.c3 + t.za * t.za;
  const double lam_max = std::max({c1s, c2s, czz});
  return 0.25 * (c1s + c2s + czz - lam_max);
}

double gqd_generic(const TwoQubitState& s) {
  const Eigen::MatrixXcd& r = s.rho.mat();
  const Eigen::Vector3d a = bloch_vector(marginal_a(r));
  const Eigen::Matrix3d t = correlation_matrix(r);
  const Eigen::Matrix3d k = a * a.transpose() + t * t.transpose();
  Eigen::SelfAdjointEigenSolver<Eigen::Matrix3d> es(k, Eigen::EigenvaluesOnly);
  const double lam_max = es.eigenvalues()(2);
  return clamp_nonneg(
      0.25 * (a.squaredNorm() + t.squaredNorm() - lam_max), 1e-12);
}

// ---------------------------------------------------------------------------
// CHSH
// ---------------------------------------------------------------------------

double chsh_max(const TwoQubitState& s) {
  const Eigen::Matrix3d t = correlation_matrix(s.rho.mat());
  Eigen::SelfAdjointEigenSolver<Eigen::Matrix3d> es(t.transpose() * t,
                                                    Eigen::EigenvaluesOnly);
  return 2.0 * std::sqrt(std::max(0.0, es.eigenvalues()(1) +
                                           es.eigenvalues()(2)));
}

double chsh_closed(const CorrelationVector& t) {
  const double a = t.c1 * t.c1, b = t.c2 * t.c2, c = t.c3 * t.c3;
  const double top_two = a + b + c - std::min({a, b, c});
  return 2.0 * std::sqrt(top_two);
}

// ---------------------------------------------------------------------------
// concurrence
// ---------------------------------------------------------------------------

double concurrence(const TwoQubitState& s) {
  const Eigen::MatrixXcd& r = s.rho.mat();
  Eigen::Matrix4cd yy = Eigen::Matrix4cd::Zero();
  yy(0, 3) = -1;
  yy(1, 2) = 1;
  yy(2, 1) = 1;
  yy(3, 0) = -1;
  const Eigen::Matrix4cd rr = r * yy * r.conjugate() * yy;
  Eigen::ComplexEigenSolver<Eigen::Matrix4cd> es(rr, false);
  if (es.info() != Eigen::Success)
    throw NumericalError("concurrence: eigensolver failed");
  std::array<double, 4> lam{};
  for (int i = 0; i < 4; ++i) {
    const Complex ev = es.eigenvalues()(i);
    if (std::abs(ev.imag()) > 1e-8)
      throw NumericalError("concurrence: complex spin-flip eigenvalue");
    if (ev.real() < -1e-10)
      throw NumericalError("concurrence: negative spin-flip eigenvalue " +
                           std::to_string(ev.real()));
    lam[static_cast<size_t>(i)] = std::sqrt(std::max(0.0, ev.real()));
  }
  std::sort(lam.begin(), lam.end(), std::greater<>());
  return std::max(0.0, lam[0] - lam[1] - lam[2] - lam[3]);
}

double concurrence_x_closed(const TwoQubitState& s) {
  if (!s.x_structure)
    throw std::invalid_argument("concurrence_x_closed: state is not X-shaped");
  const Eigen::MatrixXcd& r = s.rho.mat();
  const double r00 = std::real(r(0, 0)), r11 = std::real(r(1, 1));
  const double r22 = std::real(r(2, 2)), r33 = std::real(r(3, 3));
  const double w = std::abs(r(0, 3)), z = std::abs(r(1, 2));
  return 2.0 * std::max({0.0, w - std::sqrt(std::max(0.0, r11 * r22)),
                         z - std::sqrt(std::max(0.0, r00 * r33))});
}

// ---------------------------------------------------------------------------
// panel
// ---------------------------------------------------------------------------

namespace {

double now_ms() {
  using clock = std::chrono::steady_clock;
  return std::chrono::duration<double, std::milli>(
             clock::now().time_since_epoch())
      .count();
}

void record_dual(PanelEntry& e, double primary, double check, double tol,
                 Provenance primary_kind) {
  e.value = primary;
  e.dual_checked = true;
  e.check_value = check;
  e.dual_delta = std::abs(primary - check);
  e.dual_tolerance = tol;
  e.provenance =
      e.dual_delta <= tol ? Provenance::BothAgree : primary_kind;
}

MeasurePanel build_panel(const TwoQubitState& s,
                         const DoubletCoefficients* d, PairKind kind,
                         const DiscordOptions& opts) {
  MeasurePanel out;
  const bool closed_ok = d != nullptr;
  CorrelationVector t{};
  if (closed_ok)
    t = correlation_vector(s, kind, *d);

  auto& entry = out.entries;
  auto timed = [&](Measure m, auto&& body) {
    PanelEntry& e = entry[static_cast<int>(m)];
    const double t0 = now_ms();
    body(e);
    e.wall_ms = now_ms() - t0;
  };

  timed(Measure::Ne, [&](PanelEntry& e) {
    const double gen = negativity(s);
    if (closed_ok)
      record_dual(e, gen, negativity_closed(*d, kind), 1e-9,
                  Provenance::Generic);
    else
      e.value = gen;
  });

  timed(Measure::Qd, [&](PanelEntry& e) {
    const DiscordResult qd = quantum_discord(s, opts);
    e.value = qd.value;
    e.degraded = qd.degraded;
    e.provenance = Provenance::Generic;
  });

  timed(Measure::Mid, [&](PanelEntry& e) {
    e.value = mid(s);
    e.provenance = Provenance::Generic;
  });

  timed(Measure::Min, [&](PanelEntry& e) {
    const double num = min_nonlocality_numeric(s);
    if (closed_ok)
      record_dual(e, min_nonlocality_closed(t, kind), num, 1e-8,
                  Provenance::ClosedForm);
    else {
      e.value = num;
      e.provenance = Provenance::Generic;
    }
  });

  timed(Measure::Gqd, [&](PanelEntry& e) {
    const double gen = gqd_generic(s);
    if (closed_ok)
      record_dual(e, gen, gqd_closed(t), 1e-9, Provenance::Generic);
    else
      e.value = gen;
  });

  timed(Measure::Chsh, [&](PanelEntry& e) {
    const double mat = chsh_max(s);
    if (closed_ok)
      record_dual(e, mat, chsh_closed(t), 1e-9, Provenance::Generic);
    else
      e.value = mat;
  });

  timed(Measure::Conc, [&](PanelEntry& e) {
    const double gen = concurrence(s);
    if (closed_ok && s.x_structure)
      record_dual(e, gen, concurrence_x_closed(s), 1e-9, Provenance::Generic);
    else
      e.value = gen;
  });

  return out;
}

}  // namespace

MeasurePanel panel(const DoubletCoefficients& d, PairKind kind,
                   const DiscordOptions& opts) {
  const int site_a = kind == PairKind::CenterCorner ? 1 : 2;
  const int site_b = kind == PairKind::CenterCorner ? 2 : 3;
  const TwoQubitState s = pair_state(d, site_a, site_b);
  return build_panel(s, &d, kind, opts);
}

MeasurePanel panel_generic(const TwoQubitState& s, const DiscordOptions& opts) {
  return build_panel(s, nullptr, PairKind::CenterCorner, opts);
}

std::optional<std::string> panel_range_violation(const MeasurePanel& p) {
  struct Range {
    Measure m;
    double lo, hi;
  };
  static const std::array<Range, 7> ranges = {
      Range{Measure::Ne, 0.0, 0.5 + 1e-9},
      Range{Measure::Qd, 0.0, 1.0 + 1e-9},
      Range{Measure::Mid, 0.0, 2.0 + 1e-9},
      Range{Measure::Min, 0.0, 1.0 + 1e-6},
      Range{Measure::Gqd, 0.0, 0.5 + 1e-9},
      Range{Measure::Chsh, 0.0, 2.0 * 1.4142135623730951 + 1e-9},
      Range{Measure::Conc, 0.0, 1.0 + 1e-9}};
  for (const Range& r : ranges) {
    const double v = p.at(r.m).value;
    if (!std::isfinite(v) || v < r.lo || v > r.hi)
      return std::string(measure_name(r.m)) + " = " +
             std::to_string(v) + " outside [" + std::to_string(r.lo) + ", " +
             std::to_string(r.hi) + "]";
  }
  return std::nullopt;
}

}  // namespace xyqrg

#include "xyqrg/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace xyqrg {

namespace {

constexpr double kNan = std::numeric_limits<double>::quiet_NaN();

int pair_site_a(PairKind kind) {
  return kind == PairKind::CenterCorner ? 1 : 2;
}
int pair_site_b(PairKind kind) {
  return kind == PairKind::CenterCorner ? 2 : 3;
}

// Golden-section maximization with a deterministic evaluation sequence.
template <typename F>
double golden_max(F&& f, double a, double b, double xatol, double& fbest) {
  const double invphi = 0.6180339887498949;
  double x1 = b - invphi * (b - a);
  double x2 = a + invphi * (b - a);
  double f1 = f(x1), f2 = f(x2);
  while (b - a > xatol) {
    if (f1 >= f2) {
      b = x2;
      x2 = x1;
      f2 = f1;
      x1 = b - invphi * (b - a);
      f1 = f(x1);
    } else {
      a = x1;
      x1 = x2;
      f1 = f2;
      x2 = a + invphi * (b - a);
      f2 = f(x2);
    }
  }
  if (f1 >= f2) {
    fbest = f1;
    return x1;
  }
  fbest = f2;
  return x2;
}

}  // namespace

// ---------------------------------------------------------------------------
// pointwise evaluation
// ---------------------------------------------------------------------------

double measure_at(Measure m, PairKind kind, double gamma0, int step,
                  const EvalContext& ctx) {
  const FlowTrace trace = run_flow({ctx.j0, gamma0}, step);
  if (static_cast<int>(trace.steps.size()) <= step) return kNan;
  const DoubletCoefficients& d = trace.steps[static_cast<size_t>(step)].coeffs;
  const TwoQubitState s = pair_state(d, pair_site_a(kind), pair_site_b(kind));
  switch (m) {
    case Measure::Ne:
      return negativity(s);
    case Measure::Qd:
      return quantum_discord(s, ctx.discord).value;
    case Measure::Mid:
      return mid(s);
    case Measure::Min:
      return min_nonlocality_closed(correlation_vector(s, kind, d), kind);
    case Measure::Gqd:
      return gqd_generic(s);
    case Measure::Chsh:
      return chsh_max(s);
    case Measure::Conc:
      // flow states are X-shaped; the closed form avoids the non-Hermitian
      // eigensolve, whose ~1e-9 noise would dominate finite differences
      return s.x_structure ? concurrence_x_closed(s) : concurrence(s);
  }
  return kNan;
}

// ---------------------------------------------------------------------------
// derivative curves
// ---------------------------------------------------------------------------

namespace {

double central_difference(Measure m, PairKind kind, int step, double gamma,
                          double h, const EvalContext& ctx) {
  const double hi = measure_at(m, kind, gamma + h, step, ctx);
  const double lo = measure_at(m, kind, gamma - h, step, ctx);
  return (hi - lo) / (2.0 * h);
}

}  // namespace

DerivativeCurve derivative_curve(Measure m, PairKind kind, int step,
                                 const std::vector<double>& gammas,
                                 double fd_step, const EvalContext& ctx) {
  DerivativeCurve out;
  out.measure = m;
  out.kind = kind;
  out.step = step;
  out.fd_step = fd_step;
  out.gamma = gammas;
  out.value.resize(gammas.size(), kNan);
  out.singular.resize(gammas.size(), false);
  for (size_t i = 0; i < gammas.size(); ++i) {
    const double g = gammas[i];
    // A stencil straddling (or grazing) the flow's antisymmetry point sees
    // the derivative blow-up; flag instead of reporting a polluted value.
    if (std::abs(g) < 2.0 * fd_step) {
      out.singular[i] = true;
      continue;
    }
    const double v = central_difference(m, kind, step, g, fd_step, ctx);
    if (!std::isfinite(v)) {
      out.singular[i] = true;
      continue;
    }
    out.value[i] = v;
  }
  return out;
}

// ---------------------------------------------------------------------------
// extrema
// ---------------------------------------------------------------------------

ExtremumResult extremum(const DerivativeCurve& curve, const EvalContext& ctx) {
  ExtremumResult out;
  out.fd_step = curve.fd_step;
  int imax = -1, imin = -1;
  for (size_t i = 0; i < curve.gamma.size(); ++i) {
    if (curve.singular[i] || !std::isfinite(curve.value[i])) continue;
    if (imax < 0 || curve.value[i] > curve.value[static_cast<size_t>(imax)])
      imax = static_cast<int>(i);
    if (imin < 0 || curve.value[i] < curve.value[static_cast<size_t>(imin)])
      imin = static_cast<int>(i);
  }
  if (imax < 0) return out;

  auto usable = [&](int i) {
    return i >= 0 && i < static_cast<int>(curve.gamma.size()) &&
           !curve.singular[static_cast<size_t>(i)];
  };
  auto fd = [&](double g, double s) {
    return s * central_difference(curve.measure, curve.kind, curve.step, g,
                                  curve.fd_step, ctx);
  };

  auto refine = [&](int i, double s, double& gamma_out, double& value_out,
                    bool& bracketed) {
    gamma_out = curve.gamma[static_cast<size_t>(i)];
    value_out = curve.value[static_cast<size_t>(i)];
    bracketed = usable(i - 1) && usable(i + 1);
    if (!bracketed) return;
    double fbest = 0.0;
    const double g = golden_max([&](double x) { return fd(x, s); },
                                curve.gamma[static_cast<size_t>(i - 1)],
                                curve.gamma[static_cast<size_t>(i + 1)], 1e-6,
                                fbest);
    gamma_out = g;
    value_out = s * fbest;
  };

  refine(imax, +1.0, out.gamma_max, out.value_max, out.bracketed_max);
  refine(imin, -1.0, out.gamma_min, out.value_min, out.bracketed_min);
  return out;
}

ExtremumResult extremum_adaptive(Measure m, PairKind kind, int step,
                                 double fd_step0, const EvalContext& ctx) {
  struct SidePeak {
    double gamma = 0.0, value = 0.0, h = 0.0;
    bool interior = false;
    bool ok = false;
  };

  auto step_for = [&](double s) {
    return std::min(fd_step0, std::max(s / 50.0, 1e-9));
  };

  auto scan_side = [&](double sign) {
    SidePeak peak;
    double lo = 1e-8, hi = 0.5;
    const int n = 24;
    int best_i = -1;
    std::vector<double> s(n), mag(n);
    for (int round = 0; round < 10; ++round) {
      const double ratio = std::pow(hi / lo, 1.0 / (n - 1));
      for (int i = 0; i < n; ++i) {
        s[static_cast<size_t>(i)] = lo * std::pow(ratio, i);
        const double si = s[static_cast<size_t>(i)];
        const double v = central_difference(m, kind, step, sign * si,
                                            step_for(si), ctx);
        mag[static_cast<size_t>(i)] = std::isfinite(v) ? std::abs(v) : -1.0;
      }
      best_i = static_cast<int>(std::distance(
          mag.begin(), std::max_element(mag.begin(), mag.end())));
      if (mag[static_cast<size_t>(best_i)] < 0.0) return peak;  // all bad
      lo = s[static_cast<size_t>(std::max(best_i - 1, 0))];
      hi = s[static_cast<size_t>(std::min(best_i + 1, n - 1))];
      if (hi / lo < 1.02) break;
    }
    const double s_star = s[static_cast<size_t>(best_i)];
    const double h = step_for(s_star);
    double fbest = 0.0;
    const double g = golden_max(
        [&](double x) {
          const double v = central_difference(m, kind, step, sign * x, h, ctx);
          return std::isfinite(v) ? std::abs(v)
                                  : -std::numeric_limits<double>::infinity();
        },
        lo, hi, std::max(s_star * 1e-4, 1e-12), fbest);
    peak.gamma = sign * g;
    peak.value = central_difference(m, kind, step, sign * g, h, ctx);
    peak.h = h;
    peak.interior = best_i > 0 && best_i < n - 1;
    peak.ok = std::isfinite(peak.value);
    return peak;
  };

  const SidePeak plus = scan_side(+1.0);
  const SidePeak minus = scan_side(-1.0);

  ExtremumResult out;
  out.fd_step = plus.ok ? plus.h : minus.h;
  if (!plus.ok && !minus.ok) return out;
  // The derivative is odd across gamma0 = 0, so one side carries the maximum
  // and the other the minimum; assign by value.
  SidePeak hi_side = plus, lo_side = minus;
  if (!plus.ok || (minus.ok && minus.value > plus.value)) {
    hi_side = minus;
    lo_side = plus;
  }
  if (hi_side.ok) {
    out.gamma_max = hi_side.gamma;
    out.value_max = hi_side.value;
    out.bracketed_max = hi_side.interior;
  }
  if (lo_side.ok) {
    out.gamma_min = lo_side.gamma;
    out.value_min = lo_side.value;
    out.bracketed_min = lo_side.interior;
    out.fd_step = hi_side.ok ? hi_side.h : lo_side.h;
  }
  return out;
}

// ---------------------------------------------------------------------------
// scaling fit
// ---------------------------------------------------------------------------

ScalingFit scaling_fit(const std::vector<ScalingPoint>& points) {
  std::vector<double> x, y;
  for (const ScalingPoint& p : points) {
    if (!p.finite || !std::isfinite(p.log_amp) || !std::isfinite(p.log_n))
      continue;
    x.push_back(p.log_n);
    y.push_back(p.log_amp);
  }
  const int n = static_cast<int>(x.size());
  if (n < 3)
    throw InsufficientData("scaling fit needs at least 3 finite points, got " +
                           std::to_string(n));
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (int i = 0; i < n; ++i) {
    sx += x[static_cast<size_t>(i)];
    sy += y[static_cast<size_t>(i)];
    sxx += x[static_cast<size_t>(i)] * x[static_cast<size_t>(i)];
    sxy += x[static_cast<size_t>(i)] * y[static_cast<size_t>(i)];
  }
  const double det = n * sxx - sx * sx;
  if (std::abs(det) < 1e-30)
    throw InsufficientData("scaling fit abscissae are degenerate");
  ScalingFit fit;
  fit.n_points = n;
  fit.slope = (n * sxy - sx * sy) / det;
  fit.intercept = (sy - fit.slope * sx) / n;
  double ss_res = 0, ss_tot = 0;
  const double ybar = sy / n;
  for (int i = 0; i < n; ++i) {
    const double yi = y[static_cast<size_t>(i)];
    const double fi =
        fit.intercept + fit.slope * x[static_cast<size_t>(i)];
    ss_res += (yi - fi) * (yi - fi);
    ss_tot += (yi - ybar) * (yi - ybar);
  }
  fit.r2 = ss_tot < 1e-30 ? (ss_res < 1e-30 ? 1.0 : 0.0)
                          : 1.0 - ss_res / ss_tot;
  return fit;
}

// ---------------------------------------------------------------------------
// monogamy
// ---------------------------------------------------------------------------

namespace {

double tangle_with_rest(const DensityMatrix& site) {
  const double det = std::real(site.mat()(0, 0) * site.mat()(1, 1) -
                               site.mat()(0, 1) * site.mat()(1, 0));
  if (det < -1e-12)
    throw NumericalError("monogamy: negative single-site determinant");
  return 4.0 * std::max(0.0, det);
}

}  // namespace

MonogamyConcurrence monogamy_concurrence(const DoubletCoefficients& d) {
  const DensityMatrix psi = ground_state(d);
  MonogamyConcurrence out;
  out.c1_rest_sq = tangle_with_rest(psi.partial_trace({1}));
  out.c2_rest_sq = tangle_with_rest(psi.partial_trace({2}));

  const std::array<int, 4> from1 = {2, 3, 4, 5};
  const std::array<int, 4> from2 = {1, 3, 4, 5};
  double sum1 = 0.0, sum2 = 0.0;
  for (int k = 0; k < 4; ++k) {
    const double c1 = concurrence(
        TwoQubitState(psi.partial_trace({1, from1[static_cast<size_t>(k)]})));
    const double c2 = concurrence(
        TwoQubitState(psi.partial_trace({2, from2[static_cast<size_t>(k)]})));
    out.c1j[static_cast<size_t>(k)] = c1;
    out.c2j[static_cast<size_t>(k)] = c2;
    sum1 += c1 * c1;
    sum2 += c2 * c2;
  }
  out.delta1 = out.c1_rest_sq - sum1;
  out.delta2 = out.c2_rest_sq - sum2;
  return out;
}

MonogamyDiscord monogamy_discord(const DoubletCoefficients& d,
                                 const DiscordOptions& opts) {
  const DensityMatrix psi = ground_state(d);
  MonogamyDiscord out;
  const double s1 = von_neumann_entropy(psi.partial_trace({1}).mat());
  const double s2 = von_neumann_entropy(psi.partial_trace({2}).mat());

  double sum1 = 0.0, sum2 = 0.0;
  for (int j : {2, 3, 4, 5}) {
    const DiscordResult q =
        quantum_discord(TwoQubitState(psi.partial_trace({1, j})), opts);
    out.degraded = out.degraded || q.degraded;
    sum1 += q.value * q.value;
  }
  for (int j : {1, 3, 4, 5}) {
    const DiscordResult q =
        quantum_discord(TwoQubitState(psi.partial_trace({2, j})), opts);
    out.degraded = out.degraded || q.degraded;
    sum2 += q.value * q.value;
  }
  out.delta1 = s1 * s1 - sum1;
  out.delta2 = s2 * s2 - sum2;
  return out;
}

}  // namespace xyqrg

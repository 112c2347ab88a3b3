// Flow-resolved analysis: measures as functions of the bare anisotropy,
// finite-difference derivative curves, extremum location/refinement, the
// log-log finite-size scaling fit, and the two monogamy scores on the
// five-site block.
#pragma once

#include <vector>

#include "xyqrg/measures.hpp"
#include "xyqrg/qrg.hpp"

namespace xyqrg {

struct EvalContext {
  double j0 = 1.0;
  DiscordOptions discord{};
};

// Thrown when a fit has fewer than three finite points.
struct InsufficientData : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Measure value on the renormalized pair state after `step` QRG iterations
// starting from (j0, gamma0).  Uses each measure's primary path.
double measure_at(Measure m, PairKind kind, double gamma0, int step,
                  const EvalContext& ctx);

// ---------------------------------------------------------------------------
// derivative curves
// ---------------------------------------------------------------------------

struct DerivativeCurve {
  Measure measure;
  PairKind kind;
  int step;
  double fd_step;
  std::vector<double> gamma;
  std::vector<double> value;          // central difference dM/dgamma0
  std::vector<bool> singular;         // stencil straddles 0 or non-finite
};

DerivativeCurve derivative_curve(Measure m, PairKind kind, int step,
                                 const std::vector<double>& gammas,
                                 double fd_step, const EvalContext& ctx);

// ---------------------------------------------------------------------------
// extrema
// ---------------------------------------------------------------------------

struct ExtremumResult {
  double gamma_max = 0.0, value_max = 0.0;
  double gamma_min = 0.0, value_min = 0.0;
  bool bracketed_max = false;   // interior grid extremum, golden-refined
  bool bracketed_min = false;
  double fd_step = 0.0;
};

// Grid argmax/argmin over non-singular points with golden-section refinement
// of interior extrema (absolute tolerance 1e-6 in gamma).
ExtremumResult extremum(const DerivativeCurve& curve, const EvalContext& ctx);

// Adaptive variant for the scaling pipeline: zooms a geometric grid onto the
// derivative peak on each side of gamma0 = 0 and shrinks the finite-difference
// step with the peak location so successive QRG steps stay resolved.
ExtremumResult extremum_adaptive(Measure m, PairKind kind, int step,
                                 double fd_step0, const EvalContext& ctx);

// ---------------------------------------------------------------------------
// scaling fit
// ---------------------------------------------------------------------------

struct ScalingPoint {
  int step = 0;
  double log_n = 0.0;       // ln of effective site count
  double log_amp = 0.0;     // ln |derivative extremum|
  double gamma_peak = 0.0;
  double fd_step = 0.0;
  bool finite = true;
};

struct ScalingFit {
  double slope = 0.0;       // the finite-size scaling exponent estimate
  double intercept = 0.0;
  double r2 = 0.0;
  int n_points = 0;
};

// Least-squares line through the finite points; throws InsufficientData when
// fewer than three remain.
ScalingFit scaling_fit(const std::vector<ScalingPoint>& points);

// ---------------------------------------------------------------------------
// monogamy
// ---------------------------------------------------------------------------

struct MonogamyConcurrence {
  double delta1 = 0.0;        // 4 det rho_1 - sum_j C(1,j)^2
  double delta2 = 0.0;        // 4 det rho_2 - sum_{j != 2} C(2,j)^2
  double c1_rest_sq = 0.0;    // 4 det rho_1
  double c2_rest_sq = 0.0;
  std::array<double, 4> c1j{};  // C(1,2), C(1,3), C(1,4), C(1,5)
  std::array<double, 4> c2j{};  // C(2,1), C(2,3), C(2,4), C(2,5)
};

struct MonogamyDiscord {
  double delta1 = 0.0;        // S(rho_1)^2 - sum_j QD(1,j)^2
  double delta2 = 0.0;
  bool degraded = false;      // any discord refinement hit its cap
};

// Pair states are built with the monogamy center as the first party; discord
// is measured on the second (outer) party.
MonogamyConcurrence monogamy_concurrence(const DoubletCoefficients& d);
MonogamyDiscord monogamy_discord(const DoubletCoefficients& d,
                                 const DiscordOptions& opts = {});

}  // namespace xyqrg

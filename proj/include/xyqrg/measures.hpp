// Seven correlation/nonlocality measures on two-qubit states, each with a
// closed-form path (valid for the X-shaped flow states) and a generic
// definition-level path, plus the dual-path panel that evaluates both and
// records provenance.
//
// Conventions: party A is the first tensor factor.  Quantum discord measures
// on party B, MIN measures on party A (constrained to preserve its marginal),
// GQD measures on party A, and chsh_max is reported in the standard
// normalization where the classical bound is 2 and the quantum maximum 2*sqrt2.
#pragma once

#include <array>
#include <optional>
#include <vector>

#include "xyqrg/states.hpp"

namespace xyqrg {

// ---------------------------------------------------------------------------
// measure identifiers
// ---------------------------------------------------------------------------

enum class Measure { Ne, Qd, Mid, Min, Gqd, Chsh, Conc };

constexpr std::array<Measure, 7> all_measures() {
  return {Measure::Ne,  Measure::Qd,   Measure::Mid, Measure::Min,
          Measure::Gqd, Measure::Chsh, Measure::Conc};
}
inline std::vector<Measure> default_measure_list() {
  const std::array<Measure, 7> a = all_measures();
  return std::vector<Measure>(a.begin(), a.end());
}
const char* measure_name(Measure m);                     // "ne".."c"
std::optional<Measure> measure_from_name(const std::string& name);

enum class Provenance { ClosedForm, Generic, BothAgree };
const char* provenance_name(Provenance p, bool degraded);

// ---------------------------------------------------------------------------
// entropies
// ---------------------------------------------------------------------------

// Base-2 von Neumann entropy; eigenvalues inside [-1e-12, 0) are clamped.
double von_neumann_entropy(const Eigen::MatrixXcd& rho);

// S(A) + S(B) - S(AB) for a two-qubit state.
double mutual_information(const Eigen::MatrixXcd& rho4);

// ---------------------------------------------------------------------------
// negativity
// ---------------------------------------------------------------------------

// Generic: (||rho^{T_B}||_1 - 1)/2, clamped to 0 within 1e-12.
double negativity(const TwoQubitState& s);

// Closed form in the class amplitudes (outer anti-diagonal block of the
// partial transpose); negative raw values are clamped to 0.  The central
// block never dips below zero on flow states (validated numerically), so the
// outer block alone is exact there.
double negativity_closed(const DoubletCoefficients& d, PairKind kind);

// Closed form for an arbitrary X state, summing the deficits of both
// partial-transpose blocks; requires s.x_structure.
double negativity_x_closed(const TwoQubitState& s);

// ---------------------------------------------------------------------------
// quantum discord (projective measurement on party B)
// ---------------------------------------------------------------------------

struct DiscordOptions {
  int grid_theta = 64;      // inclusive [0, pi]
  int grid_phi = 64;        // periodic [0, 2pi)
  double refine_tol = 1e-10;
  int max_refine_iters = 200;
};

struct DiscordResult {
  double value;       // refined
  double grid_value;  // before simplex refinement
  double theta, phi;  // optimal measurement direction
  bool degraded;      // refinement hit the iteration cap
};

DiscordResult quantum_discord(const TwoQubitState& s,
                              const DiscordOptions& opts = {});

// ---------------------------------------------------------------------------
// measurement-induced disturbance
// ---------------------------------------------------------------------------

// Dephasing in the marginal eigenbases; a marginal within 1e-9 of I/2 is
// dephased in the computational basis.  Always >= 0 up to clamping.
double mid(const TwoQubitState& s);

// ---------------------------------------------------------------------------
// measurement-induced nonlocality (measurement on party A)
// ---------------------------------------------------------------------------

double min_nonlocality_closed(const CorrelationVector& t, PairKind kind);

// Constrained search: if party A's Bloch vector is nonzero the measurement
// basis is pinned to it; otherwise the disturbance is maximized over all
// directions.
double min_nonlocality_numeric(const TwoQubitState& s);

// ---------------------------------------------------------------------------
// geometric discord (measurement on party A)
// ---------------------------------------------------------------------------

double gqd_closed(const CorrelationVector& t);
double gqd_generic(const TwoQubitState& s);

// ---------------------------------------------------------------------------
// CHSH maximum
// ---------------------------------------------------------------------------

// 2*sqrt(sum of the two largest eigenvalues of T^t T).
double chsh_max(const TwoQubitState& s);
// Same quantity from the closed-form correlation vector of an X state.
double chsh_closed(const CorrelationVector& t);

// ---------------------------------------------------------------------------
// concurrence
// ---------------------------------------------------------------------------

// Spin-flip construction: descending square roots of the eigenvalues of
// rho * (sy(x)sy) conj(rho) (sy(x)sy); eigenvalues below -1e-10 are an error.
double concurrence(const TwoQubitState& s);
// X-state closed form; requires s.x_structure.
double concurrence_x_closed(const TwoQubitState& s);

// ---------------------------------------------------------------------------
// panel
// ---------------------------------------------------------------------------

struct PanelEntry {
  double value = 0.0;
  Provenance provenance = Provenance::Generic;
  bool degraded = false;
  bool dual_checked = false;
  double dual_delta = 0.0;      // |primary - check| when dual_checked
  double dual_tolerance = 0.0;
  double check_value = 0.0;
  double wall_ms = 0.0;
};

struct MeasurePanel {
  std::array<PanelEntry, 7> entries;  // indexed by Measure
  const PanelEntry& at(Measure m) const {
    return entries[static_cast<int>(m)];
  }
};

// Dual-path panel for a flow state: evaluates closed and generic paths where
// both exist, reports the authoritative value, and records disagreements.
MeasurePanel panel(const DoubletCoefficients& d, PairKind kind,
                   const DiscordOptions& opts = {});

// Generic-only panel for arbitrary two-qubit states (property tests).
MeasurePanel panel_generic(const TwoQubitState& s,
                           const DiscordOptions& opts = {});

// Range invariants shared by the self-check command and the test suites:
// ne in [0, 1/2], qd in [0, 1], mid in [0, 2], min in [0, 1], gqd in [0, 1/2],
// chsh in [0, 2*sqrt(2)], concurrence in [0, 1] (all with small slack).
// Returns a description of the first violation, or nullopt when clean.
std::optional<std::string> panel_range_violation(const MeasurePanel& p);

}  // namespace xyqrg

// Reduced states of the block ground state: the full 32x32 ground projector,
// the two distinguished two-qubit states (center-corner and corner-corner),
// their closed forms, correlation vectors, and single-site marginals.
//
// The partial-trace route is the authoritative construction; the closed forms
// exist to be validated against it and to feed the closed-form measures.
#pragma once

#include "xyqrg/dense.hpp"
#include "xyqrg/qrg.hpp"

namespace xyqrg {

// Which two-qubit reduced state of the block: center-corner is rho_{12},
// corner-corner is rho_{23}.  By the fourfold corner symmetry every
// center-corner pair is equivalent, as is every adjacent corner pair.
enum class PairKind { CenterCorner, CornerCorner };

const char* pair_name(PairKind k);  // "rho12" / "rho23"

struct TwoQubitState {
  DensityMatrix rho;
  bool x_structure;  // all entries off the diagonal/anti-diagonal < 1e-12

  explicit TwoQubitState(DensityMatrix r);
};

// |phi0><phi0| on the block register, assembled from the odd-sector class
// amplitudes g1..g5.
DensityMatrix ground_state(const DoubletCoefficients& d);

// Authoritative reduced pair state via partial trace of ground_state; the
// (site_a, site_b) order fixes the factor order.
TwoQubitState pair_state(const DoubletCoefficients& d, int site_a, int site_b);

// Closed-form X-state constructions in the class amplitudes.
TwoQubitState rho12_closed(const DoubletCoefficients& d);
TwoQubitState rho23_closed(const DoubletCoefficients& d);

// Diagonal correlation entries and local z terms:
//   c1 = <sx sx>, c2 = <sy sy>, c3 = <sz sz>,
//   za = <sz (x) I>, zb = <I (x) sz>.
struct CorrelationVector {
  double c1, c2, c3;
  double za, zb;
};

// Closed-form polynomials for the requested pair kind, cross-checked against
// the Pauli expectations of `s` within 1e-8 (throws NumericalError on
// mismatch).
CorrelationVector correlation_vector(const TwoQubitState& s, PairKind kind,
                                     const DoubletCoefficients& d);

// Pauli-expectation route, usable for any two-qubit state.
CorrelationVector correlation_vector_generic(const Eigen::MatrixXcd& rho4);

// Single-site marginals of the block ground state, index 0..4 = sites 1..5.
std::array<DensityMatrix, 5> single_site_states(const DoubletCoefficients& d);

}  // namespace xyqrg

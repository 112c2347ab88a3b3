// Quantum-renormalization-group core for the two-dimensional XY model on
// five-site cross blocks: block Hamiltonian, ground-doublet extraction with
// the ten-amplitude class pattern, the closed-form coupling flow, an
// independent two-block projector construction used as its oracle, and the
// iterated flow driver.
//
// Block register: sites {1,2,3,4,5}; site 1 is the central spin, sites 2..5
// the corners.  The ground doublet splits across the two spin-flip parity
// sectors (odd/even number of down spins); its amplitudes are constant within
// ten classes labeled by the central spin and the number of corner downs:
//   odd  sector |phi0>:  g1=(up,1) g2=(up,3) g3=(down,0) g4=(down,2) g5=(down,4)
//   even sector |phi0'>: g6=(up,0) g7=(up,2) g8=(up,4) g9=(down,1) g10=(down,3)
// with multiplicities 4,4,1,6,1 and 1,6,1,4,4.
#pragma once

#include <array>
#include <cstdint>
#include <vector>

#include "xyqrg/dense.hpp"

namespace xyqrg {

// Thrown when the renormalized-coupling denominator vanishes; the CLI maps
// this onto its own exit code.
struct FlowSingularity : NumericalError {
  explicit FlowSingularity(const std::string& msg) : NumericalError(msg) {}
};

struct CouplingPoint {
  double j;
  double gamma;
};

// ---------------------------------------------------------------------------
// domain types
// ---------------------------------------------------------------------------

struct DoubletCoefficients {
  std::array<double, 5> odd{};   // g1..g5
  std::array<double, 5> even{};  // g6..g10

  double g(int i) const;  // i in 1..10

  // norm identities: 4g1^2+4g2^2+g3^2+6g4^2+g5^2 = 1 and
  //                  g6^2+6g7^2+g8^2+4g9^2+4g10^2 = 1
  double odd_norm() const;
  double even_norm() const;
  void validate(double tol = 1e-9) const;  // throws NumericalError
};

// Raw doublet data: full 32-component eigenvectors (gauge-fixed) plus sector
// ground energies; extract_doublet() is the class-collapsed view of this.
struct BlockDoublet {
  Eigen::VectorXd phi_odd;   // |phi0>
  Eigen::VectorXd phi_even;  // |phi0'>
  double e_odd;
  double e_even;
  double max_class_spread;  // worst within-class amplitude deviation
  DoubletCoefficients coeffs;
};

struct FlowStep {
  int index;  // 0-based QRG step
  CouplingPoint coupling;
  DoubletCoefficients coeffs;
  std::int64_t n_sites;  // 5^(index+1)
};

struct FlowTrace {
  std::vector<FlowStep> steps;
  bool truncated = false;  // a non-finite coupling stopped the flow early
};

// ---------------------------------------------------------------------------
// operations
// ---------------------------------------------------------------------------

// (J/4) * sum_{m=2..5} [(1+gamma) sx_1 sx_m + (1-gamma) sy_1 sy_m], 32x32.
DenseOperator block_hamiltonian(CouplingPoint c);

// Sector-restricted diagonalization plus gauge fixing and class collapse.
// Requires J != 0; throws NumericalError if the two sector ground energies
// split by more than 1e-10*max(1,|E0|) or a class spread exceeds 1e-8.
BlockDoublet solve_block_doublet(CouplingPoint c);
DoubletCoefficients extract_doublet(CouplingPoint c);

// Closed-form renormalized couplings in the doublet amplitudes.  Throws
// FlowSingularity when the denominator polynomial is below 1e-14 in size.
CouplingPoint renormalize_closed(CouplingPoint c, const DoubletCoefficients& d);

// Independent oracle: builds the doublet projector for each of two blocks,
// projects the two-block Hamiltonian with one inter-block corner bond onto
// the four-dimensional doublet space, and reads the effective couplings off
// the two-qubit operator.  Throws NumericalError if the projected operator
// has any residual outside the sx-sx / sy-sy / identity span above 1e-9.
CouplingPoint renormalize_projector(CouplingPoint c);

// Iterates extract_doublet + renormalize_closed, recording every visited
// coupling with its coefficients.  n_steps in [0,12]; steps.size() is
// n_steps+1 unless truncated.
FlowTrace run_flow(CouplingPoint c0, int n_steps);

// Effective number of lattice sites after `step` coarse-grainings.
std::int64_t effective_sites(int step);

// ---------------------------------------------------------------------------
// basis bookkeeping shared with the states module
// ---------------------------------------------------------------------------

inline const std::vector<int>& block_register() {
  static const std::vector<int> reg{1, 2, 3, 4, 5};
  return reg;
}

// Class id (0..9) of a 5-bit basis index (bit 4 = site 1, bit value 1 = down),
// or -1 if the parity of the index does not match any class of that sector.
int doublet_class_of_index(int idx);

}  // namespace xyqrg

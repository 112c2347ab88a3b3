// Reduced-state constructions and their closed forms.
#include "xyqrg/states.hpp"

#include <cmath>

namespace xyqrg {

const char* pair_name(PairKind k) {
  return k == PairKind::CenterCorner ? "rho12" : "rho23";
}

namespace {

bool detect_x_structure(const Eigen::MatrixXcd& m) {
  double worst = 0.0;
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j) {
      if (i == j || i + j == 3) continue;
      worst = std::max(worst, std::abs(m(i, j)));
    }
  return worst < 1e-12;
}

}  // namespace

TwoQubitState::TwoQubitState(DensityMatrix r)
    : rho(std::move(r)), x_structure(false) {
  if (rho.dim() != 4)
    throw std::invalid_argument("TwoQubitState: need a 4x4 density matrix");
  x_structure = detect_x_structure(rho.mat());
}

// ---------------------------------------------------------------------------
// ground state and partial-trace pair states
// ---------------------------------------------------------------------------

DensityMatrix ground_state(const DoubletCoefficients& d) {
  d.validate();
  Eigen::VectorXcd phi = Eigen::VectorXcd::Zero(32);
  for (int idx = 0; idx < 32; ++idx) {
    const int cl = doublet_class_of_index(idx);
    if (cl >= 0 && cl < 5) phi(idx) = d.odd[cl];
  }
  Eigen::MatrixXcd rho = phi * phi.adjoint();
  return DensityMatrix(std::move(rho), block_register());
}

TwoQubitState pair_state(const DoubletCoefficients& d, int site_a,
                         int site_b) {
  return TwoQubitState(ground_state(d).partial_trace({site_a, site_b}));
}

// ---------------------------------------------------------------------------
// closed forms
// ---------------------------------------------------------------------------

TwoQubitState rho12_closed(const DoubletCoefficients& d) {
  const double g1 = d.g(1), g2 = d.g(2), g3 = d.g(3), g4 = d.g(4), g5 = d.g(5);
  Eigen::MatrixXcd m = Eigen::MatrixXcd::Zero(4, 4);
  m(0, 0) = 3 * g1 * g1 + g2 * g2;
  m(1, 1) = g1 * g1 + 3 * g2 * g2;
  m(2, 2) = g3 * g3 + 3 * g4 * g4;
  m(3, 3) = 3 * g4 * g4 + g5 * g5;
  m(0, 3) = m(3, 0) = 3 * g1 * g4 + g2 * g5;
  m(1, 2) = m(2, 1) = g1 * g3 + 3 * g2 * g4;
  return TwoQubitState(DensityMatrix(std::move(m), {1, 2}));
}

TwoQubitState rho23_closed(const DoubletCoefficients& d) {
  const double g1 = d.g(1), g2 = d.g(2), g3 = d.g(3), g4 = d.g(4), g5 = d.g(5);
  Eigen::MatrixXcd m = Eigen::MatrixXcd::Zero(4, 4);
  // the central 2x2 block is the fourfold-repeated entry: it is rank one by
  // construction (the two corner configurations enter symmetrically), so the
  // repeated value is structural, not a transcription error
  const double mid = g1 * g1 + g2 * g2 + 2 * g4 * g4;
  m(0, 0) = 2 * g1 * g1 + g3 * g3 + g4 * g4;
  m(1, 1) = m(2, 2) = m(1, 2) = m(2, 1) = mid;
  m(3, 3) = 2 * g2 * g2 + g4 * g4 + g5 * g5;
  m(0, 3) = m(3, 0) = 2 * g1 * g2 + g3 * g4 + g4 * g5;
  return TwoQubitState(DensityMatrix(std::move(m), {2, 3}));
}

// ---------------------------------------------------------------------------
// correlation vectors
// ---------------------------------------------------------------------------

CorrelationVector correlation_vector_generic(const Eigen::MatrixXcd& rho4) {
  const auto sx = pauli(Axis::X);
  const auto sy = pauli(Axis::Y);
  const auto sz = pauli(Axis::Z);
  const auto id = Eigen::Matrix2cd::Identity();
  auto expect = [&rho4](const Eigen::MatrixXcd& op) {
    return (rho4 * op).trace().real();
  };
  return {expect(kron(sx, sx)), expect(kron(sy, sy)), expect(kron(sz, sz)),
          expect(kron(sz, id)), expect(kron(id, sz))};
}

CorrelationVector correlation_vector(const TwoQubitState& s, PairKind kind,
                                     const DoubletCoefficients& d) {
  const double g1 = d.g(1), g2 = d.g(2), g3 = d.g(3), g4 = d.g(4), g5 = d.g(5);
  CorrelationVector closed{};
  if (kind == PairKind::CenterCorner) {
    closed.c1 = 2 * g1 * g3 + 6 * g4 * (g1 + g2) + 2 * g2 * g5;
    closed.c2 = 2 * g1 * g3 + 6 * g4 * (g2 - g1) - 2 * g2 * g5;
    closed.c3 = 2 * g1 * g1 - 2 * g2 * g2 - g3 * g3 + g5 * g5;
    closed.za = 4 * g1 * g1 + 4 * g2 * g2 - g3 * g3 - 6 * g4 * g4 - g5 * g5;
    closed.zb = 2 * g1 * g1 - 2 * g2 * g2 + g3 * g3 - g5 * g5;
  } else {
    const double sum = g3 + g5;
    closed.c1 = 2 * (g1 + g2) * (g1 + g2) + 2 * g4 * sum + 4 * g4 * g4;
    closed.c2 = 2 * (g1 - g2) * (g1 - g2) - 2 * g4 * sum + 4 * g4 * g4;
    closed.c3 = g3 * g3 - 2 * g4 * g4 + g5 * g5;
    closed.za = 2 * g1 * g1 - 2 * g2 * g2 + g3 * g3 - g5 * g5;
    closed.zb = closed.za;
  }
  const CorrelationVector direct = correlation_vector_generic(s.rho.mat());
  const double worst = std::max(
      {std::abs(closed.c1 - direct.c1), std::abs(closed.c2 - direct.c2),
       std::abs(closed.c3 - direct.c3), std::abs(closed.za - direct.za),
       std::abs(closed.zb - direct.zb)});
  if (worst > 1e-8)
    throw NumericalError(
        "correlation_vector: closed form deviates from Pauli expectations by " +
        std::to_string(worst));
  return closed;
}

// ---------------------------------------------------------------------------
// single-site marginals
// ---------------------------------------------------------------------------

std::array<DensityMatrix, 5> single_site_states(const DoubletCoefficients& d) {
  const DensityMatrix rho = ground_state(d);
  return {rho.partial_trace({1}), rho.partial_trace({2}),
          rho.partial_trace({3}), rho.partial_trace({4}),
          rho.partial_trace({5})};
}

}  // namespace xyqrg

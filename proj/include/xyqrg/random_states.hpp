// Seeded random two-qubit state generators for property tests and the
// self-check command: X-shaped states (real or complex off-diagonals),
// product states, and full-rank Ginibre states.
#pragma once

#include <random>

#include "xyqrg/states.hpp"

namespace xyqrg {

// Random X-shaped density matrix: Dirichlet-like diagonal, off-diagonal
// magnitudes drawn within the positivity bounds |w| <= sqrt(p0 p3),
// |z| <= sqrt(p1 p2).  With real_phases the off-diagonals carry signs only,
// matching the structure of the flow states.
inline DensityMatrix random_x_state(std::mt19937_64& rng,
                                    bool real_phases = true) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  std::array<double, 4> p{};
  double total = 0.0;
  for (double& pi : p) {
    pi = -std::log(std::max(u(rng), 1e-300));
    total += pi;
  }
  for (double& pi : p) pi /= total;
  const double wmag = u(rng) * std::sqrt(p[0] * p[3]);
  const double zmag = u(rng) * std::sqrt(p[1] * p[2]);
  Complex w, z;
  if (real_phases) {
    w = u(rng) < 0.5 ? -wmag : wmag;
    z = u(rng) < 0.5 ? -zmag : zmag;
  } else {
    const double a = 2 * 3.14159265358979323846 * u(rng);
    const double b = 2 * 3.14159265358979323846 * u(rng);
    w = wmag * Complex(std::cos(a), std::sin(a));
    z = zmag * Complex(std::cos(b), std::sin(b));
  }
  Eigen::MatrixXcd m = Eigen::MatrixXcd::Zero(4, 4);
  m(0, 0) = p[0];
  m(1, 1) = p[1];
  m(2, 2) = p[2];
  m(3, 3) = p[3];
  m(0, 3) = w;
  m(3, 0) = std::conj(w);
  m(1, 2) = z;
  m(2, 1) = std::conj(z);
  return DensityMatrix(m, {0, 1});
}

// Random single-qubit state with Bloch radius r in [0, 1].
inline Eigen::Matrix2cd random_qubit(std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  const double r = u(rng);
  const double ct = 2.0 * u(rng) - 1.0;
  const double st = std::sqrt(std::max(0.0, 1.0 - ct * ct));
  const double ph = 2 * 3.14159265358979323846 * u(rng);
  Eigen::Matrix2cd m;
  m(0, 0) = 0.5 * (1.0 + r * ct);
  m(1, 1) = 0.5 * (1.0 - r * ct);
  m(0, 1) = 0.5 * r * st * Complex(std::cos(ph), -std::sin(ph));
  m(1, 0) = std::conj(m(0, 1));
  return m;
}

inline DensityMatrix random_product_state(std::mt19937_64& rng) {
  const Eigen::Matrix2cd a = random_qubit(rng);
  const Eigen::Matrix2cd b = random_qubit(rng);
  Eigen::MatrixXcd m(4, 4);
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j)
      m.block<2, 2>(2 * i, 2 * j) = a(i, j) * b;
  return DensityMatrix(m, {0, 1});
}

// Full-rank state from a complex Ginibre matrix: rho = G G^dag / tr.
inline DensityMatrix random_ginibre_state(std::mt19937_64& rng) {
  std::normal_distribution<double> g(0.0, 1.0);
  Eigen::Matrix4cd gin;
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j) gin(i, j) = Complex(g(rng), g(rng));
  Eigen::MatrixXcd m = gin * gin.adjoint();
  m /= m.trace();
  return DensityMatrix(m, {0, 1});
}

}  // namespace xyqrg

// Shared helpers for the unit and acceptance suites: canonical reference
// states, independent brute-force oracles (discord, CHSH), an independently
// expanded copy of the coupling-flow polynomials, and small utilities.
//
// Everything here is deliberately written against Eigen directly rather than
// through the library's own internals, so a bug in the library cannot hide
// behind a helper that shares its code path.
#pragma once

#include <Eigen/Dense>
#include <cmath>
#include <complex>
#include <filesystem>
#include <random>
#include <string>
#include <vector>

#include "xyqrg/dense.hpp"
#include "xyqrg/qrg.hpp"
#include "xyqrg/states.hpp"

namespace testsupport {

using xyqrg::Complex;

inline constexpr double kPi = 3.14159265358979323846;

// ---------------------------------------------------------------------------
// reference states
// ---------------------------------------------------------------------------

// |Phi+> = (|00> + |11>)/sqrt(2)
inline Eigen::MatrixXcd bell_phi_plus() {
  Eigen::VectorXcd v(4);
  v << 1.0 / std::sqrt(2.0), 0.0, 0.0, 1.0 / std::sqrt(2.0);
  return v * v.adjoint();
}

// p |Phi+><Phi+| + (1-p) I/4
inline Eigen::MatrixXcd werner(double p) {
  return p * bell_phi_plus() +
         (1.0 - p) * 0.25 * Eigen::MatrixXcd::Identity(4, 4);
}

// cos(t)|00> + sin(t)|11>
inline Eigen::MatrixXcd pure_schmidt(double t) {
  Eigen::VectorXcd v(4);
  v << std::cos(t), 0.0, 0.0, std::sin(t);
  return v * v.adjoint();
}

inline xyqrg::TwoQubitState as_state(const Eigen::MatrixXcd& m) {
  return xyqrg::TwoQubitState(xyqrg::DensityMatrix(m, {0, 1}));
}

// ---------------------------------------------------------------------------
// binary entropy and friends
// ---------------------------------------------------------------------------

inline double h2(double x) {
  double s = 0.0;
  for (double p : {x, 1.0 - x})
    if (p > 1e-15) s -= p * std::log2(p);
  return s;
}

inline double shannon(const std::vector<double>& ps) {
  double s = 0.0;
  for (double p : ps)
    if (p > 1e-15) s -= p * std::log2(p);
  return s;
}

// ---------------------------------------------------------------------------
// brute-force discord oracle (projective measurement on the second party)
// ---------------------------------------------------------------------------

// Dense direction grid over the Bloch sphere; returns the minimal conditional
// entropy sum_k p_k S(rho_A | outcome k).  Slow but entirely independent of
// the library's optimizer.
inline double brute_conditional_entropy_b(const Eigen::MatrixXcd& rho,
                                          int n_theta, int n_phi) {
  double best = 1e300;
  for (int it = 0; it < n_theta; ++it) {
    const double th = kPi * it / (n_theta - 1);
    for (int ip = 0; ip < n_phi; ++ip) {
      const double ph = 2.0 * kPi * ip / n_phi;
      Eigen::Vector2cd dir;
      dir << std::cos(th / 2.0),
          std::sin(th / 2.0) * Complex(std::cos(ph), std::sin(ph));
      const Eigen::Matrix2cd pi0 = dir * dir.adjoint();
      const Eigen::Matrix2cd pi1 = Eigen::Matrix2cd::Identity() - pi0;
      double total = 0.0;
      for (const Eigen::Matrix2cd& proj : {pi0, pi1}) {
        // unnormalized conditional state of A: Tr_B[(I (x) P) rho (I (x) P)]
        Eigen::Matrix2cd cond = Eigen::Matrix2cd::Zero();
        for (int a = 0; a < 2; ++a)
          for (int ap = 0; ap < 2; ++ap) {
            Complex acc(0.0, 0.0);
            for (int b = 0; b < 2; ++b)
              for (int bp = 0; bp < 2; ++bp)
                acc += proj(b, bp) * rho(2 * a + bp, 2 * ap + b);
            cond(a, ap) = acc;
          }
        const double pk = cond.trace().real();
        if (pk < 1e-14) continue;
        cond /= pk;
        Eigen::SelfAdjointEigenSolver<Eigen::Matrix2cd> es(cond);
        total += pk * shannon({std::max(0.0, es.eigenvalues()(0)),
                               std::max(0.0, es.eigenvalues()(1))});
      }
      best = std::min(best, total);
    }
  }
  return best;
}

inline double entropy_of(const Eigen::MatrixXcd& rho) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(rho);
  std::vector<double> ps;
  for (int i = 0; i < es.eigenvalues().size(); ++i)
    ps.push_back(std::max(0.0, es.eigenvalues()(i)));
  return shannon(ps);
}

inline Eigen::Matrix2cd marginal_of(const Eigen::MatrixXcd& rho, bool first) {
  Eigen::Matrix2cd m = Eigen::Matrix2cd::Zero();
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j)
      for (int k = 0; k < 2; ++k)
        m(i, j) += first ? rho(2 * i + k, 2 * j + k) : rho(k * 2 + i, k * 2 + j);
  return m;
}

// Full brute-force discord: I(rho) - [S(A) - min conditional entropy of A].
inline double brute_discord(const Eigen::MatrixXcd& rho, int n_theta,
                            int n_phi) {
  const double sa = entropy_of(marginal_of(rho, true));
  const double sb = entropy_of(marginal_of(rho, false));
  const double sab = entropy_of(rho);
  const double cond = brute_conditional_entropy_b(rho, n_theta, n_phi);
  return (sa + sb - sab) - (sa - cond);
}

// ---------------------------------------------------------------------------
// brute-force CHSH oracle
// ---------------------------------------------------------------------------

inline Eigen::Matrix3d correlation_t(const Eigen::MatrixXcd& rho) {
  const Eigen::Matrix2cd sx = xyqrg::pauli(xyqrg::Axis::X);
  const Eigen::Matrix2cd sy = xyqrg::pauli(xyqrg::Axis::Y);
  const Eigen::Matrix2cd sz = xyqrg::pauli(xyqrg::Axis::Z);
  const Eigen::Matrix2cd ps[3] = {sx, sy, sz};
  Eigen::Matrix3d t;
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) {
      Eigen::MatrixXcd op = Eigen::MatrixXcd::Zero(4, 4);
      for (int a = 0; a < 2; ++a)
        for (int ap = 0; ap < 2; ++ap)
          for (int b = 0; b < 2; ++b)
            for (int bp = 0; bp < 2; ++bp)
              op(2 * a + b, 2 * ap + bp) = ps[i](a, ap) * ps[j](b, bp);
      t(i, j) = (rho * op).trace().real();
    }
  return t;
}

// Direct maximization of ||T(b+b')|| + ||T(b-b')|| over measurement
// directions b, b' on a dense angle grid.  A coarse lower bound on the true
// CHSH maximum and (up to grid resolution) equal to it.
inline double brute_chsh(const Eigen::MatrixXcd& rho, int n_theta, int n_phi) {
  const Eigen::Matrix3d t = correlation_t(rho);
  std::vector<Eigen::Vector3d> dirs;
  for (int it = 0; it < n_theta; ++it) {
    const double th = kPi * it / (n_theta - 1);
    for (int ip = 0; ip < n_phi; ++ip) {
      const double ph = 2.0 * kPi * ip / n_phi;
      dirs.emplace_back(std::sin(th) * std::cos(ph),
                        std::sin(th) * std::sin(ph), std::cos(th));
    }
  }
  double best = 0.0;
  for (const auto& b : dirs)
    for (const auto& bp : dirs) {
      const double v = (t * (b + bp)).norm() + (t * (b - bp)).norm();
      best = std::max(best, v);
    }
  return best;
}

// ---------------------------------------------------------------------------
// independently expanded coupling-flow polynomials
// ---------------------------------------------------------------------------

// Literal term-by-term expansion of the renormalized couplings in the ten
// class amplitudes, written out without the (u, v) factorization used by the
// library, so the two can be compared on arbitrary coefficient vectors.
struct ExpandedFlow {
  double jp;
  double gp;
};

inline ExpandedFlow expanded_flow(double j, double gamma,
                                  const xyqrg::DoubletCoefficients& d) {
  const double g1 = d.g(1), g2 = d.g(2), g3 = d.g(3), g4 = d.g(4), g5 = d.g(5);
  const double g6 = d.g(6), g7 = d.g(7), g8 = d.g(8), g9 = d.g(9),
               g10 = d.g(10);
  // literal monomial expansions (10 + 10 + 16 terms); no shared subfactors
  const double u2 = 9 * g4 * g4 * g10 * g10 + 9 * g1 * g1 * g7 * g7 +
                    g2 * g2 * g8 * g8 + g3 * g3 * g9 * g9 +
                    18 * g4 * g10 * g1 * g7 + 6 * g4 * g10 * g2 * g8 +
                    6 * g4 * g10 * g3 * g9 + 6 * g1 * g7 * g2 * g8 +
                    6 * g1 * g7 * g3 * g9 + 2 * g2 * g8 * g3 * g9;
  const double v2 = g5 * g5 * g10 * g10 + g1 * g1 * g6 * g6 +
                    9 * g2 * g2 * g7 * g7 + 9 * g4 * g4 * g9 * g9 +
                    2 * g5 * g10 * g1 * g6 + 6 * g5 * g10 * g2 * g7 +
                    6 * g5 * g10 * g4 * g9 + 6 * g1 * g6 * g2 * g7 +
                    6 * g1 * g6 * g4 * g9 + 18 * g2 * g7 * g4 * g9;
  const double uv =
      3 * g4 * g10 * g5 * g10 + 3 * g4 * g10 * g1 * g6 +
      9 * g4 * g10 * g2 * g7 + 9 * g4 * g10 * g4 * g9 +
      3 * g1 * g7 * g5 * g10 + 3 * g1 * g7 * g1 * g6 + 9 * g1 * g7 * g2 * g7 +
      9 * g1 * g7 * g4 * g9 + g2 * g8 * g5 * g10 + g2 * g8 * g1 * g6 +
      3 * g2 * g8 * g2 * g7 + 3 * g2 * g8 * g4 * g9 + g3 * g9 * g5 * g10 +
      g3 * g9 * g1 * g6 + 3 * g3 * g9 * g2 * g7 + 3 * g3 * g9 * g4 * g9;
  const double den = u2 + v2 + 2.0 * gamma * uv;
  const double num = 2.0 * uv + gamma * (u2 + v2);
  return ExpandedFlow{j * den, num / den};
}

// ---------------------------------------------------------------------------
// filesystem scratch
// ---------------------------------------------------------------------------

// Fresh unique directory under the system temp root; removed by the caller
// only if it cares (the suite runs in a throwaway sandbox).
inline std::filesystem::path fresh_temp_dir(const std::string& tag) {
  static std::mt19937_64 rng(0x5eedf00dULL);
  const auto base = std::filesystem::temp_directory_path();
  std::filesystem::path p;
  do {
    p = base / (tag + "-" + std::to_string(rng()));
  } while (std::filesystem::exists(p));
  std::filesystem::create_directories(p);
  return p;
}

}  // namespace testsupport

// Implementation of the dense-operator primitives.
#include "xyqrg/dense.hpp"

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>
#include <algorithm>
#include <cmath>

namespace xyqrg {

Eigen::Matrix2cd pauli(Axis a) {
  Eigen::Matrix2cd m = Eigen::Matrix2cd::Zero();
  const Complex i{0.0, 1.0};
  switch (a) {
    case Axis::X:
      m(0, 1) = 1.0;
      m(1, 0) = 1.0;
      break;
    case Axis::Y:
      m(0, 1) = -i;
      m(1, 0) = i;
      break;
    case Axis::Z:
      m(0, 0) = 1.0;
      m(1, 1) = -1.0;
      break;
  }
  return m;
}

// ---------------------------------------------------------------------------
// DenseOperator
// ---------------------------------------------------------------------------

DenseOperator::DenseOperator(Eigen::MatrixXcd m, std::vector<int> s)
    : mat(std::move(m)), sites(std::move(s)) {
  if (mat.rows() != mat.cols())
    throw std::invalid_argument("DenseOperator: matrix must be square");
  const long want = 1L << sites.size();
  if (mat.rows() != want)
    throw std::invalid_argument(
        "DenseOperator: dimension " + std::to_string(mat.rows()) +
        " does not match register of " + std::to_string(sites.size()) +
        " sites");
  for (std::size_t i = 0; i < sites.size(); ++i)
    for (std::size_t j = i + 1; j < sites.size(); ++j)
      if (sites[i] == sites[j])
        throw std::invalid_argument("DenseOperator: duplicate site label " +
                                    std::to_string(sites[i]));
}

bool DenseOperator::is_hermitian(double tol) const {
  return (mat - mat.adjoint()).cwiseAbs().maxCoeff() <= tol;
}

DenseOperator identity_op(const std::vector<int>& reg) {
  const long d = 1L << reg.size();
  return DenseOperator(Eigen::MatrixXcd::Identity(d, d), reg);
}

Eigen::MatrixXcd kron(const Eigen::MatrixXcd& a, const Eigen::MatrixXcd& b) {
  Eigen::MatrixXcd out(a.rows() * b.rows(), a.cols() * b.cols());
  for (long i = 0; i < a.rows(); ++i)
    for (long j = 0; j < a.cols(); ++j)
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
  return out;
}

DenseOperator embed_product(
    const std::vector<std::pair<int, Eigen::Matrix2cd>>& ops,
    const std::vector<int>& reg) {
  Eigen::MatrixXcd acc = Eigen::MatrixXcd::Ones(1, 1);
  for (int site : reg) {
    const Eigen::Matrix2cd* factor = nullptr;
    for (const auto& [s, op] : ops) {
      if (s == site) {
        if (factor)
          throw std::invalid_argument("embed_product: site listed twice");
        factor = &op;
      }
    }
    acc = factor ? kron(acc, *factor) : kron(acc, Eigen::Matrix2cd::Identity());
  }
  // every requested site must be present in the register
  for (const auto& [s, op] : ops) {
    (void)op;
    if (std::find(reg.begin(), reg.end(), s) == reg.end())
      throw std::invalid_argument("embed_product: site " + std::to_string(s) +
                                  " not in register");
  }
  return DenseOperator(std::move(acc), reg);
}

DenseOperator embed(const Eigen::Matrix2cd& op, int site,
                    const std::vector<int>& reg) {
  return embed_product({{site, op}}, reg);
}

// ---------------------------------------------------------------------------
// spectra and norms
// ---------------------------------------------------------------------------

EigResult eig_hermitian(const Eigen::MatrixXcd& m, double herm_tol) {
  const double dev = (m - m.adjoint()).cwiseAbs().maxCoeff();
  if (dev > herm_tol)
    throw NumericalError("eig_hermitian: matrix deviates from Hermitian by " +
                         std::to_string(dev));
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> solver(m);
  if (solver.info() != Eigen::Success)
    throw NumericalError("eig_hermitian: eigensolver failed to converge");
  return {solver.eigenvalues(), solver.eigenvectors()};
}

double trace_norm(const Eigen::MatrixXcd& m) {
  if (m.rows() != m.cols())
    throw std::invalid_argument("trace_norm: matrix must be square");
  if ((m - m.adjoint()).cwiseAbs().maxCoeff() <= 1e-12) {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> solver(m);
    return solver.eigenvalues().cwiseAbs().sum();
  }
  Eigen::JacobiSVD<Eigen::MatrixXcd> svd(m);
  return svd.singularValues().sum();
}

// ---------------------------------------------------------------------------
// DensityMatrix
// ---------------------------------------------------------------------------

DensityMatrix::DensityMatrix(Eigen::MatrixXcd m, std::vector<int> reg)
    : op_(std::move(m), std::move(reg)) {
  const Complex tr = op_.mat.trace();
  if (std::abs(tr - Complex{1.0, 0.0}) > 1e-10)
    throw NumericalError("DensityMatrix: trace " + std::to_string(tr.real()) +
                         (tr.imag() >= 0 ? "+" : "") +
                         std::to_string(tr.imag()) + "i is not 1");
  if (!op_.is_hermitian(1e-10))
    throw NumericalError("DensityMatrix: matrix is not Hermitian within 1e-10");
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> solver(op_.mat);
  if (solver.eigenvalues()(0) < -1e-10)
    throw NumericalError("DensityMatrix: negative eigenvalue " +
                         std::to_string(solver.eigenvalues()(0)));
}

Eigen::MatrixXcd partial_trace_matrix(const Eigen::MatrixXcd& m,
                                      const std::vector<int>& reg,
                                      const std::vector<int>& keep) {
  const int n = static_cast<int>(reg.size());
  // bit position (from MSB) of every kept site, in keep order
  std::vector<int> keep_pos;
  keep_pos.reserve(keep.size());
  for (int site : keep) {
    auto it = std::find(reg.begin(), reg.end(), site);
    if (it == reg.end())
      throw std::invalid_argument("partial_trace: site " +
                                  std::to_string(site) + " not in register");
    keep_pos.push_back(static_cast<int>(it - reg.begin()));
  }
  for (std::size_t i = 0; i < keep.size(); ++i)
    for (std::size_t j = i + 1; j < keep.size(); ++j)
      if (keep[i] == keep[j])
        throw std::invalid_argument("partial_trace: duplicate site in keep");
  std::vector<int> traced_pos;
  for (int p = 0; p < n; ++p)
    if (std::find(keep_pos.begin(), keep_pos.end(), p) == keep_pos.end())
      traced_pos.push_back(p);

  const int nk = static_cast<int>(keep_pos.size());
  const int nt = static_cast<int>(traced_pos.size());
  const long dk = 1L << nk, dt = 1L << nt;

  auto scatter = [n](long bits, const std::vector<int>& pos) {
    long idx = 0;
    for (std::size_t b = 0; b < pos.size(); ++b)
      if (bits & (1L << (pos.size() - 1 - b))) idx |= 1L << (n - 1 - pos[b]);
    return idx;
  };

  Eigen::MatrixXcd out = Eigen::MatrixXcd::Zero(dk, dk);
  for (long a = 0; a < dk; ++a) {
    const long ia = scatter(a, keep_pos);
    for (long b = 0; b < dk; ++b) {
      const long ib = scatter(b, keep_pos);
      Complex sum = 0.0;
      for (long t = 0; t < dt; ++t) {
        const long it = scatter(t, traced_pos);
        sum += m(ia | it, ib | it);
      }
      out(a, b) = sum;
    }
  }
  return out;
}

DensityMatrix DensityMatrix::partial_trace(const std::vector<int>& keep) const {
  return DensityMatrix(partial_trace_matrix(op_.mat, op_.sites, keep), keep);
}

}  // namespace xyqrg

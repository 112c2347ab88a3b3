// Dense operators on labeled qubit registers: Pauli matrices, embeddings,
// Kronecker products, partial traces, Hermitian eigensolves, trace norms,
// and validated density matrices.  Everything downstream (block Hamiltonians,
// reduced states, correlation measures) is built on these primitives.
//
// Conventions: a register is an ordered list of integer site labels; the first
// label is the most significant bit of the basis index, and bit value 1 means
// spin down.  For a two-site register {a,b} the basis order is
// |up,up>, |up,down>, |down,up>, |down,down>.
#pragma once

#include <Eigen/Dense>
#include <complex>
#include <stdexcept>
#include <string>
#include <vector>

namespace xyqrg {

using Complex = std::complex<double>;

// Thrown when a numeric contract is violated (lost degeneracy, bad residual,
// cross-check mismatch) as opposed to plain misuse of an interface.
struct NumericalError : std::runtime_error {
  explicit NumericalError(const std::string& msg) : std::runtime_error(msg) {}
};

enum class Axis { X, Y, Z };

Eigen::Matrix2cd pauli(Axis a);

// ---------------------------------------------------------------------------
// DenseOperator: complex square matrix tied to a labeled register
// ---------------------------------------------------------------------------

struct DenseOperator {
  Eigen::MatrixXcd mat;
  std::vector<int> sites;  // register labels, first = most significant bit

  DenseOperator(Eigen::MatrixXcd m, std::vector<int> s);

  int num_sites() const { return static_cast<int>(sites.size()); }
  long dim() const { return mat.rows(); }
  bool is_hermitian(double tol = 1e-10) const;
};

DenseOperator identity_op(const std::vector<int>& reg);

// Single-site operator embedded into a register by tensoring with identities.
DenseOperator embed(const Eigen::Matrix2cd& op, int site,
                    const std::vector<int>& reg);

// Product of single-site operators on distinct sites, one Kronecker pass.
DenseOperator embed_product(
    const std::vector<std::pair<int, Eigen::Matrix2cd>>& ops,
    const std::vector<int>& reg);

Eigen::MatrixXcd kron(const Eigen::MatrixXcd& a, const Eigen::MatrixXcd& b);

// ---------------------------------------------------------------------------
// spectra and norms
// ---------------------------------------------------------------------------

struct EigResult {
  Eigen::VectorXd values;    // ascending
  Eigen::MatrixXcd vectors;  // columns
};

// Requires max|M - M^dagger| <= herm_tol, else throws NumericalError.
EigResult eig_hermitian(const Eigen::MatrixXcd& m, double herm_tol = 1e-10);

// Sum of singular values; uses the eigenvalue route when Hermitian.
double trace_norm(const Eigen::MatrixXcd& m);

// ---------------------------------------------------------------------------
// DensityMatrix: validated on construction
// ---------------------------------------------------------------------------

// Validation contract: trace within 1e-10 of one, Hermitian within 1e-10,
// smallest eigenvalue >= -1e-10.
class DensityMatrix {
 public:
  DensityMatrix(Eigen::MatrixXcd m, std::vector<int> reg);

  const Eigen::MatrixXcd& mat() const { return op_.mat; }
  const std::vector<int>& sites() const { return op_.sites; }
  long dim() const { return op_.dim(); }

  // Reduced state on `keep`; the order of `keep` fixes the factor order of
  // the result, so partial_trace({2,1}) is the swap of partial_trace({1,2}).
  DensityMatrix partial_trace(const std::vector<int>& keep) const;

 private:
  DenseOperator op_;
};

// Raw-matrix partial trace used by DensityMatrix and by hot paths that do not
// want revalidation.  `reg` labels the factors of `m`.
Eigen::MatrixXcd partial_trace_matrix(const Eigen::MatrixXcd& m,
                                      const std::vector<int>& reg,
                                      const std::vector<int>& keep);

}  // namespace xyqrg

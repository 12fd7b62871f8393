#pragma once

// Dense complex linear algebra used by every other module. Dimensions here are
// desk scale (composite systems up to roughly 16x16), so everything is dense.

#include <Eigen/Dense>

#include <cmath>
#include <complex>
#include <string>
#include <vector>

#include "minq/error.hpp"

namespace minq {

using Complex = std::complex<double>;
using ComplexMatrix = Eigen::MatrixXcd;
using ComplexVector = Eigen::VectorXcd;
using RealMatrix = Eigen::MatrixXd;
using RealVector = Eigen::VectorXd;

/// Which tensor factor of a bipartite system an operation refers to.
enum class Side { A, B };

inline constexpr double kHermitianTol = 1e-10;

struct HermitianEigenSystem {
  RealVector eigenvalues;     // nondecreasing
  ComplexMatrix eigenvectors; // columns, unitary
};

inline double max_abs(const ComplexMatrix& m) {
  return m.size() == 0 ? 0.0 : m.cwiseAbs().maxCoeff();
}

/// Largest entry of (H - H^dagger)/2 in absolute value.
inline double hermiticity_defect(const ComplexMatrix& h) {
  if (h.rows() != h.cols()) return INFINITY;
  return max_abs((h - h.adjoint()) * 0.5);
}

inline bool is_unitary(const ComplexMatrix& u, double tol = kHermitianTol) {
  if (u.rows() != u.cols()) return false;
  return max_abs(u.adjoint() * u - ComplexMatrix::Identity(u.rows(), u.cols())) <= tol;
}

inline ComplexMatrix kron(const ComplexMatrix& a, const ComplexMatrix& b) {
  ComplexMatrix out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i) {
    for (Eigen::Index j = 0; j < a.cols(); ++j) {
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
    }
  }
  return out;
}

/// Reduced state of an (m*n)x(m*n) operator. `keep` names the subsystem that
/// survives: Side::A gives the m x m marginal, Side::B the n x n one.
inline ComplexMatrix partial_trace(const ComplexMatrix& rho, int m, int n, Side keep) {
  if (m < 1 || n < 1 || rho.rows() != m * n || rho.cols() != m * n) {
    throw InputError("partial_trace: matrix is " + std::to_string(rho.rows()) + "x" +
                     std::to_string(rho.cols()) + ", expected " + std::to_string(m * n) +
                     " square");
  }
  if (keep == Side::A) {
    ComplexMatrix out = ComplexMatrix::Zero(m, m);
    for (int i = 0; i < m; ++i)
      for (int k = 0; k < m; ++k)
        for (int j = 0; j < n; ++j) out(i, k) += rho(i * n + j, k * n + j);
    return out;
  }
  ComplexMatrix out = ComplexMatrix::Zero(n, n);
  for (int j = 0; j < n; ++j)
    for (int l = 0; l < n; ++l)
      for (int i = 0; i < m; ++i) out(j, l) += rho(i * n + j, i * n + l);
  return out;
}

/// Eigen-decomposition of a Hermitian matrix. Inputs within kHermitianTol of
/// Hermitian are symmetrized first; anything worse is rejected.
inline HermitianEigenSystem hermitian_eig(const ComplexMatrix& h) {
  if (h.rows() != h.cols() || h.rows() == 0) throw InputError("hermitian_eig: matrix is not square");
  const double defect = hermiticity_defect(h);
  if (!(defect <= kHermitianTol)) {
    throw InputError("hermitian_eig: matrix is not Hermitian (defect " + std::to_string(defect) + ")");
  }
  const ComplexMatrix sym = (h + h.adjoint()) * 0.5;
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> solver(sym);
  if (solver.info() != Eigen::Success) throw NumericalError("hermitian_eig: eigensolver did not converge");
  return {solver.eigenvalues(), solver.eigenvectors()};
}

/// Eigenvalues only, nondecreasing. Real symmetric overload for the Bloch matrices.
inline RealVector symmetric_eigenvalues(const RealMatrix& s) {
  Eigen::SelfAdjointEigenSolver<RealMatrix> solver((s + s.transpose()) * 0.5, Eigen::EigenvaluesOnly);
  if (solver.info() != Eigen::Success) throw NumericalError("symmetric_eigenvalues: no convergence");
  return solver.eigenvalues();
}

/// Singular values in nonincreasing order.
inline RealVector svd_values(const ComplexMatrix& a) {
  Eigen::JacobiSVD<ComplexMatrix> svd(a);
  return svd.singularValues();
}

/// Tr(a^dagger b).
inline Complex frobenius_inner(const ComplexMatrix& a, const ComplexMatrix& b) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) throw InputError("frobenius_inner: dimension mismatch");
  return (a.adjoint() * b).trace();
}

/// exp(iH) for Hermitian H, via the spectral decomposition.
inline ComplexMatrix expm_hermitian_generator(const ComplexMatrix& h) {
  const auto sys = hermitian_eig(h);
  ComplexVector phases(sys.eigenvalues.size());
  for (Eigen::Index k = 0; k < phases.size(); ++k) phases(k) = std::polar(1.0, sys.eigenvalues(k));
  return sys.eigenvectors * phases.asDiagonal() * sys.eigenvectors.adjoint();
}

/// Real part of Tr(a b) without forming the product.
inline double trace_product_real(const ComplexMatrix& a, const ComplexMatrix& b) {
  return (a.transpose().cwiseProduct(b)).sum().real();
}

inline double purity(const ComplexMatrix& rho) { return trace_product_real(rho, rho); }

inline ComplexMatrix pauli_x() {
  ComplexMatrix m(2, 2);
  m << 0, 1, 1, 0;
  return m;
}
inline ComplexMatrix pauli_y() {
  ComplexMatrix m(2, 2);
  m << 0, Complex(0, -1), Complex(0, 1), 0;
  return m;
}
inline ComplexMatrix pauli_z() {
  ComplexMatrix m(2, 2);
  m << 1, 0, 0, -1;
  return m;
}

}  // namespace minq

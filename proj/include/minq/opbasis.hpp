#pragma once

// Orthonormal Hermitian operator bases and the real coefficient matrix Gamma
// of a bipartite state, rho = sum_ij gamma_ij X_i (x) Y_j.

#include <vector>

#include "minq/measure.hpp"

namespace minq {

/// d^2 Hermitian d x d operators, orthonormal under Tr(X^dagger Y), with
/// X_0 = 1/sqrt(d).
class OperatorBasis {
 public:
  explicit OperatorBasis(std::vector<ComplexMatrix> elements) : elements_(std::move(elements)) {
    if (elements_.empty()) throw InputError("OperatorBasis: no elements");
    const auto d = elements_.front().rows();
    if (static_cast<Eigen::Index>(elements_.size()) != d * d) {
      throw InputError("OperatorBasis: need d^2 elements");
    }
    for (const auto& x : elements_) {
      if (x.rows() != d || x.cols() != d || hermiticity_defect(x) > 1e-12) {
        throw InputError("OperatorBasis: elements must be Hermitian d x d");
      }
    }
    if (max_abs(elements_.front() - ComplexMatrix::Identity(d, d) / std::sqrt(static_cast<double>(d))) > 1e-12) {
      throw InputError("OperatorBasis: first element must be 1/sqrt(d)");
    }
    for (std::size_t k = 0; k < elements_.size(); ++k)
      for (std::size_t l = k; l < elements_.size(); ++l) {
        const double expect = k == l ? 1.0 : 0.0;
        if (std::abs(frobenius_inner(elements_[k], elements_[l]) - expect) > 1e-12) {
          throw InputError("OperatorBasis: elements are not orthonormal");
        }
      }
  }

  int dim() const { return static_cast<int>(elements_.front().rows()); }
  std::size_t size() const { return elements_.size(); }
  const ComplexMatrix& operator[](std::size_t k) const { return elements_[k]; }
  const std::vector<ComplexMatrix>& elements() const { return elements_; }

 private:
  std::vector<ComplexMatrix> elements_;
};

/// Identity/sqrt(d), then the generalized Gell-Mann matrices scaled by 1/sqrt(2):
/// symmetric and antisymmetric pairs for j < k, followed by the diagonal ones.
/// For d = 2 this is {1, sigma_x, sigma_y, sigma_z}/sqrt(2).
inline OperatorBasis gell_mann_basis(int d) {
  if (d < 2) throw InputError("gell_mann_basis: d must be >= 2");
  const double inv_sqrt2 = 1.0 / std::sqrt(2.0);
  std::vector<ComplexMatrix> el;
  el.reserve(static_cast<std::size_t>(d) * d);
  el.push_back(ComplexMatrix::Identity(d, d) / std::sqrt(static_cast<double>(d)));
  for (int j = 0; j < d; ++j)
    for (int k = j + 1; k < d; ++k) {
      ComplexMatrix s = ComplexMatrix::Zero(d, d);
      s(j, k) = s(k, j) = inv_sqrt2;
      el.push_back(s);
      ComplexMatrix a = ComplexMatrix::Zero(d, d);
      a(j, k) = Complex(0, -inv_sqrt2);
      a(k, j) = Complex(0, inv_sqrt2);
      el.push_back(a);
    }
  for (int l = 1; l < d; ++l) {
    ComplexMatrix h = ComplexMatrix::Zero(d, d);
    for (int j = 0; j < l; ++j) h(j, j) = 1.0;
    h(l, l) = -static_cast<double>(l);
    el.push_back(h / std::sqrt(static_cast<double>(l) * (l + 1)));
  }
  return OperatorBasis(std::move(el));
}

/// Replaces X_1..X_{d^2-1} by sum_j o_ij X_j for a real orthogonal o.
inline OperatorBasis remix_traceless(const OperatorBasis& basis, const RealMatrix& o) {
  const auto t = static_cast<Eigen::Index>(basis.size()) - 1;
  if (o.rows() != t || o.cols() != t) throw InputError("remix_traceless: orthogonal matrix has wrong size");
  std::vector<ComplexMatrix> el{basis[0]};
  for (Eigen::Index i = 0; i < t; ++i) {
    ComplexMatrix x = ComplexMatrix::Zero(basis.dim(), basis.dim());
    for (Eigen::Index j = 0; j < t; ++j) x += o(i, j) * basis[static_cast<std::size_t>(j + 1)];
    el.push_back(x);
  }
  return OperatorBasis(std::move(el));
}

struct BlochDecomposition {
  int dim_a = 0;
  int dim_b = 0;
  RealMatrix gamma;  // m^2 x n^2, gamma_ij = Tr(rho X_i (x) Y_j)
  RealVector x;      // m^2 - 1, Tr(rho X_i (x) 1)/sqrt(n)
  RealVector y;      // n^2 - 1, Tr(rho 1 (x) Y_j)/sqrt(m)
  RealMatrix t;      // (m^2 - 1) x (n^2 - 1) correlation block of gamma
  double gamma_norm_sq = 0.0;  // sum gamma_ij^2 = Tr(rho^2)

  /// S = x x^T + T T^T for side A; the mirror y y^T + T^T T for side B.
  RealMatrix s_matrix(Side side = Side::A) const {
    if (side == Side::A) return x * x.transpose() + t * t.transpose();
    return y * y.transpose() + t.transpose() * t;
  }
};

inline BlochDecomposition decompose(const DensityMatrix& rho, const OperatorBasis& basis_a,
                                    const OperatorBasis& basis_b) {
  const int m = rho.dim_a();
  const int n = rho.dim_b();
  if (basis_a.dim() != m || basis_b.dim() != n) throw InputError("decompose: basis dimensions do not match state");
  const auto ma = static_cast<Eigen::Index>(basis_a.size());
  const auto nb = static_cast<Eigen::Index>(basis_b.size());
  BlochDecomposition bd;
  bd.dim_a = m;
  bd.dim_b = n;
  bd.gamma.resize(ma, nb);
  const ComplexMatrix& r = rho.matrix();
  for (Eigen::Index i = 0; i < ma; ++i)
    for (Eigen::Index j = 0; j < nb; ++j) {
      const Complex g = (r * kron(basis_a[static_cast<std::size_t>(i)], basis_b[static_cast<std::size_t>(j)])).trace();
      if (std::abs(g.imag()) > 1e-9) {
        throw NumericalError("decompose: coefficient (" + std::to_string(i) + ", " + std::to_string(j) +
                             ") has imaginary part " + std::to_string(g.imag()));
      }
      bd.gamma(i, j) = g.real();
    }
  const ComplexMatrix rho_a = rho.marginal(Side::A);
  const ComplexMatrix rho_b = rho.marginal(Side::B);
  bd.x.resize(ma - 1);
  for (Eigen::Index i = 1; i < ma; ++i)
    bd.x(i - 1) = (rho_a * basis_a[static_cast<std::size_t>(i)]).trace().real() / std::sqrt(static_cast<double>(n));
  bd.y.resize(nb - 1);
  for (Eigen::Index j = 1; j < nb; ++j)
    bd.y(j - 1) = (rho_b * basis_b[static_cast<std::size_t>(j)]).trace().real() / std::sqrt(static_cast<double>(m));
  bd.t = bd.gamma.bottomRightCorner(ma - 1, nb - 1);
  bd.gamma_norm_sq = bd.gamma.squaredNorm();
  return bd;
}

inline BlochDecomposition decompose(const DensityMatrix& rho) {
  return decompose(rho, gell_mann_basis(rho.dim_a()), gell_mann_basis(rho.dim_b()));
}

/// Inverse of decompose: sum_ij gamma_ij X_i (x) Y_j, validated as a state.
inline DensityMatrix reconstruct(const BlochDecomposition& bd, const OperatorBasis& basis_a,
                                 const OperatorBasis& basis_b) {
  if (basis_a.dim() != bd.dim_a || basis_b.dim() != bd.dim_b ||
      bd.gamma.rows() != static_cast<Eigen::Index>(basis_a.size()) ||
      bd.gamma.cols() != static_cast<Eigen::Index>(basis_b.size())) {
    throw InputError("reconstruct: inconsistent dimensions");
  }
  const int d = bd.dim_a * bd.dim_b;
  ComplexMatrix rho = ComplexMatrix::Zero(d, d);
  for (Eigen::Index i = 0; i < bd.gamma.rows(); ++i)
    for (Eigen::Index j = 0; j < bd.gamma.cols(); ++j)
      if (bd.gamma(i, j) != 0.0)
        rho += bd.gamma(i, j) * kron(basis_a[static_cast<std::size_t>(i)], basis_b[static_cast<std::size_t>(j)]);
  return DensityMatrix::from_matrix(rho, bd.dim_a, bd.dim_b);
}

/// Row k holds Tr(|k><k| X_i) for i = 0..d^2-1.
inline RealMatrix measurement_coefficients(const ProjectiveMeasurement& meas, const OperatorBasis& basis) {
  if (meas.dim() != basis.dim()) throw InputError("measurement_coefficients: dimension mismatch");
  const int d = meas.dim();
  RealMatrix a(d, static_cast<Eigen::Index>(basis.size()));
  for (int k = 0; k < d; ++k) {
    const ComplexVector v = meas.basis().col(k);
    for (std::size_t i = 0; i < basis.size(); ++i)
      a(k, static_cast<Eigen::Index>(i)) = (v.adjoint() * basis[i] * v)(0, 0).real();
  }
  return a;
}

}  // namespace minq

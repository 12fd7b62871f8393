#pragma once

// Rank-1 von Neumann measurements, the dephasing maps they induce on one or
// both sides of a bipartite state, and the set of measurements that leave a
// given marginal untouched.

#include <span>
#include <sstream>
#include <vector>

#include "minq/states.hpp"

namespace minq {

inline constexpr double kDegeneracyTol = 1e-8;

/// Complete set of rank-1 orthogonal projectors |k><k|, stored as the unitary
/// whose columns are the |k>.
class ProjectiveMeasurement {
 public:
  explicit ProjectiveMeasurement(ComplexMatrix basis) : basis_(std::move(basis)) {
    if (basis_.rows() != basis_.cols() || basis_.rows() < 1) {
      throw InputError("ProjectiveMeasurement: basis must be square");
    }
    if (!is_unitary(basis_)) throw InputError("ProjectiveMeasurement: basis vectors are not orthonormal");
  }

  static ProjectiveMeasurement computational(int d) {
    return ProjectiveMeasurement(ComplexMatrix::Identity(d, d));
  }

  int dim() const { return static_cast<int>(basis_.rows()); }
  const ComplexMatrix& basis() const { return basis_; }
  ComplexMatrix projector(int k) const { return basis_.col(k) * basis_.col(k).adjoint(); }

 private:
  ComplexMatrix basis_;
};

namespace detail {

/// Keeps only entries whose block labels agree. Labels index rows/cols of the
/// rotated matrix; the result is the pinching in that block structure.
inline void pinch_in_place(ComplexMatrix& r, const std::vector<int>& label) {
  for (Eigen::Index i = 0; i < r.rows(); ++i)
    for (Eigen::Index j = 0; j < r.cols(); ++j)
      if (label[static_cast<std::size_t>(i)] != label[static_cast<std::size_t>(j)]) r(i, j) = 0.0;
}

inline std::vector<int> side_labels(int m, int n, Side side) {
  std::vector<int> label(static_cast<std::size_t>(m) * n);
  for (int i = 0; i < m; ++i)
    for (int j = 0; j < n; ++j) label[static_cast<std::size_t>(i * n + j)] = side == Side::A ? i : j;
  return label;
}

}  // namespace detail

/// sum_k (P_k (x) 1) rho (P_k (x) 1) for side A, or the mirror image for B.
/// Matrix-level form used in inner loops.
inline ComplexMatrix dephase_one_sided(const ComplexMatrix& rho, int m, int n, const ComplexMatrix& basis, Side side) {
  const ComplexMatrix w = side == Side::A ? kron(basis, ComplexMatrix::Identity(n, n))
                                          : kron(ComplexMatrix::Identity(m, m), basis);
  ComplexMatrix r = w.adjoint() * rho * w;
  detail::pinch_in_place(r, detail::side_labels(m, n, side));
  return w * r * w.adjoint();
}

/// sum_{k,k'} (P_k (x) Q_k') rho (P_k (x) Q_k'): keeps only the diagonal in
/// the product basis.
inline ComplexMatrix dephase_two_sided(const ComplexMatrix& rho, const ComplexMatrix& basis_a,
                                       const ComplexMatrix& basis_b) {
  const ComplexMatrix w = kron(basis_a, basis_b);
  const ComplexMatrix r = w.adjoint() * rho * w;
  return w * r.diagonal().asDiagonal() * w.adjoint();
}

inline void check_measurement_dim(const DensityMatrix& rho, const ProjectiveMeasurement& meas, Side side) {
  if (meas.dim() != rho.dim_of(side)) {
    std::ostringstream msg;
    msg << "measurement of dimension " << meas.dim() << " does not match side " << (side == Side::A ? 'A' : 'B')
        << " of dimension " << rho.dim_of(side);
    throw InputError(msg.str());
  }
}

inline DensityMatrix apply_one_sided(const DensityMatrix& rho, const ProjectiveMeasurement& meas, Side side) {
  check_measurement_dim(rho, meas, side);
  return DensityMatrix::trusted(dephase_one_sided(rho.matrix(), rho.dim_a(), rho.dim_b(), meas.basis(), side),
                                rho.dim_a(), rho.dim_b());
}

inline DensityMatrix apply_two_sided(const DensityMatrix& rho, const ProjectiveMeasurement& meas_a,
                                     const ProjectiveMeasurement& meas_b) {
  check_measurement_dim(rho, meas_a, Side::A);
  check_measurement_dim(rho, meas_b, Side::B);
  return DensityMatrix::trusted(dephase_two_sided(rho.matrix(), meas_a.basis(), meas_b.basis()), rho.dim_a(),
                                rho.dim_b());
}

/// True iff sum_k P_k rho_m P_k equals rho_m within tol (max-abs).
inline bool marginal_invariant(const ComplexMatrix& rho_marginal, const ProjectiveMeasurement& meas, double tol) {
  if (rho_marginal.rows() != meas.dim() || rho_marginal.cols() != meas.dim()) return false;
  const auto& u = meas.basis();
  ComplexMatrix r = u.adjoint() * rho_marginal * u;
  const ComplexMatrix dephased = u * r.diagonal().asDiagonal() * u.adjoint();
  return max_abs(dephased - rho_marginal) <= tol;
}

struct EigenBlock {
  int offset = 0;  // first index in the ascending eigenvalue order
  int size = 0;
  double eigenvalue = 0.0;  // mean of the grouped eigenvalues
};

/// Admissible measurements for a marginal: eigenbasis * blockdiag(U_b) with one
/// unitary per group of (numerically) equal eigenvalues.
struct AdmissibleParameterization {
  ComplexMatrix eigenbasis;
  RealVector eigenvalues;
  std::vector<EigenBlock> blocks;
  int free_parameter_count = 0;  // sum of size^2 over blocks of size >= 2

  int dim() const { return static_cast<int>(eigenbasis.rows()); }
  bool fully_degenerate() const { return blocks.size() == 1; }

  /// Smallest nonzero gap between adjacent eigenvalues (infinity if none).
  double smallest_gap() const {
    double gap = INFINITY;
    for (Eigen::Index k = 1; k < eigenvalues.size(); ++k) {
      const double g = eigenvalues(k) - eigenvalues(k - 1);
      if (g > 0.0) gap = std::min(gap, g);
    }
    return gap;
  }
};

inline AdmissibleParameterization admissible_parameterization(const ComplexMatrix& rho_marginal,
                                                              double tol = kDegeneracyTol) {
  const auto sys = hermitian_eig(rho_marginal);
  AdmissibleParameterization out;
  out.eigenbasis = sys.eigenvectors;
  out.eigenvalues = sys.eigenvalues;
  const auto d = static_cast<int>(sys.eigenvalues.size());
  int start = 0;
  for (int k = 1; k <= d; ++k) {
    if (k == d || sys.eigenvalues(k) - sys.eigenvalues(k - 1) > tol) {
      const int size = k - start;
      out.blocks.push_back({start, size, sys.eigenvalues.segment(start, size).mean()});
      if (size >= 2) out.free_parameter_count += size * size;
      start = k;
    }
  }
  return out;
}

/// Hermitian d x d generator from d^2 real coordinates: d diagonal entries,
/// then (re, im) for each upper off-diagonal pair in row-major order.
inline ComplexMatrix hermitian_from_coords(std::span<const double> coords, int d) {
  ComplexMatrix h = ComplexMatrix::Zero(d, d);
  std::size_t c = 0;
  for (int i = 0; i < d; ++i) h(i, i) = coords[c++];
  for (int i = 0; i < d; ++i)
    for (int j = i + 1; j < d; ++j) {
      const Complex z(coords[c], coords[c + 1]);
      c += 2;
      h(i, j) = z;
      h(j, i) = std::conj(z);
    }
  return h;
}

/// Block-diagonal unitary (in the eigenbasis frame) applied after exp(iH).
/// Identity blocks when empty.
using BlockAnchor = std::vector<ComplexMatrix>;

inline ProjectiveMeasurement realize_admissible(const AdmissibleParameterization& param,
                                                std::span<const double> coords, const BlockAnchor& anchor = {}) {
  if (static_cast<int>(coords.size()) != param.free_parameter_count) {
    throw InputError("realize_admissible: expected " + std::to_string(param.free_parameter_count) +
                     " coordinates, got " + std::to_string(coords.size()));
  }
  const int d = param.dim();
  ComplexMatrix local = ComplexMatrix::Identity(d, d);
  std::size_t c = 0;
  std::size_t b = 0;
  for (const auto& blk : param.blocks) {
    if (blk.size < 2) continue;
    const auto count = static_cast<std::size_t>(blk.size * blk.size);
    ComplexMatrix u = expm_hermitian_generator(hermitian_from_coords(coords.subspan(c, count), blk.size));
    if (b < anchor.size()) u = anchor[b] * u;
    local.block(blk.offset, blk.offset, blk.size, blk.size) = u;
    c += count;
    ++b;
  }
  return ProjectiveMeasurement(param.eigenbasis * local);
}

/// Haar-random anchors for every degenerate block.
inline BlockAnchor random_anchor(const AdmissibleParameterization& param, Rng& rng) {
  BlockAnchor anchor;
  for (const auto& blk : param.blocks)
    if (blk.size >= 2) anchor.push_back(haar_unitary(blk.size, rng));
  return anchor;
}

}  // namespace minq

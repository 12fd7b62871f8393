#pragma once

// Bipartite density matrices: validation, the state families used throughout
// the library, and seeded random ensembles.

#include <algorithm>
#include <array>
#include <cstdint>
#include <numbers>
#include <random>
#include <sstream>
#include <utility>
#include <vector>

#include "minq/matkernel.hpp"

namespace minq {

inline constexpr double kStateTol = 1e-10;

using Rng = std::mt19937_64;

/// Hermitian, positive semidefinite, unit-trace operator on C^m (x) C^n.
///
/// Construction validates all three invariants and throws InputError naming the
/// first one violated. Eigenvalues in [-1e-10, 0) are clipped to zero; the
/// discarded magnitude is kept in clipped_mass() so callers can report it.
class DensityMatrix {
 public:
  static DensityMatrix from_matrix(const ComplexMatrix& mat, int dim_a, int dim_b) {
    if (dim_a < 1 || dim_b < 1) throw InputError("dimensions must be positive");
    const Eigen::Index d = static_cast<Eigen::Index>(dim_a) * dim_b;
    if (mat.rows() != d || mat.cols() != d) {
      std::ostringstream msg;
      msg << "matrix is " << mat.rows() << "x" << mat.cols() << " but dim_a*dim_b = " << d;
      throw InputError(msg.str());
    }
    if (!mat.allFinite()) throw InputError("matrix has non-finite entries");
    const double herm = hermiticity_defect(mat);
    if (herm > kStateTol) {
      std::ostringstream msg;
      msg << "hermiticity violated: max |(M - M^dagger)/2| = " << herm;
      throw InputError(msg.str());
    }
    const double tr = mat.trace().real();
    if (std::abs(tr - 1.0) > kStateTol) {
      std::ostringstream msg;
      msg << "trace violated: Tr M = " << tr;
      throw InputError(msg.str());
    }
    ComplexMatrix sym = (mat + mat.adjoint()) * 0.5;
    const auto sys = hermitian_eig(sym);
    const double lowest = sys.eigenvalues(0);
    if (lowest < -kStateTol) {
      std::ostringstream msg;
      msg << "PSD violated: smallest eigenvalue " << lowest;
      throw InputError(msg.str());
    }
    double clipped = 0.0;
    if (lowest < 0.0) {
      RealVector w = sys.eigenvalues;
      for (Eigen::Index k = 0; k < w.size(); ++k) {
        if (w(k) < 0.0) {
          clipped += -w(k);
          w(k) = 0.0;
        }
      }
      sym = sys.eigenvectors * w.cast<Complex>().asDiagonal() * sys.eigenvectors.adjoint();
    }
    DensityMatrix out(std::move(sym), dim_a, dim_b);
    out.clipped_ = clipped;
    return out;
  }

  /// Skips validation. For outputs of maps that provably preserve states
  /// (dephasing, unitary conjugation, tensor products of valid states).
  static DensityMatrix trusted(ComplexMatrix mat, int dim_a, int dim_b) {
    return DensityMatrix((mat + mat.adjoint()) * 0.5, dim_a, dim_b);
  }

  int dim_a() const { return dim_a_; }
  int dim_b() const { return dim_b_; }
  int dim() const { return dim_a_ * dim_b_; }
  int dim_of(Side side) const { return side == Side::A ? dim_a_ : dim_b_; }
  const ComplexMatrix& matrix() const { return mat_; }
  double clipped_mass() const { return clipped_; }
  double purity() const { return minq::purity(mat_); }
  ComplexMatrix marginal(Side keep) const { return partial_trace(mat_, dim_a_, dim_b_, keep); }

 private:
  DensityMatrix(ComplexMatrix mat, int dim_a, int dim_b) : mat_(std::move(mat)), dim_a_(dim_a), dim_b_(dim_b) {}

  ComplexMatrix mat_;
  int dim_a_;
  int dim_b_;
  double clipped_ = 0.0;
};

/// Single-system check used for ancillas and marginals.
inline void validate_single_system_state(const ComplexMatrix& m, const char* what) {
  try {
    (void)DensityMatrix::from_matrix(m, static_cast<int>(m.rows()), 1);
  } catch (const InputError& e) {
    throw InputError(std::string(what) + ": " + e.what());
  }
}

/// |Psi> = sum_i sqrt(s_i) |alpha_i> (x) |beta_i>.
struct SchmidtForm {
  std::vector<double> coefficients;  // s_i, nonincreasing, summing to 1
  ComplexMatrix basis_a;             // m x r, columns |alpha_i>
  ComplexMatrix basis_b;             // n x r, columns |beta_i>

  ComplexVector state_vector() const {
    ComplexVector psi = ComplexVector::Zero(basis_a.rows() * basis_b.rows());
    for (std::size_t k = 0; k < coefficients.size(); ++k) {
      const auto kk = static_cast<Eigen::Index>(k);
      psi += std::sqrt(coefficients[k]) * kron(basis_a.col(kk), basis_b.col(kk));
    }
    return psi;
  }
};

/// Correlation coefficients c_i = <sigma_i (x) sigma_i> of a Bell-diagonal state.
struct BellDiagonalParams {
  double c1 = 0.0;
  double c2 = 0.0;
  double c3 = 0.0;

  /// mu_{i,j} for (i,j) = (1,1), (1,2), (2,1), (2,2).
  std::array<double, 4> eigenvalues() const {
    std::array<double, 4> mu{};
    std::size_t k = 0;
    for (int i = 1; i <= 2; ++i) {
      for (int j = 1; j <= 2; ++j) {
        const double si = (i % 2 == 0) ? 1.0 : -1.0;
        const double sj = (j % 2 == 0) ? 1.0 : -1.0;
        mu[k++] = 0.25 * (1.0 + si * c1 - si * sj * c2 + sj * c3);
      }
    }
    return mu;
  }

  bool is_physical(double tol = 1e-12) const {
    const auto mu = eigenvalues();
    return std::all_of(mu.begin(), mu.end(), [tol](double m) { return m >= -tol && m <= 1.0 + tol; });
  }
};

// Pure states ----------------------------------------------------------------

/// |Psi><Psi| with Psi_{ij} = amps(i, j); amps must have unit Frobenius norm.
inline DensityMatrix pure_from_amplitudes(const ComplexMatrix& amps) {
  const double norm = amps.norm();
  if (std::abs(norm - 1.0) > kStateTol) {
    throw InputError("pure_from_amplitudes: amplitudes have norm " + std::to_string(norm));
  }
  const auto m = static_cast<int>(amps.rows());
  const auto n = static_cast<int>(amps.cols());
  ComplexVector psi(static_cast<Eigen::Index>(m) * n);
  for (int i = 0; i < m; ++i)
    for (int j = 0; j < n; ++j) psi(i * n + j) = amps(i, j);
  return DensityMatrix::trusted(psi * psi.adjoint(), m, n);
}

inline SchmidtForm schmidt_from_amplitudes(const ComplexMatrix& amps) {
  Eigen::JacobiSVD<ComplexMatrix> svd(amps, Eigen::ComputeThinU | Eigen::ComputeThinV);
  SchmidtForm out;
  const auto sv = svd.singularValues();
  out.coefficients.resize(static_cast<std::size_t>(sv.size()));
  for (Eigen::Index k = 0; k < sv.size(); ++k) out.coefficients[static_cast<std::size_t>(k)] = sv(k) * sv(k);
  out.basis_a = svd.matrixU();
  // Psi_ij = sum_k sigma_k U_ik conj(V_jk), so |beta_k> = conj(V_k).
  out.basis_b = svd.matrixV().conjugate();
  return out;
}

/// Schmidt form of a pure state. Rejects states with purity below 1 - 1e-8.
inline SchmidtForm schmidt_decompose(const DensityMatrix& rho) {
  const double p = rho.purity();
  if (p < 1.0 - 1e-8) throw InputError("schmidt_decompose: state is mixed (purity " + std::to_string(p) + ")");
  const auto sys = hermitian_eig(rho.matrix());
  const ComplexVector psi = sys.eigenvectors.col(sys.eigenvectors.cols() - 1);
  const int m = rho.dim_a();
  const int n = rho.dim_b();
  ComplexMatrix amps(m, n);
  for (int i = 0; i < m; ++i)
    for (int j = 0; j < n; ++j) amps(i, j) = psi(i * n + j);
  return schmidt_from_amplitudes(amps / amps.norm());
}

// Families -------------------------------------------------------------------

/// (1/4)[1 (x) 1 + sum_i c_i sigma_i (x) sigma_i].
inline DensityMatrix bell_diagonal(const BellDiagonalParams& c) {
  if (!c.is_physical()) {
    std::ostringstream msg;
    msg << "bell_diagonal: c = (" << c.c1 << ", " << c.c2 << ", " << c.c3 << ") lies outside the tetrahedron";
    throw InputError(msg.str());
  }
  ComplexMatrix rho = ComplexMatrix::Identity(4, 4);
  rho += c.c1 * kron(pauli_x(), pauli_x());
  rho += c.c2 * kron(pauli_y(), pauli_y());
  rho += c.c3 * kron(pauli_z(), pauli_z());
  return DensityMatrix::trusted(rho * 0.25, 2, 2);
}

inline ComplexMatrix swap_operator(int d) {
  ComplexMatrix f = ComplexMatrix::Zero(d * d, d * d);
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j) f(i * d + j, j * d + i) = 1.0;
  return f;
}

/// |Phi+> = d^{-1/2} sum_i |ii>.
inline ComplexVector max_entangled_vector(int d) {
  ComplexVector v = ComplexVector::Zero(d * d);
  for (int i = 0; i < d; ++i) v(i * d + i) = 1.0 / std::sqrt(static_cast<double>(d));
  return v;
}

/// Werner state (1 - a F)/(d^2 - d a) with F the swap; a in [-1, 1].
/// a = 0 is maximally mixed, a = 1 the normalized antisymmetric projector.
inline DensityMatrix werner(int dim, double a) {
  if (dim < 2) throw InputError("werner: dim must be >= 2");
  if (!(a >= -1.0 && a <= 1.0)) throw InputError("werner: mixing parameter must lie in [-1, 1]");
  const double d = dim;
  ComplexMatrix rho = ComplexMatrix::Identity(dim * dim, dim * dim) - a * swap_operator(dim);
  return DensityMatrix::trusted(rho / (d * d - d * a), dim, dim);
}

/// Isotropic state f |Phi+><Phi+| + (1 - f)(1 - |Phi+><Phi+|)/(d^2 - 1); f in [0, 1].
inline DensityMatrix isotropic(int dim, double f) {
  if (dim < 2) throw InputError("isotropic: dim must be >= 2");
  if (!(f >= 0.0 && f <= 1.0)) throw InputError("isotropic: fidelity parameter must lie in [0, 1]");
  const double d2 = static_cast<double>(dim) * dim;
  const ComplexVector phi = max_entangled_vector(dim);
  const ComplexMatrix proj = phi * phi.adjoint();
  ComplexMatrix rho = f * proj + (1.0 - f) / (d2 - 1.0) * (ComplexMatrix::Identity(dim * dim, dim * dim) - proj);
  return DensityMatrix::trusted(rho, dim, dim);
}

/// One mixture component's local bases: columns of `a` (m x m) and `b` (n x n).
struct BasisPair {
  ComplexMatrix a;
  ComplexMatrix b;
};

/// sum_k p_k |psi_k><psi_k| with |psi_k> = m^{-1/2} sum_{i<m} |a_k,i> (x) |b_k,i>.
inline DensityMatrix max_entangled_mixed(int m, int n, const std::vector<double>& probs,
                                         const std::vector<BasisPair>& bases) {
  if (m < 2 || m > n) throw InputError("max_entangled_mixed: need 2 <= m <= n");
  if (probs.empty() || probs.size() != bases.size()) {
    throw InputError("max_entangled_mixed: need one basis pair per probability");
  }
  double total = 0.0;
  for (double p : probs) {
    if (p < 0.0) throw InputError("max_entangled_mixed: negative probability");
    total += p;
  }
  if (std::abs(total - 1.0) > kStateTol) throw InputError("max_entangled_mixed: probabilities do not sum to 1");

  ComplexMatrix rho = ComplexMatrix::Zero(m * n, m * n);
  for (std::size_t k = 0; k < probs.size(); ++k) {
    const auto& bp = bases[k];
    if (bp.a.rows() != m || bp.b.rows() != n || !is_unitary(bp.a) || !is_unitary(bp.b)) {
      throw InputError("max_entangled_mixed: component " + std::to_string(k) + " bases are not orthonormal");
    }
    ComplexVector psi = ComplexVector::Zero(m * n);
    for (int i = 0; i < m; ++i) psi += kron(bp.a.col(i), bp.b.col(i));
    psi /= std::sqrt(static_cast<double>(m));
    rho += probs[k] * psi * psi.adjoint();
  }
  const ComplexMatrix marg = partial_trace(rho, m, n, Side::A);
  if (max_abs(marg - ComplexMatrix::Identity(m, m) / m) > kStateTol) {
    throw InputError("max_entangled_mixed: marginal on A is not maximally mixed");
  }
  return DensityMatrix::trusted(rho, m, n);
}

inline DensityMatrix product_state(const ComplexMatrix& rho_a, const ComplexMatrix& rho_b) {
  validate_single_system_state(rho_a, "product_state (A factor)");
  validate_single_system_state(rho_b, "product_state (B factor)");
  return DensityMatrix::trusted(kron(rho_a, rho_b), static_cast<int>(rho_a.rows()),
                                static_cast<int>(rho_b.rows()));
}

/// rho (x) rho_c viewed across the cut a : bc.
inline DensityMatrix append_ancilla(const DensityMatrix& rho, const ComplexMatrix& ancilla) {
  validate_single_system_state(ancilla, "append_ancilla");
  return DensityMatrix::trusted(kron(rho.matrix(), ancilla), rho.dim_a(),
                                rho.dim_b() * static_cast<int>(ancilla.rows()));
}

inline DensityMatrix apply_local_unitary(const DensityMatrix& rho, const ComplexMatrix& u, const ComplexMatrix& v) {
  if (u.rows() != rho.dim_a() || v.rows() != rho.dim_b()) throw InputError("apply_local_unitary: dimension mismatch");
  if (!is_unitary(u) || !is_unitary(v)) throw InputError("apply_local_unitary: operator is not unitary");
  const ComplexMatrix w = kron(u, v);
  return DensityMatrix::trusted(w * rho.matrix() * w.adjoint(), rho.dim_a(), rho.dim_b());
}

// Random ensembles -----------------------------------------------------------

inline ComplexMatrix ginibre(Eigen::Index rows, Eigen::Index cols, Rng& rng) {
  std::normal_distribution<double> normal(0.0, 1.0);
  ComplexMatrix g(rows, cols);
  // Fill column-major in a fixed order so a seed pins the output.
  for (Eigen::Index j = 0; j < cols; ++j)
    for (Eigen::Index i = 0; i < rows; ++i) {
      const double re = normal(rng);
      const double im = normal(rng);
      g(i, j) = Complex(re, im);
    }
  return g;
}

inline ComplexMatrix haar_unitary(int d, Rng& rng) {
  const ComplexMatrix g = ginibre(d, d, rng);
  Eigen::HouseholderQR<ComplexMatrix> qr(g);
  ComplexMatrix q = qr.householderQ() * ComplexMatrix::Identity(d, d);
  const ComplexMatrix r = qr.matrixQR().triangularView<Eigen::Upper>();
  for (int k = 0; k < d; ++k) {
    const double mag = std::abs(r(k, k));
    if (mag > 0.0) q.col(k) *= r(k, k) / mag;
  }
  return q;
}

inline DensityMatrix random_density(int m, int n, Rng& rng) {
  const ComplexMatrix g = ginibre(m * n, m * n, rng);
  ComplexMatrix rho = g * g.adjoint();
  rho /= rho.trace().real();
  return DensityMatrix::trusted(rho, m, n);
}

inline DensityMatrix random_pure(int m, int n, Rng& rng) {
  ComplexMatrix amps = ginibre(m, n, rng);
  amps /= amps.norm();
  return pure_from_amplitudes(amps);
}

inline ComplexMatrix haar_unitary(int d, std::uint64_t seed) {
  Rng rng(seed);
  return haar_unitary(d, rng);
}
inline DensityMatrix random_density(int m, int n, std::uint64_t seed) {
  Rng rng(seed);
  return random_density(m, n, rng);
}
inline DensityMatrix random_pure(int m, int n, std::uint64_t seed) {
  Rng rng(seed);
  return random_pure(m, n, rng);
}

/// Uniform-ish point inside the Bell-diagonal tetrahedron: a random convex
/// combination of the four vertices.
inline BellDiagonalParams random_tetrahedron_point(Rng& rng) {
  static constexpr std::array<std::array<double, 3>, 4> kVertices{
      {{1, 1, -1}, {-1, -1, -1}, {1, -1, 1}, {-1, 1, 1}}};
  std::exponential_distribution<double> expo(1.0);
  std::array<double, 4> w{};
  double total = 0.0;
  for (auto& x : w) total += (x = expo(rng));
  BellDiagonalParams c;
  for (std::size_t k = 0; k < 4; ++k) {
    c.c1 += w[k] / total * kVertices[k][0];
    c.c2 += w[k] / total * kVertices[k][1];
    c.c3 += w[k] / total * kVertices[k][2];
  }
  return c;
}

}  // namespace minq

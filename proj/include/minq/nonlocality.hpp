#pragma once

// Correlation measures: Hilbert-Schmidt MIN and geometric discord, fidelity
// based MIN over one- and two-sided measurements, the closed forms for pure,
// 2 x n and Bell-diagonal states, and the Gamma/S eigenvalue bounds.

#include <array>
#include <cstdio>
#include <cstring>
#include <optional>
#include <string>
#include <string_view>

#include "minq/opbasis.hpp"
#include "minq/searchopt.hpp"

namespace minq {

enum class MeasureId {
  HS_MIN,
  FMIN_A,
  FMIN_B,
  FMIN_AB,
  GD,
  N1_PURE,
  BOUND_GAMMA,
  BOUND_S,
  CLOSED_PURE,
  CLOSED_2XN,
  CLOSED_BD,
  THM3,
};

inline constexpr std::array<MeasureId, 12> kAllMeasureIds{
    MeasureId::HS_MIN,      MeasureId::FMIN_A,  MeasureId::FMIN_B,      MeasureId::FMIN_AB,
    MeasureId::GD,          MeasureId::N1_PURE, MeasureId::BOUND_GAMMA, MeasureId::BOUND_S,
    MeasureId::CLOSED_PURE, MeasureId::CLOSED_2XN, MeasureId::CLOSED_BD, MeasureId::THM3};

inline std::string_view to_string(MeasureId id) {
  switch (id) {
    case MeasureId::HS_MIN: return "HS_MIN";
    case MeasureId::FMIN_A: return "FMIN_A";
    case MeasureId::FMIN_B: return "FMIN_B";
    case MeasureId::FMIN_AB: return "FMIN_AB";
    case MeasureId::GD: return "GD";
    case MeasureId::N1_PURE: return "N1_PURE";
    case MeasureId::BOUND_GAMMA: return "BOUND_GAMMA";
    case MeasureId::BOUND_S: return "BOUND_S";
    case MeasureId::CLOSED_PURE: return "CLOSED_PURE";
    case MeasureId::CLOSED_2XN: return "CLOSED_2XN";
    case MeasureId::CLOSED_BD: return "CLOSED_BD";
    case MeasureId::THM3: return "THM3";
  }
  return "?";
}

inline std::optional<MeasureId> parse_measure_id(std::string_view name) {
  for (auto id : kAllMeasureIds)
    if (to_string(id) == name) return id;
  return std::nullopt;
}

enum class Method { ClosedForm, Optimizer, Oracle };

inline std::string_view to_string(Method m) {
  switch (m) {
    case Method::ClosedForm: return "closed_form";
    case Method::Optimizer: return "optimizer";
    case Method::Oracle: return "oracle";
  }
  return "?";
}

struct MeasureReport {
  MeasureId measure_id = MeasureId::HS_MIN;
  double value = 0.0;
  Method method = Method::ClosedForm;
  std::optional<OptResult> diagnostics;
  std::string state_fingerprint;
};

/// FNV-1a over the dimensions and the raw entries, as 16 hex digits.
inline std::string state_fingerprint(const DensityMatrix& rho) {
  std::uint64_t h = 1469598103934665603ull;
  auto mix = [&h](const void* data, std::size_t len) {
    const auto* bytes = static_cast<const unsigned char*>(data);
    for (std::size_t i = 0; i < len; ++i) {
      h ^= bytes[i];
      h *= 1099511628211ull;
    }
  };
  const std::int32_t dims[2] = {rho.dim_a(), rho.dim_b()};
  mix(dims, sizeof dims);
  const auto& m = rho.matrix();
  for (Eigen::Index i = 0; i < m.rows(); ++i)
    for (Eigen::Index j = 0; j < m.cols(); ++j) {
      const double parts[2] = {m(i, j).real(), m(i, j).imag()};
      mix(parts, sizeof parts);
    }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

// Fidelity -------------------------------------------------------------------

/// (Tr rho sigma)^2 / (Tr rho^2 Tr sigma^2).
inline double fidelity(const ComplexMatrix& rho, const ComplexMatrix& sigma) {
  if (rho.rows() != sigma.rows() || rho.cols() != sigma.cols()) throw InputError("fidelity: dimension mismatch");
  const double overlap = trace_product_real(rho, sigma);
  const double denom = purity(rho) * purity(sigma);
  if (!(denom > 0.0)) throw NumericalError("fidelity: zero operator");
  return overlap * overlap / denom;
}

inline double fidelity(const DensityMatrix& rho, const DensityMatrix& sigma) {
  return fidelity(rho.matrix(), sigma.matrix());
}

/// C^2 = 1 - F.
inline double sine_metric_sq(const DensityMatrix& rho, const DensityMatrix& sigma) {
  return 1.0 - fidelity(rho, sigma);
}

/// Two-sided fidelity from the operator-basis representation,
/// ||A Gamma B^T||^2 / ||Gamma||^2, with A and B from measurement_coefficients.
inline double two_sided_fidelity_gamma(const BlochDecomposition& bd, const RealMatrix& a, const RealMatrix& b) {
  return (a * bd.gamma * b.transpose()).squaredNorm() / bd.gamma_norm_sq;
}

/// One-sided analogue, ||A Gamma||^2 / ||Gamma||^2.
inline double one_sided_fidelity_gamma(const BlochDecomposition& bd, const RealMatrix& a) {
  return (a * bd.gamma).squaredNorm() / bd.gamma_norm_sq;
}

// Objectives -----------------------------------------------------------------

inline MeasurementObjective one_sided_disturbance(const DensityMatrix& rho, Side side) {
  return [rho, side](std::span<const ProjectiveMeasurement> meas) {
    const auto sigma = dephase_one_sided(rho.matrix(), rho.dim_a(), rho.dim_b(), meas[0].basis(), side);
    return 1.0 - fidelity(rho.matrix(), sigma);
  };
}

inline MeasurementObjective two_sided_disturbance(const DensityMatrix& rho) {
  return [rho](std::span<const ProjectiveMeasurement> meas) {
    const auto sigma = dephase_two_sided(rho.matrix(), meas[0].basis(), meas[1].basis());
    return 1.0 - fidelity(rho.matrix(), sigma);
  };
}

/// ||rho - Pi^a(rho)||^2.
inline MeasurementObjective hs_distance_objective(const DensityMatrix& rho) {
  return [rho](std::span<const ProjectiveMeasurement> meas) {
    const auto sigma = dephase_one_sided(rho.matrix(), rho.dim_a(), rho.dim_b(), meas[0].basis(), Side::A);
    return (rho.matrix() - sigma).squaredNorm();
  };
}

// Optimized measures ---------------------------------------------------------

namespace detail {

inline MeasureReport optimized(MeasureId id, const DensityMatrix& rho, const MeasurementObjective& objective,
                               std::span<const AdmissibleParameterization> params, Mode mode,
                               const OptimizerConfig& cfg) {
  MeasureReport rep;
  rep.measure_id = id;
  rep.method = Method::Optimizer;
  rep.diagnostics = optimize_measurement(objective, params, mode, cfg);
  rep.value = rep.diagnostics->value;
  rep.state_fingerprint = state_fingerprint(rho);
  return rep;
}

}  // namespace detail

/// max over marginal-preserving measurements on `side` of C^2(rho, Pi(rho)).
inline MeasureReport fmin_one_sided(const DensityMatrix& rho, Side side, const OptimizerConfig& cfg = {}) {
  const std::array params{admissible_parameterization(rho.marginal(side), cfg.degeneracy_tol)};
  return detail::optimized(side == Side::A ? MeasureId::FMIN_A : MeasureId::FMIN_B, rho,
                           one_sided_disturbance(rho, side), params, Mode::Max, cfg);
}

/// Joint maximum over pairs of measurements, each preserving its own marginal.
inline MeasureReport fmin_two_sided(const DensityMatrix& rho, const OptimizerConfig& cfg = {}) {
  const std::array params{admissible_parameterization(rho.marginal(Side::A), cfg.degeneracy_tol),
                          admissible_parameterization(rho.marginal(Side::B), cfg.degeneracy_tol)};
  return detail::optimized(MeasureId::FMIN_AB, rho, two_sided_disturbance(rho), params, Mode::Max, cfg);
}

inline MeasureReport hs_min(const DensityMatrix& rho, const OptimizerConfig& cfg = {}) {
  const std::array params{admissible_parameterization(rho.marginal(Side::A), cfg.degeneracy_tol)};
  return detail::optimized(MeasureId::HS_MIN, rho, hs_distance_objective(rho), params, Mode::Max, cfg);
}

/// Same objective as hs_min, minimized.
inline MeasureReport geometric_discord(const DensityMatrix& rho, const OptimizerConfig& cfg = {}) {
  const std::array params{admissible_parameterization(rho.marginal(Side::A), cfg.degeneracy_tol)};
  return detail::optimized(MeasureId::GD, rho, hs_distance_objective(rho), params, Mode::Min, cfg);
}

/// Grid-oracle value of an optimized measure; qubit sides with maximally mixed
/// marginals only.
inline MeasureReport oracle_measure(const DensityMatrix& rho, MeasureId id, int resolution,
                                    double degeneracy_tol = kDegeneracyTol) {
  auto param = [&](Side s) { return admissible_parameterization(rho.marginal(s), degeneracy_tol); };
  MeasureReport rep;
  rep.measure_id = id;
  rep.method = Method::Oracle;
  rep.state_fingerprint = state_fingerprint(rho);
  switch (id) {
    case MeasureId::HS_MIN:
    case MeasureId::GD: {
      const std::array p{param(Side::A)};
      rep.value = oracle_exhaustive_2d(hs_distance_objective(rho), p, id == MeasureId::GD ? Mode::Min : Mode::Max,
                                       resolution);
      break;
    }
    case MeasureId::FMIN_A:
    case MeasureId::FMIN_B: {
      const Side s = id == MeasureId::FMIN_A ? Side::A : Side::B;
      const std::array p{param(s)};
      rep.value = oracle_exhaustive_2d(one_sided_disturbance(rho, s), p, Mode::Max, resolution);
      break;
    }
    case MeasureId::FMIN_AB: {
      const std::array p{param(Side::A), param(Side::B)};
      rep.value = oracle_exhaustive_2d(two_sided_disturbance(rho), p, Mode::Max, resolution);
      break;
    }
    default:
      throw InputError("oracle: no search formulation for " + std::string(to_string(id)));
  }
  return rep;
}

struct AncillaRatios {
  double hs_ratio = 0.0;    // N(rho (x) rho_c) / N(rho)
  double fmin_ratio = 0.0;  // N^{ab}_F(rho (x) rho_c) / N^{ab}_F(rho)
};

inline AncillaRatios ancilla_scaling_check(const DensityMatrix& rho, const ComplexMatrix& ancilla,
                                           const OptimizerConfig& cfg = {}) {
  const DensityMatrix extended = append_ancilla(rho, ancilla);
  const double hs0 = hs_min(rho, cfg).value;
  const double f0 = fmin_two_sided(rho, cfg).value;
  if (hs0 <= 1e-12 || f0 <= 1e-12) throw InputError("ancilla_scaling_check: baseline measure is zero, ratio undefined");
  return {hs_min(extended, cfg).value / hs0, fmin_two_sided(extended, cfg).value / f0};
}

// Closed forms and bounds ----------------------------------------------------

/// 1 - sum_i s_i^2.
inline double closed_pure(const SchmidtForm& schmidt) {
  double sum_sq = 0.0;
  for (double s : schmidt.coefficients) sum_sq += s * s;
  return 1.0 - sum_sq;
}

/// Trace-distance MIN 2 sqrt(s1 s2) of a pure state with Schmidt rank <= 2.
inline double trace_min_pure_2xn(const SchmidtForm& schmidt) {
  int nonzero = 0;
  for (double s : schmidt.coefficients)
    if (s > 1e-12) ++nonzero;
  if (nonzero > 2) throw InputError("trace_min_pure_2xn: more than two nonzero Schmidt coefficients");
  const double s1 = schmidt.coefficients.size() > 0 ? schmidt.coefficients[0] : 0.0;
  const double s2 = schmidt.coefficients.size() > 1 ? schmidt.coefficients[1] : 0.0;
  return 2.0 * std::sqrt(std::max(0.0, s1 * s2));
}

/// (lambda_2 + lambda_3)/||Gamma||^2 for a measured qubit side, lambda the
/// ascending eigenvalues of S.
inline double closed_2xn(const BlochDecomposition& bd, Side side = Side::A) {
  const int measured = side == Side::A ? bd.dim_a : bd.dim_b;
  if (measured != 2) throw InputError("closed_2xn: measured side must be a qubit");
  const RealVector lambda = symmetric_eigenvalues(bd.s_matrix(side));
  return (lambda(1) + lambda(2)) / bd.gamma_norm_sq;
}

namespace detail {

inline double trace_minus_smallest(const RealMatrix& sym, int count) {
  const RealVector w = symmetric_eigenvalues(sym);
  double out = sym.trace();
  for (int i = 0; i < count && i < w.size(); ++i) out -= w(i);
  return out;
}

}  // namespace detail

/// (Tr Gamma Gamma^T - sum_{i <= min(m,n)-1} mu_i)/||Gamma||^2.
inline double bound_gamma(const BlochDecomposition& bd, int m, int n) {
  return detail::trace_minus_smallest(bd.gamma * bd.gamma.transpose(), std::min(m - 1, n - 1)) / bd.gamma_norm_sq;
}

/// (Tr S - sum_{i <= min(m,n)-1} lambda_i)/||Gamma||^2 with S = x x^T + T T^T.
inline double bound_S(const BlochDecomposition& bd, int m, int n) {
  return detail::trace_minus_smallest(bd.s_matrix(Side::A), std::min(m - 1, n - 1)) / bd.gamma_norm_sq;
}

struct BellDiagonalValues {
  double hs = 0.0;    // (sum c^2 - c0^2)/4
  double fmin = 0.0;  // (sum c^2 - c0^2)/(1 + sum c^2)
};

inline BellDiagonalValues closed_bell_diagonal(const BellDiagonalParams& c) {
  if (!c.is_physical()) throw InputError("closed_bell_diagonal: parameters outside the tetrahedron");
  const double sum_sq = c.c1 * c.c1 + c.c2 * c.c2 + c.c3 * c.c3;
  const double c0 = std::min({std::abs(c.c1), std::abs(c.c2), std::abs(c.c3)});
  const double num = sum_sq - c0 * c0;
  return {num / 4.0, num / (1.0 + sum_sq)};
}

/// (m - 1)/m.
inline double theorem3_value(int m) {
  if (m < 2) throw InputError("theorem3_value: m must be >= 2");
  return (m - 1.0) / m;
}

/// c_i = Tr(rho sigma_i (x) sigma_i) when rho is Bell-diagonal, nullopt otherwise.
inline std::optional<BellDiagonalParams> bell_diagonal_params_of(const DensityMatrix& rho, double tol = 1e-10) {
  if (rho.dim_a() != 2 || rho.dim_b() != 2) return std::nullopt;
  BellDiagonalParams c{trace_product_real(rho.matrix(), kron(pauli_x(), pauli_x())),
                       trace_product_real(rho.matrix(), kron(pauli_y(), pauli_y())),
                       trace_product_real(rho.matrix(), kron(pauli_z(), pauli_z()))};
  if (!c.is_physical(tol)) return std::nullopt;
  const ComplexMatrix expect = bell_diagonal(c).matrix();
  if (max_abs(expect - rho.matrix()) > tol) return std::nullopt;
  return c;
}

// Dispatch -------------------------------------------------------------------

/// Evaluates one measure on a state. Closed forms that do not apply to the
/// state (e.g. CLOSED_BD on a non-Bell-diagonal state) throw InputError.
inline MeasureReport compute_measure(const DensityMatrix& rho, MeasureId id, const OptimizerConfig& cfg = {}) {
  switch (id) {
    case MeasureId::HS_MIN: return hs_min(rho, cfg);
    case MeasureId::GD: return geometric_discord(rho, cfg);
    case MeasureId::FMIN_A: return fmin_one_sided(rho, Side::A, cfg);
    case MeasureId::FMIN_B: return fmin_one_sided(rho, Side::B, cfg);
    case MeasureId::FMIN_AB: return fmin_two_sided(rho, cfg);
    default: break;
  }
  MeasureReport rep;
  rep.measure_id = id;
  rep.method = Method::ClosedForm;
  rep.state_fingerprint = state_fingerprint(rho);
  const std::string name(to_string(id));
  switch (id) {
    case MeasureId::N1_PURE:
      if (rho.dim_a() != 2) throw InputError(name + ": needs a 2 x n state");
      rep.value = trace_min_pure_2xn(schmidt_decompose(rho));
      break;
    case MeasureId::CLOSED_PURE:
      rep.value = closed_pure(schmidt_decompose(rho));
      break;
    case MeasureId::BOUND_GAMMA:
      rep.value = bound_gamma(decompose(rho), rho.dim_a(), rho.dim_b());
      break;
    case MeasureId::BOUND_S:
      rep.value = bound_S(decompose(rho), rho.dim_a(), rho.dim_b());
      break;
    case MeasureId::CLOSED_2XN:
      rep.value = closed_2xn(decompose(rho), Side::A);
      break;
    case MeasureId::CLOSED_BD: {
      const auto c = bell_diagonal_params_of(rho);
      if (!c) throw InputError(name + ": state is not Bell-diagonal");
      rep.value = closed_bell_diagonal(*c).fmin;
      break;
    }
    case MeasureId::THM3: {
      const int m = std::min(rho.dim_a(), rho.dim_b());
      const Side small = rho.dim_a() <= rho.dim_b() ? Side::A : Side::B;
      if (max_abs(rho.marginal(small) - ComplexMatrix::Identity(m, m) / m) > kStateTol) {
        throw InputError(name + ": marginal of the smaller side is not maximally mixed");
      }
      rep.value = theorem3_value(m);
      break;
    }
    default:
      break;
  }
  return rep;
}

}  // namespace minq

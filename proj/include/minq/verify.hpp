#pragma once

// Randomized property suites behind `minq verify`. Each property runs over
// `trials` seeded states and records its worst violation.

#include <functional>
#include <ostream>
#include <string>
#include <string_view>
#include <vector>

#include "minq/io.hpp"
#include "minq/nonlocality.hpp"

namespace minq {

struct PropertyResult {
  std::string suite;
  std::string name;
  double worst = 0.0;  // largest observed violation magnitude
  double tol = 0.0;
  int trials = 0;
  bool pass() const { return worst <= tol; }
};

inline constexpr std::array<std::string_view, 4> kVerifySuites{"invariants", "bounds", "closed_forms", "ancilla"};

namespace detail {

inline constexpr std::array<std::pair<int, int>, 6> kTrialDims{{{2, 2}, {2, 3}, {2, 4}, {3, 2}, {3, 3}, {3, 4}}};

inline Rng trial_rng(std::uint64_t seed, std::string_view property, int trial) {
  std::uint32_t tag = 2166136261u;
  for (char c : property) tag = (tag ^ static_cast<unsigned char>(c)) * 16777619u;
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32), tag,
                    static_cast<std::uint32_t>(trial)};
  return Rng(seq);
}

inline OptimizerConfig trial_config(const OptimizerConfig& base, int trial) {
  OptimizerConfig cfg = base;
  cfg.seed = base.seed * 1000003ull + static_cast<std::uint64_t>(trial);
  return cfg;
}

inline std::vector<double> random_probabilities(int count, Rng& rng) {
  std::exponential_distribution<double> expo(1.0);
  std::vector<double> p(static_cast<std::size_t>(count));
  double total = 0.0;
  for (auto& x : p) total += (x = expo(rng));
  for (auto& x : p) x /= total;
  return p;
}

/// sum_i p_i |i><i| (x) rho_i with random p and random rho_i.
inline DensityMatrix random_classical_quantum(int m, int n, Rng& rng) {
  const auto p = random_probabilities(m, rng);
  ComplexMatrix rho = ComplexMatrix::Zero(m * n, m * n);
  for (int i = 0; i < m; ++i) {
    ComplexMatrix proj = ComplexMatrix::Zero(m, m);
    proj(i, i) = 1.0;
    rho += p[static_cast<std::size_t>(i)] * kron(proj, random_density(n, 1, rng).matrix());
  }
  return DensityMatrix::trusted(rho, m, n);
}

/// Maximally entangled pure state on m x n (Schmidt rank min(m, n)).
inline DensityMatrix max_entangled_pure(int m, int n) {
  const int r = std::min(m, n);
  ComplexMatrix amps = ComplexMatrix::Zero(m, n);
  for (int i = 0; i < r; ++i) amps(i, i) = 1.0 / std::sqrt(static_cast<double>(r));
  return pure_from_amplitudes(amps);
}

/// Local filtering that makes the A marginal maximally mixed.
inline DensityMatrix with_maximally_mixed_marginal(const DensityMatrix& rho) {
  const auto sys = hermitian_eig(rho.marginal(Side::A));
  RealVector inv_sqrt = sys.eigenvalues.cwiseSqrt().cwiseInverse() / std::sqrt(static_cast<double>(rho.dim_a()));
  const ComplexMatrix f = sys.eigenvectors * inv_sqrt.cast<Complex>().asDiagonal() * sys.eigenvectors.adjoint();
  const ComplexMatrix w = kron(f, ComplexMatrix::Identity(rho.dim_b(), rho.dim_b()));
  return DensityMatrix::trusted(w * rho.matrix() * w.adjoint(), rho.dim_a(), rho.dim_b());
}

inline ProjectiveMeasurement random_measurement(int d, Rng& rng) { return ProjectiveMeasurement(haar_unitary(d, rng)); }

struct Property {
  std::string name;
  double tol;
  // Returns the violation magnitude for one trial.
  std::function<double(int trial, Rng& rng, const OptimizerConfig& cfg)> check;
};

inline std::pair<int, int> dims_for(int trial) { return kTrialDims[static_cast<std::size_t>(trial) % kTrialDims.size()]; }

inline DensityMatrix mixed_or_pure(int trial, Rng& rng) {
  const auto [m, n] = dims_for(trial / 2);
  return trial % 2 == 0 ? random_density(m, n, rng) : random_pure(m, n, rng);
}

constexpr std::array<MeasureId, 5> kOptimizedMeasures{MeasureId::HS_MIN, MeasureId::GD, MeasureId::FMIN_A,
                                                      MeasureId::FMIN_B, MeasureId::FMIN_AB};

inline std::vector<Property> invariant_properties() {
  std::vector<Property> props;
  props.push_back({"nonnegativity", 1e-12, [](int trial, Rng& rng, const OptimizerConfig& cfg) {
                     const auto rho = mixed_or_pure(trial, rng);
                     double worst = 0.0;
                     for (auto id : kOptimizedMeasures) {
                       const double v = compute_measure(rho, id, cfg).value;
                       worst = std::max(worst, -v);
                       if (id != MeasureId::HS_MIN && id != MeasureId::GD) worst = std::max(worst, v - 1.0);
                     }
                     return worst;
                   }});
  props.push_back({"local_unitary_invariance", 1e-6, [](int trial, Rng& rng, const OptimizerConfig& cfg) {
                     const auto rho = trial % 4 == 0 ? bell_diagonal(random_tetrahedron_point(rng))
                                                     : random_density(dims_for(trial).first, dims_for(trial).second, rng);
                     const auto rotated = apply_local_unitary(rho, haar_unitary(rho.dim_a(), rng),
                                                              haar_unitary(rho.dim_b(), rng));
                     double worst = 0.0;
                     for (auto id : kOptimizedMeasures)
                       worst = std::max(worst, std::abs(compute_measure(rho, id, cfg).value -
                                                        compute_measure(rotated, id, cfg).value));
                     return worst;
                   }});
  props.push_back({"local_unitary_invariance_closed_forms", 1e-10, [](int trial, Rng& rng, const OptimizerConfig&) {
                     const auto [m, n] = dims_for(trial);
                     const auto rho = random_density(m, n, rng);
                     const auto rotated = apply_local_unitary(rho, haar_unitary(m, rng), haar_unitary(n, rng));
                     const auto b0 = decompose(rho);
                     const auto b1 = decompose(rotated);
                     double worst = std::abs(bound_gamma(b0, m, n) - bound_gamma(b1, m, n));
                     worst = std::max(worst, std::abs(bound_S(b0, m, n) - bound_S(b1, m, n)));
                     if (m == 2) worst = std::max(worst, std::abs(closed_2xn(b0) - closed_2xn(b1)));
                     return worst;
                   }});
  props.push_back({"product_state_zero", 1e-6, [](int trial, Rng& rng, const OptimizerConfig& cfg) {
                     const auto [m, n] = dims_for(trial);
                     const auto rho = product_state(random_density(m, 1, rng).matrix(), random_density(n, 1, rng).matrix());
                     double worst = 0.0;
                     for (auto id : kOptimizedMeasures) worst = std::max(worst, std::abs(compute_measure(rho, id, cfg).value));
                     return worst;
                   }});
  props.push_back({"classical_state_zero_one_sided", 1e-6, [](int trial, Rng& rng, const OptimizerConfig& cfg) {
                     const auto [m, n] = dims_for(trial);
                     const auto rho = random_classical_quantum(m, n, rng);
                     return std::max(std::abs(hs_min(rho, cfg).value), std::abs(fmin_one_sided(rho, Side::A, cfg).value));
                   }});
  props.push_back({"classical_state_zero_two_sided", 1e-6, [](int trial, Rng& rng, const OptimizerConfig& cfg) {
                     const auto [m, n] = dims_for(trial);
                     return std::abs(fmin_two_sided(random_classical_quantum(m, n, rng), cfg).value);
                   }});
  props.push_back({"fidelity_cap_one_sided", 1e-6, [](int trial, Rng& rng, const OptimizerConfig& cfg) {
                     const auto [m, n] = dims_for(trial / 2);
                     const auto rho = trial % 5 == 0 ? max_entangled_pure(m, n) : mixed_or_pure(trial, rng);
                     const double fid = 1.0 - fmin_one_sided(rho, Side::A, cfg).value;
                     return std::max(0.0, 1.0 / rho.dim_a() - fid);
                   }});
  props.push_back({"fidelity_cap_two_sided", 1e-6, [](int trial, Rng& rng, const OptimizerConfig& cfg) {
                     const auto [m, n] = dims_for(trial / 2);
                     const auto rho = trial % 5 == 0 ? max_entangled_pure(m, n) : mixed_or_pure(trial, rng);
                     const double fid = 1.0 - fmin_two_sided(rho, cfg).value;
                     return std::max(0.0, 1.0 / std::min(rho.dim_a(), rho.dim_b()) - fid);
                   }});
  props.push_back({"measurement_idempotence", 1e-12, [](int trial, Rng& rng, const OptimizerConfig&) {
                     const auto rho = mixed_or_pure(trial, rng);
                     const auto ma = random_measurement(rho.dim_a(), rng);
                     const auto mb = random_measurement(rho.dim_b(), rng);
                     const auto once_a = apply_one_sided(rho, ma, Side::A);
                     const auto once_b = apply_one_sided(rho, mb, Side::B);
                     const auto once_ab = apply_two_sided(rho, ma, mb);
                     double worst = max_abs(apply_one_sided(once_a, ma, Side::A).matrix() - once_a.matrix());
                     worst = std::max(worst, max_abs(apply_one_sided(once_b, mb, Side::B).matrix() - once_b.matrix()));
                     worst = std::max(worst, max_abs(apply_two_sided(once_ab, ma, mb).matrix() - once_ab.matrix()));
                     return worst;
                   }});
  props.push_back({"dephasing_overlap_identity", 1e-12, [](int trial, Rng& rng, const OptimizerConfig&) {
                     const auto rho = mixed_or_pure(trial, rng);
                     const auto ma = random_measurement(rho.dim_a(), rng);
                     const auto mb = random_measurement(rho.dim_b(), rng);
                     double worst = 0.0;
                     for (const auto& sigma : {apply_one_sided(rho, ma, Side::A), apply_one_sided(rho, mb, Side::B),
                                               apply_two_sided(rho, ma, mb)}) {
                       worst = std::max(worst, std::abs(trace_product_real(rho.matrix(), sigma.matrix()) - sigma.purity()));
                     }
                     return worst;
                   }});
  props.push_back({"two_sided_output_commutes", 1e-12, [](int trial, Rng& rng, const OptimizerConfig&) {
                     const auto rho = mixed_or_pure(trial, rng);
                     const int m = rho.dim_a(), n = rho.dim_b();
                     const auto ma = random_measurement(m, rng);
                     const auto mb = random_measurement(n, rng);
                     const auto out = apply_two_sided(rho, ma, mb).matrix();
                     double worst = 0.0;
                     for (int k = 0; k < m; ++k) {
                       const ComplexMatrix p = kron(ma.projector(k), ComplexMatrix::Identity(n, n));
                       worst = std::max(worst, max_abs(p * out - out * p));
                     }
                     for (int k = 0; k < n; ++k) {
                       const ComplexMatrix q = kron(ComplexMatrix::Identity(m, m), mb.projector(k));
                       worst = std::max(worst, max_abs(q * out - out * q));
                     }
                     return worst;
                   }});
  return props;
}

inline std::vector<Property> bound_properties() {
  std::vector<Property> props;
  props.push_back({"theorem2_dominance", 1e-6, [](int trial, Rng& rng, const OptimizerConfig& cfg) {
                     const auto [m, n] = dims_for(trial);
                     const auto rho = random_density(m, n, rng);
                     const double ab = fmin_two_sided(rho, cfg).value;
                     const double one = std::max(fmin_one_sided(rho, Side::A, cfg).value, fmin_one_sided(rho, Side::B, cfg).value);
                     return std::max(0.0, ab - one);
                   }});
  props.push_back({"bound_s_dominance", 1e-6, [](int trial, Rng& rng, const OptimizerConfig& cfg) {
                     const auto [m, n] = dims_for(trial);
                     const auto rho = random_density(m, n, rng);
                     return std::max(0.0, fmin_two_sided(rho, cfg).value - bound_S(decompose(rho), m, n));
                   }});
  props.push_back({"bound_interlacing", 1e-6, [](int trial, Rng& rng, const OptimizerConfig&) {
                     const auto [m, n] = dims_for(trial);
                     const auto bd = decompose(random_density(m, n, rng));
                     return std::max(0.0, bound_S(bd, m, n) - bound_gamma(bd, m, n));
                   }});
  props.push_back({"one_sided_s_bounds", 1e-6, [](int trial, Rng& rng, const OptimizerConfig& cfg) {
                     const auto [m, n] = dims_for(trial);
                     const auto rho = random_density(m, n, rng);
                     const auto bd = decompose(rho);
                     const double ba = detail::trace_minus_smallest(bd.s_matrix(Side::A), m - 1) / bd.gamma_norm_sq;
                     const double bb = detail::trace_minus_smallest(bd.s_matrix(Side::B), n - 1) / bd.gamma_norm_sq;
                     return std::max({0.0, fmin_one_sided(rho, Side::A, cfg).value - ba,
                                      fmin_one_sided(rho, Side::B, cfg).value - bb});
                   }});
  props.push_back({"two_by_two_equality", 1e-6, [](int, Rng& rng, const OptimizerConfig& cfg) {
                     const auto rho = random_density(2, 2, rng);
                     const double a = fmin_one_sided(rho, Side::A, cfg).value;
                     const double b = fmin_one_sided(rho, Side::B, cfg).value;
                     const double ab = fmin_two_sided(rho, cfg).value;
                     return std::max(std::abs(a - b), std::abs(ab - a));
                   }});
  return props;
}

inline std::vector<Property> closed_form_properties() {
  std::vector<Property> props;
  props.push_back({"bell_diagonal_hs", 1e-6, [](int, Rng& rng, const OptimizerConfig& cfg) {
                     const auto c = random_tetrahedron_point(rng);
                     return std::abs(hs_min(bell_diagonal(c), cfg).value - closed_bell_diagonal(c).hs);
                   }});
  props.push_back({"bell_diagonal_fmin_one_sided", 1e-6, [](int, Rng& rng, const OptimizerConfig& cfg) {
                     const auto c = random_tetrahedron_point(rng);
                     return std::abs(fmin_one_sided(bell_diagonal(c), Side::A, cfg).value - closed_bell_diagonal(c).fmin);
                   }});
  props.push_back({"bell_diagonal_fmin_two_sided", 1e-6, [](int, Rng& rng, const OptimizerConfig& cfg) {
                     const auto c = random_tetrahedron_point(rng);
                     return std::abs(fmin_two_sided(bell_diagonal(c), cfg).value - closed_bell_diagonal(c).fmin);
                   }});
  props.push_back({"pure_state_closed_form", 1e-6, [](int trial, Rng& rng, const OptimizerConfig& cfg) {
                     const auto [m, n] = dims_for(trial);
                     const auto rho = random_pure(m, n, rng);
                     const double closed = closed_pure(schmidt_decompose(rho));
                     return std::max(std::abs(fmin_one_sided(rho, Side::A, cfg).value - closed),
                                     std::abs(fmin_two_sided(rho, cfg).value - closed));
                   }});
  props.push_back({"trace_distance_relation", 1e-12, [](int trial, Rng& rng, const OptimizerConfig&) {
                     const int n = 2 + trial % 3;
                     const auto sf = schmidt_decompose(random_pure(2, n, rng));
                     const double n1 = trace_min_pure_2xn(sf);
                     return std::abs(n1 * n1 - 2.0 * closed_pure(sf));
                   }});
  props.push_back({"closed_2xn_maximally_mixed_marginal", 1e-6, [](int trial, Rng& rng, const OptimizerConfig& cfg) {
                     const int n = 2 + trial % 3;
                     const auto rho = with_maximally_mixed_marginal(random_density(2, n, rng));
                     return std::abs(fmin_one_sided(rho, Side::A, cfg).value - closed_2xn(decompose(rho)));
                   }});
  props.push_back({"gd_equals_hs_nondegenerate", 1e-10, [](int trial, Rng& rng, const OptimizerConfig& cfg) {
                     const auto [m, n] = dims_for(trial);
                     const auto rho = random_density(m, n, rng);
                     return std::abs(geometric_discord(rho, cfg).value - hs_min(rho, cfg).value);
                   }});
  return props;
}

inline ComplexMatrix ancilla_for(int trial) {
  ComplexMatrix c = ComplexMatrix::Zero(2, 2);
  switch (trial % 3) {
    case 0: c(0, 0) = 1.0; break;
    case 1: c(0, 0) = c(1, 1) = 0.5; break;
    default: c(0, 0) = 0.9; c(1, 1) = 0.1; break;
  }
  return c;
}

inline std::vector<Property> ancilla_properties() {
  std::vector<Property> props;
  props.push_back({"hs_ancilla_scaling", 1e-6, [](int trial, Rng& rng, const OptimizerConfig& cfg) {
                     const auto rho = random_density(2, 2, rng);
                     const auto anc = ancilla_for(trial);
                     const auto ratios = ancilla_scaling_check(rho, anc, cfg);
                     return std::abs(ratios.hs_ratio - purity(anc));
                   }});
  props.push_back({"fmin_ancilla_invariance", 1e-6, [](int trial, Rng& rng, const OptimizerConfig& cfg) {
                     const auto rho = random_density(2, 2, rng);
                     return std::abs(ancilla_scaling_check(rho, ancilla_for(trial), cfg).fmin_ratio - 1.0);
                   }});
  return props;
}

inline std::vector<Property> properties_of(std::string_view suite) {
  if (suite == "invariants") return invariant_properties();
  if (suite == "bounds") return bound_properties();
  if (suite == "closed_forms") return closed_form_properties();
  if (suite == "ancilla") return ancilla_properties();
  throw InputError("unknown verify suite '" + std::string(suite) + "'");
}

}  // namespace detail

/// Runs one suite (or "all") and returns one result per property.
inline std::vector<PropertyResult> run_verify_suites(std::string_view suite, int trials, std::uint64_t seed,
                                                     const OptimizerConfig& base) {
  if (trials < 1) throw InputError("verify: trials must be >= 1");
  std::vector<std::string_view> suites;
  if (suite == "all") {
    suites.assign(kVerifySuites.begin(), kVerifySuites.end());
  } else {
    (void)detail::properties_of(suite);
    suites.push_back(suite);
  }
  std::vector<PropertyResult> results;
  for (auto s : suites) {
    for (const auto& prop : detail::properties_of(s)) {
      PropertyResult r{std::string(s), prop.name, 0.0, prop.tol, trials};
      const std::string key = std::string(s) + "." + prop.name;
      for (int t = 0; t < trials; ++t) {
        Rng rng = detail::trial_rng(seed, key, t);
        const double v = prop.check(t, rng, detail::trial_config(base, t));
        r.worst = std::max(r.worst, std::isfinite(v) ? v : INFINITY);
      }
      results.push_back(std::move(r));
    }
  }
  return results;
}

inline void print_verify_results(const std::vector<PropertyResult>& results, std::ostream& out) {
  int passed = 0;
  for (const auto& r : results) {
    out << (r.pass() ? "PASS " : "FAIL ") << r.suite << "." << r.name << " worst=" << format_value(r.worst)
        << " tol=" << format_value(r.tol) << " trials=" << r.trials << "\n";
    if (r.pass()) ++passed;
  }
  out << "verify: " << passed << "/" << results.size() << " properties passed\n";
}

}  // namespace minq

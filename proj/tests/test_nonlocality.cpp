#include "minq/nonlocality.hpp"
#include "test_support.hpp"

namespace minq {
namespace {

using testing::diag;
using testing::hadamard;

OptimizerConfig quick(std::uint64_t seed = 0) {
  OptimizerConfig cfg;
  cfg.starts = 16;
  cfg.seed = seed;
  return cfg;
}

DensityMatrix bell_state() { return pure_from_amplitudes(ComplexMatrix::Identity(2, 2) / std::sqrt(2.0)); }

DensityMatrix pure_2x2(double s1) {
  ComplexMatrix amps = ComplexMatrix::Zero(2, 2);
  amps(0, 0) = std::sqrt(s1);
  amps(1, 1) = std::sqrt(1.0 - s1);
  return pure_from_amplitudes(amps);
}

double sum_sq(const BellDiagonalParams& c) { return c.c1 * c.c1 + c.c2 * c.c2 + c.c3 * c.c3; }

// Fidelity ---------------------------------------------------------------------

TEST(Fidelity, BellAgainstDephased) {
  const auto rho = bell_state();
  const auto sigma = DensityMatrix::trusted(diag({0.5, 0, 0, 0.5}), 2, 2);
  EXPECT_NEAR(fidelity(rho, sigma), 0.5, 1e-15);
  EXPECT_NEAR(sine_metric_sq(rho, sigma), 0.5, 1e-15);
}

TEST(Fidelity, IdenticalStatesAndSymmetry) {
  const auto a = random_density(2, 3, 1);
  const auto b = random_density(2, 3, 2);
  EXPECT_NEAR(sine_metric_sq(a, a), 0.0, 1e-15);
  EXPECT_NEAR(fidelity(a, b), fidelity(b, a), 1e-15);
  const double f = fidelity(a, b);
  EXPECT_GT(f, 0.0);
  EXPECT_LE(f, 1.0 + 1e-15);
}

TEST(Fidelity, SineMetricMonotone) {
  const auto rho = random_density(2, 2, 5);
  const auto s1 = random_density(2, 2, 6);
  const auto s2 = random_density(2, 2, 7);
  const bool closer = fidelity(rho, s1) > fidelity(rho, s2);
  EXPECT_EQ(closer, sine_metric_sq(rho, s1) < sine_metric_sq(rho, s2));
}

TEST(Fidelity, RejectsMismatchedDimensions) {
  EXPECT_THROW(fidelity(random_density(2, 2, 1), random_density(2, 3, 1)), InputError);
}

TEST(Fidelity, GammaRepresentationMatchesMatrices) {
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    const int m = 2 + static_cast<int>(seed % 2);
    const int n = 2 + static_cast<int>(seed % 3);
    const auto rho = random_density(m, n, seed);
    const ProjectiveMeasurement ma(haar_unitary(m, seed + 100));
    const ProjectiveMeasurement mb(haar_unitary(n, seed + 200));
    const auto bd = decompose(rho);
    const RealMatrix a = measurement_coefficients(ma, gell_mann_basis(m));
    const RealMatrix b = measurement_coefficients(mb, gell_mann_basis(n));
    const double direct2 = fidelity(rho.matrix(), dephase_two_sided(rho.matrix(), ma.basis(), mb.basis()));
    const double direct1 = fidelity(rho.matrix(), dephase_one_sided(rho.matrix(), m, n, ma.basis(), Side::A));
    EXPECT_NEAR(two_sided_fidelity_gamma(bd, a, b), direct2, 1e-9);
    EXPECT_NEAR(one_sided_fidelity_gamma(bd, a), direct1, 1e-9);
  }
}

// One-sided fidelity MIN ---------------------------------------------------------

TEST(FminOneSided, ProductStateZero) {
  const auto rho = product_state(random_density(2, 1, 1).matrix(), random_density(3, 1, 2).matrix());
  EXPECT_NEAR(fmin_one_sided(rho, Side::A, quick()).value, 0.0, 1e-12);
  EXPECT_NEAR(fmin_one_sided(rho, Side::B, quick()).value, 0.0, 1e-12);
}

TEST(FminOneSided, BellStateHalf) {
  const auto r = fmin_one_sided(bell_state(), Side::A, quick());
  EXPECT_EQ(r.measure_id, MeasureId::FMIN_A);
  EXPECT_EQ(r.method, Method::Optimizer);
  EXPECT_NEAR(r.value, 0.5, 1e-9);
  EXPECT_NEAR(fmin_one_sided(bell_state(), Side::B, quick()).value, 0.5, 1e-9);
}

TEST(FminOneSided, BellDiagonalClosedForm) {
  Rng rng(77);
  for (int k = 0; k < 8; ++k) {
    const auto c = random_tetrahedron_point(rng);
    const auto rho = bell_diagonal(c);
    const double expect = closed_bell_diagonal(c).fmin;
    EXPECT_NEAR(fmin_one_sided(rho, Side::A, quick()).value, expect, 1e-8);
    EXPECT_NEAR(fmin_one_sided(rho, Side::B, quick()).value, expect, 1e-8);
    EXPECT_NEAR(oracle_measure(rho, MeasureId::FMIN_A, 60).value, expect, 1e-3);
  }
}

TEST(FminOneSided, UnequalBellMixtureHalf) {
  BasisPair phi{ComplexMatrix::Identity(2, 2), ComplexMatrix::Identity(2, 2)};
  BasisPair psi{ComplexMatrix::Identity(2, 2), pauli_x()};
  const auto rho = max_entangled_mixed(2, 2, {0.7, 0.3}, {phi, psi});
  EXPECT_NEAR(fmin_one_sided(rho, Side::A, quick()).value, theorem3_value(2), 1e-8);
}

// Two-sided fidelity MIN ---------------------------------------------------------
//
// Measuring the second side after the first can only lower the purity of the
// output, so the two-sided value dominates both one-sided values. The expected
// numbers below were checked against the two-sphere grid oracle.

TEST(FminTwoSided, ClassicalClassicalStateZero) {
  const ComplexMatrix rho = 0.6 * kron(diag({1, 0}), diag({0.8, 0.2})) + 0.4 * kron(diag({0, 1}), diag({0.3, 0.7}));
  EXPECT_NEAR(fmin_two_sided(DensityMatrix::trusted(rho, 2, 2), quick()).value, 0.0, 1e-12);
}

TEST(FminTwoSided, ClassicalQuantumStateWithNoncommutingComponents) {
  const ComplexMatrix rb0 = diag({0.9, 0.1});
  const ComplexMatrix rb1 = hadamard() * diag({0.9, 0.1}) * hadamard();
  const ComplexMatrix mat = 0.7 * kron(diag({1, 0}), rb0) + 0.3 * kron(diag({0, 1}), rb1);
  const auto rho = DensityMatrix::trusted(mat, 2, 2);
  EXPECT_NEAR(fmin_one_sided(rho, Side::A, quick()).value, 0.0, 1e-12);
  const auto pb = admissible_parameterization(rho.marginal(Side::B));
  const ComplexMatrix out = dephase_two_sided(mat, ComplexMatrix::Identity(2, 2), pb.eigenbasis);
  const double expect = 1.0 - purity(out) / purity(mat);
  EXPECT_GT(expect, 0.01);
  EXPECT_NEAR(fmin_two_sided(rho, quick()).value, expect, 1e-12);
}

TEST(FminTwoSided, BellVertexValue) {
  for (const BellDiagonalParams c : {BellDiagonalParams{1, 1, -1}, BellDiagonalParams{-1, -1, -1}}) {
    const auto rho = bell_diagonal(c);
    EXPECT_NEAR(fmin_two_sided(rho, quick()).value, 0.75, 1e-8);
    EXPECT_NEAR(oracle_measure(rho, MeasureId::FMIN_AB, 24).value, 0.75, 1e-3);
  }
}

TEST(FminTwoSided, SymmetricBellDiagonalThird) {
  const auto rho = bell_diagonal({1.0 / 3, 1.0 / 3, 1.0 / 3});
  EXPECT_NEAR(fmin_two_sided(rho, quick()).value, 0.25, 1e-8);
}

TEST(FminTwoSided, BellDiagonalFormulaAgainstOracle) {
  Rng rng(91);
  for (int k = 0; k < 5; ++k) {
    const auto c = random_tetrahedron_point(rng);
    const auto rho = bell_diagonal(c);
    const double expect = sum_sq(c) / (1.0 + sum_sq(c));
    EXPECT_NEAR(fmin_two_sided(rho, quick()).value, expect, 1e-8);
    EXPECT_NEAR(oracle_measure(rho, MeasureId::FMIN_AB, 24).value, expect, 1e-3);
  }
}

TEST(FminTwoSided, DominatesOneSidedValues) {
  for (std::uint64_t seed = 0; seed < 6; ++seed) {
    const auto rho = random_density(2 + static_cast<int>(seed % 2), 2 + static_cast<int>(seed % 3), seed);
    const double ab = fmin_two_sided(rho, quick()).value;
    EXPECT_GE(ab, fmin_one_sided(rho, Side::A, quick()).value - 1e-9);
    EXPECT_GE(ab, fmin_one_sided(rho, Side::B, quick()).value - 1e-9);
  }
}

TEST(FminTwoSided, PureStateSchmidtValue) {
  const auto rho = pure_2x2(0.8);
  EXPECT_NEAR(fmin_two_sided(rho, quick()).value, 0.32, 1e-9);
  EXPECT_NEAR(fmin_one_sided(rho, Side::A, quick()).value, 0.32, 1e-9);
}

// HS-MIN and geometric discord ---------------------------------------------------

TEST(HsMin, BellDiagonalClosedForm) {
  Rng rng(13);
  for (int k = 0; k < 8; ++k) {
    const auto c = random_tetrahedron_point(rng);
    EXPECT_NEAR(hs_min(bell_diagonal(c), quick()).value, closed_bell_diagonal(c).hs, 1e-9);
  }
}

TEST(HsMin, BellStateAndProductState) {
  EXPECT_NEAR(hs_min(bell_state(), quick()).value, 0.5, 1e-9);
  const auto prod = product_state(diag({0.6, 0.4}), random_density(2, 1, 3).matrix());
  EXPECT_NEAR(hs_min(prod, quick()).value, 0.0, 1e-12);
}

TEST(GeometricDiscord, ClassicalClassicalZero) {
  const ComplexMatrix rho = 0.5 * kron(diag({1, 0}), diag({1, 0})) + 0.5 * kron(diag({0, 1}), diag({0, 1}));
  EXPECT_NEAR(geometric_discord(DensityMatrix::trusted(rho, 2, 2), quick()).value, 0.0, 1e-12);
}

TEST(GeometricDiscord, EqualsHsMinForNondegenerateMarginal) {
  for (std::uint64_t seed = 0; seed < 5; ++seed) {
    const auto rho = random_density(2, 3, seed + 40);
    EXPECT_NEAR(geometric_discord(rho, quick()).value, hs_min(rho, quick()).value, 1e-10);
  }
}

TEST(GeometricDiscord, BellStateHalf) {
  EXPECT_NEAR(geometric_discord(bell_state(), quick()).value, 0.5, 1e-9);
  EXPECT_NEAR(oracle_measure(bell_state(), MeasureId::GD, 36).value, 0.5, 1e-9);
}

TEST(GeometricDiscord, NeverExceedsHsMin) {
  const auto rho = bell_diagonal({0.6, -0.2, 0.1});
  EXPECT_LE(geometric_discord(rho, quick()).value, hs_min(rho, quick()).value + 1e-12);
}

// Ancilla ------------------------------------------------------------------------

TEST(Ancilla, PureAncillaRatiosOne) {
  const auto r = ancilla_scaling_check(random_density(2, 2, 8), diag({1, 0}), quick());
  EXPECT_NEAR(r.hs_ratio, 1.0, 1e-8);
  EXPECT_NEAR(r.fmin_ratio, 1.0, 1e-8);
}

TEST(Ancilla, MaximallyMixedAncillaOnBellState) {
  const auto r = ancilla_scaling_check(bell_state(), diag({0.5, 0.5}), quick());
  EXPECT_NEAR(r.hs_ratio, 0.5, 1e-8);
  EXPECT_NEAR(r.fmin_ratio, 1.0, 1e-8);
}

TEST(Ancilla, BiasedAncillaScalesByPurity) {
  const auto r = ancilla_scaling_check(bell_diagonal({0.5, -0.3, 0.4}), diag({0.9, 0.1}), quick());
  EXPECT_NEAR(r.hs_ratio, 0.82, 1e-8);
  EXPECT_NEAR(r.fmin_ratio, 1.0, 1e-8);
}

TEST(Ancilla, OneSidedFidelityInvariant) {
  const auto rho = random_density(2, 2, 19);
  const auto ext = append_ancilla(rho, diag({0.9, 0.1}));
  EXPECT_NEAR(fmin_one_sided(ext, Side::A, quick()).value, fmin_one_sided(rho, Side::A, quick()).value, 1e-8);
}

TEST(Ancilla, ZeroBaselineRejected) {
  EXPECT_THROW(ancilla_scaling_check(product_state(diag({1, 0}), diag({0.5, 0.5})), diag({0.5, 0.5}), quick()),
               InputError);
}

// Closed forms ---------------------------------------------------------------------

TEST(ClosedPure, SchmidtExamples) {
  EXPECT_NEAR(closed_pure(schmidt_decompose(bell_state())), 0.5, 1e-12);
  EXPECT_NEAR(closed_pure(schmidt_decompose(pure_2x2(1.0))), 0.0, 1e-12);
  EXPECT_NEAR(closed_pure(schmidt_decompose(pure_2x2(0.8))), 0.32, 1e-12);
}

TEST(TraceMinPure, SchmidtExamples) {
  EXPECT_NEAR(trace_min_pure_2xn(schmidt_decompose(bell_state())), 1.0, 1e-12);
  EXPECT_NEAR(trace_min_pure_2xn(schmidt_decompose(pure_2x2(1.0))), 0.0, 1e-12);
  EXPECT_NEAR(trace_min_pure_2xn(schmidt_decompose(pure_2x2(0.8))), 0.8, 1e-12);
}

TEST(TraceMinPure, RelationToFidelityMin) {
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    const auto s = schmidt_decompose(random_pure(2, 2 + static_cast<int>(seed % 3), seed));
    EXPECT_NEAR(trace_min_pure_2xn(s), std::sqrt(2.0 * closed_pure(s)), 1e-12);
  }
}

TEST(TraceMinPure, RejectsSchmidtRankThree) {
  EXPECT_THROW(trace_min_pure_2xn(schmidt_decompose(random_pure(3, 3, 1))), InputError);
}

TEST(Closed2xn, BellDiagonalFormula) {
  const BellDiagonalParams c{0.3, -0.5, 0.2};
  EXPECT_NEAR(closed_2xn(decompose(bell_diagonal(c))), closed_bell_diagonal(c).fmin, 1e-14);
  EXPECT_NEAR(closed_2xn(decompose(bell_diagonal({1, 1, -1}))), 0.5, 1e-14);
  EXPECT_NEAR(closed_2xn(decompose(bell_diagonal({0, 0, 0}))), 0.0, 1e-14);
}

TEST(Closed2xn, MatchesOneSidedOptimizerForMaximallyMixedQubitMarginal) {
  BasisPair a{ComplexMatrix::Identity(2, 2), ComplexMatrix::Identity(3, 3)};
  BasisPair b{hadamard(), haar_unitary(3, 4)};
  const auto rho = max_entangled_mixed(2, 3, {0.6, 0.4}, {a, b});
  EXPECT_NEAR(closed_2xn(decompose(rho)), fmin_one_sided(rho, Side::A, quick()).value, 1e-8);
}

TEST(Closed2xn, RejectsNonQubitSide) {
  EXPECT_THROW(closed_2xn(decompose(random_density(3, 2, 1)), Side::A), InputError);
  EXPECT_NO_THROW(closed_2xn(decompose(random_density(3, 2, 1)), Side::B));
}

TEST(Bounds, MaximallyMixedExamples) {
  const auto bd = decompose(DensityMatrix::trusted(ComplexMatrix::Identity(4, 4) / 4.0, 2, 2));
  EXPECT_NEAR(bound_gamma(bd, 2, 2), 1.0, 1e-14);
  EXPECT_NEAR(bound_S(bd, 2, 2), 0.0, 1e-14);
}

TEST(Bounds, BellStateGammaBoundIsTight) {
  const auto rho = bell_state();
  const double b = bound_gamma(decompose(rho), 2, 2);
  EXPECT_NEAR(b, 0.75, 1e-14);
  EXPECT_GE(b, fmin_two_sided(rho, quick()).value - 1e-9);
}

TEST(Bounds, SymmetricBellDiagonalSBound) {
  const BellDiagonalParams c{1.0 / 3, 1.0 / 3, 1.0 / 3};
  EXPECT_NEAR(bound_S(decompose(bell_diagonal(c)), 2, 2), 1.0 / 6, 1e-14);
}

TEST(Bounds, SBoundNeverExceedsGammaBound) {
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    const int m = 2 + static_cast<int>(seed % 2);
    const int n = 2 + static_cast<int>(seed % 3);
    const auto bd = decompose(random_density(m, n, seed));
    EXPECT_LE(bound_S(bd, m, n), bound_gamma(bd, m, n) + 1e-12);
  }
}

TEST(ClosedBellDiagonal, Examples) {
  auto v = closed_bell_diagonal({1, 1, -1});
  EXPECT_NEAR(v.hs, 0.5, 1e-15);
  EXPECT_NEAR(v.fmin, 0.5, 1e-15);
  v = closed_bell_diagonal({0, 0, 0});
  EXPECT_EQ(v.hs, 0.0);
  EXPECT_EQ(v.fmin, 0.0);
  v = closed_bell_diagonal({1.0 / 3, 1.0 / 3, 1.0 / 3});
  EXPECT_NEAR(v.hs, 1.0 / 18, 1e-15);
  EXPECT_NEAR(v.fmin, 1.0 / 6, 1e-15);
  EXPECT_THROW(closed_bell_diagonal({1, 1, 1}), InputError);
}

TEST(Theorem3Value, Examples) {
  EXPECT_DOUBLE_EQ(theorem3_value(2), 0.5);
  EXPECT_DOUBLE_EQ(theorem3_value(3), 2.0 / 3);
  EXPECT_THROW(theorem3_value(1), InputError);
}

TEST(BellDiagonalParamsOf, RecognizesFamily) {
  const auto c = bell_diagonal_params_of(bell_diagonal({0.1, 0.2, -0.3}));
  ASSERT_TRUE(c.has_value());
  EXPECT_NEAR(c->c2, 0.2, 1e-14);
  EXPECT_FALSE(bell_diagonal_params_of(random_density(2, 2, 3)).has_value());
  EXPECT_FALSE(bell_diagonal_params_of(random_density(2, 3, 3)).has_value());
}

// Dispatch -------------------------------------------------------------------------

TEST(ComputeMeasure, ClosedFormsRequireApplicableState) {
  const auto mixed = random_density(2, 2, 4);
  EXPECT_THROW(compute_measure(mixed, MeasureId::CLOSED_BD), InputError);
  EXPECT_THROW(compute_measure(mixed, MeasureId::CLOSED_PURE), InputError);
  EXPECT_THROW(compute_measure(mixed, MeasureId::THM3), InputError);
  EXPECT_THROW(compute_measure(random_pure(3, 3, 1), MeasureId::N1_PURE), InputError);
}

TEST(ComputeMeasure, ClosedFormsReportMethod) {
  const auto r = compute_measure(bell_diagonal({0.2, 0.2, 0.2}), MeasureId::CLOSED_BD);
  EXPECT_EQ(r.method, Method::ClosedForm);
  EXPECT_FALSE(r.diagnostics.has_value());
  EXPECT_NEAR(r.value, 0.08 / 1.12, 1e-15);
  EXPECT_NEAR(compute_measure(isotropic(3, 0.5), MeasureId::THM3).value, 2.0 / 3, 1e-15);
}

TEST(ComputeMeasure, FingerprintDependsOnState) {
  const auto a = compute_measure(bell_state(), MeasureId::CLOSED_PURE);
  const auto b = compute_measure(pure_2x2(0.8), MeasureId::CLOSED_PURE);
  EXPECT_EQ(a.state_fingerprint.size(), 16u);
  EXPECT_NE(a.state_fingerprint, b.state_fingerprint);
  EXPECT_EQ(a.state_fingerprint, state_fingerprint(bell_state()));
}

TEST(MeasureIdNames, RoundTrip) {
  for (auto id : kAllMeasureIds) EXPECT_EQ(parse_measure_id(to_string(id)), id);
  EXPECT_FALSE(parse_measure_id("FMIN").has_value());
}

}  // namespace
}  // namespace minq

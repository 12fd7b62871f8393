#include "minq/measure.hpp"
#include "test_support.hpp"

namespace minq {
namespace {

using testing::diag;
using testing::hadamard;
using testing::MatrixNear;

DensityMatrix bell_state() { return pure_from_amplitudes(ComplexMatrix::Identity(2, 2) / std::sqrt(2.0)); }

TEST(ProjectiveMeasurement, RejectsNonOrthonormalBasis) {
  ComplexMatrix b = ComplexMatrix::Identity(2, 2);
  b(0, 1) = 0.5;
  EXPECT_THROW(ProjectiveMeasurement{b}, InputError);
  EXPECT_THROW(ProjectiveMeasurement{ComplexMatrix::Identity(2, 3)}, InputError);
}

TEST(ProjectiveMeasurement, ProjectorsResolveIdentity) {
  const ProjectiveMeasurement m(haar_unitary(3, 5));
  ComplexMatrix sum = ComplexMatrix::Zero(3, 3);
  for (int k = 0; k < 3; ++k) sum += m.projector(k);
  EXPECT_TRUE(MatrixNear(sum, ComplexMatrix::Identity(3, 3), 1e-14));
}

TEST(ApplyOneSided, ComputationalOnBellState) {
  const auto out = apply_one_sided(bell_state(), ProjectiveMeasurement::computational(2), Side::A);
  EXPECT_TRUE(MatrixNear(out.matrix(), diag({0.5, 0, 0, 0.5}), 1e-15));
}

TEST(ApplyOneSided, ClassicalOnAUnchanged) {
  const ComplexMatrix rho = kron(diag({0.6, 0.4}), random_density(3, 1, 2).matrix());
  const auto state = DensityMatrix::trusted(rho, 2, 3);
  const auto out = apply_one_sided(state, ProjectiveMeasurement::computational(2), Side::A);
  EXPECT_TRUE(MatrixNear(out.matrix(), rho, 1e-15));
}

TEST(ApplyOneSided, MatchesProjectorSumBothSides) {
  const auto rho = random_density(2, 3, 21);
  const ProjectiveMeasurement ma(haar_unitary(2, 1));
  const ProjectiveMeasurement mb(haar_unitary(3, 2));
  ComplexMatrix expect_a = ComplexMatrix::Zero(6, 6);
  for (int k = 0; k < 2; ++k) {
    const ComplexMatrix p = kron(ma.projector(k), ComplexMatrix::Identity(3, 3));
    expect_a += p * rho.matrix() * p;
  }
  ComplexMatrix expect_b = ComplexMatrix::Zero(6, 6);
  for (int k = 0; k < 3; ++k) {
    const ComplexMatrix p = kron(ComplexMatrix::Identity(2, 2), mb.projector(k));
    expect_b += p * rho.matrix() * p;
  }
  EXPECT_TRUE(MatrixNear(apply_one_sided(rho, ma, Side::A).matrix(), expect_a, 1e-14));
  EXPECT_TRUE(MatrixNear(apply_one_sided(rho, mb, Side::B).matrix(), expect_b, 1e-14));
}

TEST(ApplyOneSided, DimensionMismatchRejected) {
  EXPECT_THROW(apply_one_sided(random_density(2, 3, 1), ProjectiveMeasurement::computational(3), Side::A),
               InputError);
}

TEST(ApplyTwoSided, ComputationalOnBellState) {
  const auto m = ProjectiveMeasurement::computational(2);
  EXPECT_TRUE(MatrixNear(apply_two_sided(bell_state(), m, m).matrix(), diag({0.5, 0, 0, 0.5}), 1e-15));
}

TEST(ApplyTwoSided, MaximallyMixedUnchanged) {
  const auto rho = DensityMatrix::trusted(ComplexMatrix::Identity(6, 6) / 6.0, 2, 3);
  const auto out = apply_two_sided(rho, ProjectiveMeasurement(haar_unitary(2, 3)),
                                   ProjectiveMeasurement(haar_unitary(3, 4)));
  EXPECT_TRUE(MatrixNear(out.matrix(), rho.matrix(), 1e-14));
}

TEST(ApplyTwoSided, ComposesOneSidedMaps) {
  const auto rho = random_density(3, 2, 6);
  const ProjectiveMeasurement ma(haar_unitary(3, 7));
  const ProjectiveMeasurement mb(haar_unitary(2, 8));
  const auto seq = apply_one_sided(apply_one_sided(rho, ma, Side::A), mb, Side::B);
  EXPECT_TRUE(MatrixNear(apply_two_sided(rho, ma, mb).matrix(), seq.matrix(), 1e-14));
}

TEST(MarginalInvariant, MaximallyMixedAcceptsAnyBasis) {
  EXPECT_TRUE(marginal_invariant(ComplexMatrix::Identity(2, 2) / 2.0, ProjectiveMeasurement(haar_unitary(2, 9)),
                                 1e-12));
}

TEST(MarginalInvariant, EigenbasisOfNondegenerateMarginal) {
  EXPECT_TRUE(marginal_invariant(diag({0.7, 0.3}), ProjectiveMeasurement::computational(2), 1e-12));
}

TEST(MarginalInvariant, HadamardBasisFailsOnBiasedMarginal) {
  EXPECT_FALSE(marginal_invariant(diag({0.7, 0.3}), ProjectiveMeasurement(hadamard()), 1e-6));
}

TEST(AdmissibleParameterization, NondegenerateQubit) {
  const auto p = admissible_parameterization(diag({0.7, 0.3}));
  EXPECT_EQ(p.blocks.size(), 2u);
  EXPECT_EQ(p.free_parameter_count, 0);
}

TEST(AdmissibleParameterization, FullyDegenerateQubit) {
  const auto p = admissible_parameterization(ComplexMatrix::Identity(2, 2) / 2.0);
  ASSERT_EQ(p.blocks.size(), 1u);
  EXPECT_EQ(p.blocks[0].size, 2);
  EXPECT_EQ(p.free_parameter_count, 4);
  EXPECT_TRUE(p.fully_degenerate());
}

// A singleton block only carries a global phase, which leaves its projector
// unchanged, so only the doubly degenerate block is parameterized.
TEST(AdmissibleParameterization, MixedBlockStructure) {
  const auto p = admissible_parameterization(diag({0.5, 0.25, 0.25}));
  ASSERT_EQ(p.blocks.size(), 2u);
  EXPECT_EQ(p.blocks[0].size, 2);
  EXPECT_EQ(p.blocks[1].size, 1);
  EXPECT_EQ(p.free_parameter_count, 4);
}

TEST(AdmissibleParameterization, ToleranceControlsGrouping) {
  const ComplexMatrix m = diag({0.5 + 1e-10, 0.5 - 1e-10});
  EXPECT_EQ(admissible_parameterization(m, 1e-8).blocks.size(), 1u);
  EXPECT_EQ(admissible_parameterization(m, 0.0).blocks.size(), 2u);
  EXPECT_NEAR(admissible_parameterization(m, 0.0).smallest_gap(), 2e-10, 1e-15);
}

TEST(RealizeAdmissible, ZeroCoordsGiveEigenbasis) {
  const auto p = admissible_parameterization(ComplexMatrix::Identity(3, 3) / 3.0);
  const std::vector<double> zeros(9, 0.0);
  EXPECT_TRUE(MatrixNear(realize_admissible(p, zeros).basis(), p.eigenbasis, 1e-15));
}

TEST(RealizeAdmissible, NondegenerateIgnoresEmptyCoords) {
  ComplexMatrix m(2, 2);
  m << 0.6, Complex(0.1, 0.1), Complex(0.1, -0.1), 0.4;
  const auto p = admissible_parameterization(m);
  const auto meas = realize_admissible(p, {});
  EXPECT_TRUE(MatrixNear(meas.basis(), p.eigenbasis, 0.0));
  EXPECT_TRUE(marginal_invariant(m, meas, 1e-12));
}

TEST(RealizeAdmissible, RandomCoordsStayAdmissible) {
  Rng rng(12);
  std::uniform_real_distribution<double> u(-3.0, 3.0);
  for (const ComplexMatrix& marg : {ComplexMatrix(ComplexMatrix::Identity(2, 2) / 2.0), diag({0.5, 0.25, 0.25}),
                                    diag({0.1, 0.3, 0.3, 0.3})}) {
    const auto p = admissible_parameterization(marg);
    std::vector<double> coords(static_cast<std::size_t>(p.free_parameter_count));
    for (auto& c : coords) c = u(rng);
    const auto meas = realize_admissible(p, coords, random_anchor(p, rng));
    EXPECT_TRUE(is_unitary(meas.basis(), 1e-12));
    EXPECT_TRUE(marginal_invariant(marg, meas, 1e-12));
  }
}

TEST(RealizeAdmissible, WrongCoordinateCountRejected) {
  const auto p = admissible_parameterization(ComplexMatrix::Identity(2, 2) / 2.0);
  const std::vector<double> three(3, 0.0);
  EXPECT_THROW(realize_admissible(p, three), InputError);
}

TEST(HermitianFromCoords, Layout) {
  const std::vector<double> c{1.0, 2.0, 0.5, -0.25};
  const auto h = hermitian_from_coords(c, 2);
  EXPECT_EQ(h(0, 0), Complex(1.0, 0.0));
  EXPECT_EQ(h(1, 1), Complex(2.0, 0.0));
  EXPECT_EQ(h(0, 1), Complex(0.5, -0.25));
  EXPECT_EQ(h(1, 0), Complex(0.5, 0.25));
}

}  // namespace
}  // namespace minq

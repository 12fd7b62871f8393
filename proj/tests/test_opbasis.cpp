#include "minq/opbasis.hpp"
#include "test_support.hpp"

namespace minq {
namespace {

using testing::diag;
using testing::MatrixNear;

TEST(GellMann, QubitIsNormalizedPauli) {
  const auto b = gell_mann_basis(2);
  ASSERT_EQ(b.size(), 4u);
  const double r = 1.0 / std::sqrt(2.0);
  EXPECT_TRUE(MatrixNear(b[0], r * ComplexMatrix::Identity(2, 2), 1e-15));
  EXPECT_TRUE(MatrixNear(b[1], r * pauli_x(), 1e-15));
  EXPECT_TRUE(MatrixNear(b[2], r * pauli_y(), 1e-15));
  EXPECT_TRUE(MatrixNear(b[3], r * pauli_z(), 1e-15));
}

TEST(GellMann, OrthonormalHermitianInEveryDimension) {
  for (int d = 2; d <= 5; ++d) {
    const auto b = gell_mann_basis(d);
    ASSERT_EQ(b.size(), static_cast<std::size_t>(d * d));
    for (std::size_t i = 0; i < b.size(); ++i) {
      EXPECT_LT(hermiticity_defect(b[i]), 1e-15);
      for (std::size_t j = 0; j < b.size(); ++j) {
        EXPECT_NEAR(std::abs(frobenius_inner(b[i], b[j]) - (i == j ? 1.0 : 0.0)), 0.0, 1e-14);
      }
    }
  }
}

TEST(OperatorBasis, RejectsNonOrthonormalSet) {
  auto el = gell_mann_basis(2).elements();
  el[1] = el[2];
  EXPECT_THROW(OperatorBasis{el}, InputError);
}

TEST(Decompose, MaximallyMixed) {
  const auto bd = decompose(DensityMatrix::trusted(ComplexMatrix::Identity(6, 6) / 6.0, 2, 3));
  EXPECT_NEAR(bd.gamma(0, 0), 1.0 / std::sqrt(6.0), 1e-15);
  EXPECT_NEAR(bd.gamma.cwiseAbs().sum() - bd.gamma(0, 0), 0.0, 1e-14);
}

TEST(Decompose, BellDiagonalCorrelations) {
  const auto bd = decompose(bell_diagonal({0.2, -0.4, 0.3}));
  EXPECT_NEAR(bd.gamma(0, 0), 0.5, 1e-15);
  EXPECT_LT(bd.x.cwiseAbs().maxCoeff(), 1e-15);
  EXPECT_LT(bd.y.cwiseAbs().maxCoeff(), 1e-15);
  RealMatrix expected = RealMatrix::Zero(3, 3);
  expected.diagonal() << 0.1, -0.2, 0.15;
  EXPECT_LT((bd.t - expected).cwiseAbs().maxCoeff(), 1e-15);
  EXPECT_NEAR(bd.gamma_norm_sq, (1 + 0.04 + 0.16 + 0.09) / 4, 1e-15);
}

TEST(Decompose, NormEqualsPurity) {
  for (std::uint64_t seed = 0; seed < 5; ++seed) {
    const auto rho = random_density(3, 2, seed);
    EXPECT_NEAR(decompose(rho).gamma_norm_sq, rho.purity(), 1e-13);
  }
}

TEST(Decompose, SMatrixSides) {
  const auto bd = decompose(random_density(2, 3, 4));
  EXPECT_EQ(bd.s_matrix(Side::A).rows(), 3);
  EXPECT_EQ(bd.s_matrix(Side::B).rows(), 8);
}

TEST(Reconstruct, ZeroCorrelationsGiveMaximallyMixed) {
  BlochDecomposition bd;
  bd.dim_a = bd.dim_b = 2;
  bd.gamma = RealMatrix::Zero(4, 4);
  bd.gamma(0, 0) = 0.5;
  const auto rho = reconstruct(bd, gell_mann_basis(2), gell_mann_basis(2));
  EXPECT_TRUE(MatrixNear(rho.matrix(), ComplexMatrix::Identity(4, 4) / 4.0, 1e-15));
}

TEST(Reconstruct, BellDiagonalRoundTrip) {
  const auto rho = bell_diagonal({0.5, -0.1, 0.2});
  const auto back = reconstruct(decompose(rho), gell_mann_basis(2), gell_mann_basis(2));
  EXPECT_TRUE(MatrixNear(back.matrix(), rho.matrix(), 1e-15));
  const auto bd = decompose(back);
  EXPECT_NEAR(2 * bd.t(0, 0), 0.5, 1e-14);
  EXPECT_NEAR(2 * bd.t(1, 1), -0.1, 1e-14);
  EXPECT_NEAR(2 * bd.t(2, 2), 0.2, 1e-14);
}

TEST(Reconstruct, RandomRoundTripAcrossBases) {
  const auto rho = random_density(3, 3, 17);
  RealMatrix o = RealMatrix::Identity(8, 8);
  std::swap(o(0, 0), o(0, 1));
  std::swap(o(1, 1), o(1, 0));
  const auto basis = remix_traceless(gell_mann_basis(3), o);
  const auto back = reconstruct(decompose(rho, basis, basis), basis, basis);
  EXPECT_TRUE(MatrixNear(back.matrix(), rho.matrix(), 1e-14));
}

TEST(MeasurementCoefficients, ComputationalQubit) {
  const auto a = measurement_coefficients(ProjectiveMeasurement::computational(2), gell_mann_basis(2));
  const double r = 1.0 / std::sqrt(2.0);
  ASSERT_EQ(a.rows(), 2);
  ASSERT_EQ(a.cols(), 4);
  EXPECT_NEAR(a(0, 0), r, 1e-15);
  EXPECT_NEAR(a(0, 1), 0.0, 1e-15);
  EXPECT_NEAR(a(0, 2), 0.0, 1e-15);
  EXPECT_NEAR(a(0, 3), r, 1e-15);
  EXPECT_NEAR(a(1, 3), -r, 1e-15);
}

}  // namespace
}  // namespace minq

#include <gtest/gtest.h>

#include <numbers>

#include "oracles.hpp"
#include "qutrit/linalg.hpp"
#include "qutrit/states.hpp"

namespace qutrit {
namespace {

constexpr double kEq = 1e-12;
const std::array<std::size_t, 2> kTwoQutrits{3, 3};

Operator diag3(Complex a, Complex b, Complex c) { return Operator::diagonal(std::array<Complex, 3>{a, b, c}); }

void expect_ket_near(const Ket& a, const Ket& b, double tol = kEq) {
  ASSERT_EQ(a.dims(), b.dims());
  for (std::size_t i = 0; i < a.size(); ++i) EXPECT_LT(std::abs(a[i] - b[i]), tol) << "index " << i;
}

void expect_op_near(const Operator& a, const Operator& b, double tol = kEq) {
  ASSERT_EQ(a.dim(), b.dim());
  EXPECT_LT((a - b).max_abs(), tol);
}

TEST(Tensor, BasisTimesBasis) {
  const Ket k = tensor(Ket::basis({0}), Ket::basis({0}));
  ASSERT_EQ(k.size(), 9u);
  EXPECT_EQ(k[0], Complex(1.0));
  for (std::size_t i = 1; i < 9; ++i) EXPECT_EQ(k[i], Complex(0.0));
}

TEST(Tensor, ZeroQutritWithUniformChannel) {
  const Ket k = tensor(Ket::basis({0}), channel(ChannelKind::U));
  ASSERT_EQ(k.size(), 27u);
  EXPECT_EQ(k.dims(), (std::vector<std::size_t>{3, 3, 3}));
  for (std::size_t i = 0; i < 27; ++i) {
    const double expected = (i == 0 || i == 4 || i == 8) ? 1.0 / std::sqrt(3.0) : 0.0;
    EXPECT_NEAR(std::abs(k[i] - expected), 0.0, kEq) << i;
  }
}

TEST(Tensor, NormIsMultiplicative) {
  for (std::uint64_t i = 0; i < 100; ++i) {
    CounterRng rng(11, i);
    std::vector<Complex> av(3), bv(9);
    for (auto& z : av) z = rng.complex_normal();
    for (auto& z : bv) z = rng.complex_normal();
    const Ket a({3}, av), b({3, 3}, bv);
    EXPECT_NEAR(tensor(a, b).norm(), a.norm() * b.norm(), 1e-12 * a.norm() * b.norm());
  }
}

TEST(Ket, RejectsMalformedInput) {
  EXPECT_THROW(Ket({3}, {1.0, 0.0}), shape_error);
  EXPECT_THROW(Ket({2}, {1.0, 0.0}), shape_error);
  EXPECT_THROW(Ket({3}, {1.0, 0.0, std::nan("")}), numerical_error);
  EXPECT_THROW(Ket::basis({3}), shape_error);
}

TEST(Inner, LeslieExamples) {
  EXPECT_NEAR(std::abs(inner(leslie_state(0), leslie_state(0)) - 1.0), 0.0, kEq);
  EXPECT_NEAR(std::abs(inner(leslie_state(0), leslie_state(1))), 0.0, kEq);
  EXPECT_NEAR(std::abs(inner(channel(ChannelKind::U), channel(ChannelKind::NU))), 0.0, kEq);
}

TEST(Inner, ShapeMismatch) { EXPECT_THROW(inner(Ket::basis({0}), Ket::basis({0, 0})), shape_error); }

TEST(Apply, IdentityAndPrintedShift) {
  const Ket phi = Ket::qutrit(0.6, Complex(0, 0.8), 0.0);
  expect_ket_near(apply(Operator::identity(3), phi), phi);

  // U3 maps gamma|0> + alpha|1> + beta|2> back to alpha|0> + beta|1> + gamma|2>; alpha = 1.
  const Ket s3 = Ket::qutrit(0.0, 1.0, 0.0);
  expect_ket_near(apply(paper_correction(ChannelKind::U, 3).op, s3), Ket::basis({0}));
}

TEST(Apply, NonUnitaryDiagonalInvertsBranch) {
  const Operator nu0 = diag3(-0.5, 1.0, 1.0);
  for (std::uint64_t i = 0; i < 20; ++i) {
    CounterRng rng(12, i);
    const auto c = haar_qutrit(rng);
    const Ket q0 = Ket::qutrit(-2.0 * c[0], c[1], c[2]);
    expect_ket_near(apply(nu0, q0), Ket::qutrit(c[0], c[1], c[2]));
  }
}

TEST(Apply, DoesNotRenormalize) {
  const Ket out = apply(diag3(2.0, 2.0, 2.0), Ket::basis({1}));
  EXPECT_DOUBLE_EQ(out.norm(), 2.0);
  EXPECT_THROW(apply(Operator::identity(9), Ket::basis({1})), shape_error);
}

TEST(Dagger, Examples) {
  expect_op_near(dagger(Operator::identity(3)), Operator::identity(3));
  const Operator u1 = diag3(1.0, omega(1), omega(2));
  expect_op_near(dagger(u1) * u1, Operator::identity(3));
  const Operator nu0 = diag3(-0.5, 1.0, 1.0);
  expect_op_near(dagger(nu0) * nu0, diag3(0.25, 1.0, 1.0));
  EXPECT_GT((dagger(nu0) * nu0 - Operator::identity(3)).max_abs(), 0.7);
}

TEST(PartialTrace, ProductState) {
  const auto rho = DensityMatrix::from_ket(Ket::basis({0, 0}));
  const auto red = partial_trace(rho, 0, kTwoQutrits);
  expect_op_near(red.op(), Operator::projector(Ket::basis({0})));
}

TEST(PartialTrace, Channels) {
  const auto ru = DensityMatrix::from_ket(channel(ChannelKind::U));
  expect_op_near(partial_trace(ru, 0, kTwoQutrits).op(), Operator::identity(3).scaled(1.0 / 3.0));
  const auto rnu = DensityMatrix::from_ket(channel(ChannelKind::NU));
  expect_op_near(partial_trace(rnu, 0, kTwoQutrits).op(), diag3(2.0 / 3.0, 1.0 / 6.0, 1.0 / 6.0));
  expect_op_near(partial_trace(rnu, 1, kTwoQutrits).op(), diag3(2.0 / 3.0, 1.0 / 6.0, 1.0 / 6.0));
}

TEST(PartialTrace, InvalidFactor) {
  const auto rho = DensityMatrix::from_ket(Ket::basis({0, 0}));
  EXPECT_THROW(partial_trace(rho, 2, kTwoQutrits), shape_error);
  const std::array<std::size_t, 1> wrong{3};
  EXPECT_THROW(partial_trace(rho, 0, wrong), shape_error);
  EXPECT_THROW(partial_transpose(rho, 5, kTwoQutrits), shape_error);
}

TEST(PartialTrace, ThreeFactorsKeepsMiddle) {
  // |0>|1>|2> -> middle factor is |1><1|
  const auto rho = DensityMatrix::from_ket(Ket::basis({0, 1, 2}));
  const std::array<std::size_t, 3> dims{3, 3, 3};
  expect_op_near(partial_trace(rho, 1, dims).op(), Operator::projector(Ket::basis({1})));
}

TEST(PartialTrace, SchmidtSymmetryOnRandomStates) {
  for (std::uint64_t i = 0; i < 50; ++i) {
    CounterRng rng(13, i);
    const auto rho = DensityMatrix::from_ket(oracle::random_ket({3, 3}, rng));
    const auto a = partial_trace(rho, 0, kTwoQutrits);
    const auto b = partial_trace(rho, 1, kTwoQutrits);
    EXPECT_NEAR(a.trace(), 1.0, kEq);
    EXPECT_NEAR(b.trace(), 1.0, kEq);
    const auto ea = hermitian_eigenvalues(a.op()), eb = hermitian_eigenvalues(b.op());
    for (std::size_t j = 0; j < 3; ++j) {
      EXPECT_NEAR(ea[j], eb[j], 1e-10);
      EXPECT_GT(ea[j], -1e-12);
    }
  }
}

TEST(PartialTranspose, RealProductStateIsUnchanged) {
  const Operator ra = diag3(0.5, 0.3, 0.2);
  Operator rb(3);
  rb(0, 0) = 0.6;
  rb(1, 1) = 0.4;
  rb(0, 1) = rb(1, 0) = 0.1;
  const DensityMatrix rho(kron(ra, rb), {3, 3});
  expect_op_near(partial_transpose(rho, 0, kTwoQutrits), rho.op());
}

// Pure-state PT spectrum is {c_i^2} U {+/- c_i c_j, i<j}.
std::vector<double> pt_spectrum_closed_form(std::array<double, 3> c) {
  std::vector<double> s{c[0] * c[0], c[1] * c[1], c[2] * c[2]};
  for (int i = 0; i < 3; ++i)
    for (int j = i + 1; j < 3; ++j) {
      s.push_back(c[i] * c[j]);
      s.push_back(-c[i] * c[j]);
    }
  std::sort(s.begin(), s.end(), std::greater<>{});
  return s;
}

TEST(PartialTranspose, ChannelSpectra) {
  const double r6 = std::sqrt(6.0), r3 = std::sqrt(3.0);
  struct Case {
    ChannelKind kind;
    std::array<double, 3> c;
    double negative_sum;
  };
  for (const auto& tc : {Case{ChannelKind::NU, {2 / r6, 1 / r6, 1 / r6}, 5.0 / 6.0}, Case{ChannelKind::U, {1 / r3, 1 / r3, 1 / r3}, 1.0}}) {
    const auto pt = partial_transpose(DensityMatrix::from_ket(channel(tc.kind)), 0, kTwoQutrits);
    EXPECT_LT(pt.hermiticity_defect(), kEq);
    const auto eig = hermitian_eigenvalues(pt);
    const auto expected = pt_spectrum_closed_form(tc.c);
    ASSERT_EQ(eig.size(), 9u);
    double neg = 0.0;
    for (std::size_t i = 0; i < 9; ++i) {
      EXPECT_NEAR(eig[i], expected[i], 1e-10);
      if (eig[i] < 0) neg -= eig[i];
    }
    EXPECT_NEAR(neg, tc.negative_sum, 1e-10);
  }
  // chi^NU: negatives are -2/6 twice and -1/6 once.
  const auto eig = hermitian_eigenvalues(partial_transpose(DensityMatrix::from_ket(channel(ChannelKind::NU)), 1, kTwoQutrits));
  EXPECT_NEAR(eig[6], -1.0 / 6.0, 1e-10);
  EXPECT_NEAR(eig[7], -2.0 / 6.0, 1e-10);
  EXPECT_NEAR(eig[8], -2.0 / 6.0, 1e-10);
}

TEST(HermitianEigenvalues, DiagonalInputs) {
  const auto a = hermitian_eigenvalues(diag3(1.0 / 6.0, 2.0 / 3.0, 1.0 / 6.0));
  EXPECT_EQ(a, (std::vector<double>{2.0 / 3.0, 1.0 / 6.0, 1.0 / 6.0}));
  const auto b = hermitian_eigenvalues(Operator::identity(3).scaled(1.0 / 3.0));
  for (double x : b) EXPECT_DOUBLE_EQ(x, 1.0 / 3.0);
}

TEST(HermitianEigenvalues, MatchesSturmOracle) {
  for (std::size_t n : {3u, 9u}) {
    for (std::uint64_t i = 0; i < 25; ++i) {
      CounterRng rng(14 + n, i);
      const Operator h = oracle::random_hermitian(n, rng);
      const auto jac = hermitian_eigenvalues(h);
      const auto ref = oracle::sturm_eigenvalues(h);
      ASSERT_EQ(jac.size(), ref.size());
      for (std::size_t j = 0; j < n; ++j) EXPECT_NEAR(jac[j], ref[j], 1e-8) << "n=" << n << " case " << i;
    }
  }
}

TEST(HermitianEigenvalues, SumEqualsTraceAndDescending) {
  for (std::uint64_t i = 0; i < 30; ++i) {
    CounterRng rng(15, i);
    const Operator h = oracle::random_hermitian(9, rng);
    const auto e = hermitian_eigenvalues(h);
    EXPECT_TRUE(std::is_sorted(e.begin(), e.end(), std::greater<>{}));
    EXPECT_NEAR(std::accumulate(e.begin(), e.end(), 0.0), h.trace().real(), 1e-10);
  }
}

TEST(HermitianEigenvalues, InvariantUnderWeylConjugation) {
  for (std::uint64_t i = 0; i < 30; ++i) {
    CounterRng rng(16, i);
    const Operator h = oracle::random_hermitian(9, rng);
    const Operator u = kron(oracle::random_weyl_unitary(rng), oracle::random_weyl_unitary(rng));
    const auto before = hermitian_eigenvalues(h);
    const auto after = hermitian_eigenvalues(dagger(u) * h * u);
    for (std::size_t j = 0; j < 9; ++j) EXPECT_NEAR(before[j], after[j], 1e-10);
  }
}

TEST(HermitianEigenvalues, RejectsNonHermitian) {
  Operator o = Operator::identity(3);
  o(0, 1) = 1.0;
  EXPECT_THROW(hermitian_eigenvalues(o), contract_violation);
}

TEST(SingularValues, Examples) {
  for (double s : singular_values(diag3(1.0, omega(1), omega(2)))) EXPECT_NEAR(s, 1.0, kEq);
  const auto nu0 = singular_values(diag3(-0.5, 1.0, 1.0));
  EXPECT_NEAR(nu0[0], 1.0, kEq);
  EXPECT_NEAR(nu0[1], 1.0, kEq);
  EXPECT_NEAR(nu0[2], 0.5, kEq);
  const auto nu4 = singular_values(paper_correction(ChannelKind::NU, 4).op);
  EXPECT_NEAR(nu4[0], 2.0, kEq);
  EXPECT_NEAR(nu4[1], 2.0, kEq);
  EXPECT_NEAR(nu4[2], 1.0, kEq);
}

TEST(SingularValues, OperatorNormBound) {
  for (std::uint64_t i = 0; i < 100; ++i) {
    CounterRng rng(17, i);
    std::vector<Complex> e(9);
    for (auto& z : e) z = rng.complex_normal();
    const Operator o(3, e);
    const Ket psi = oracle::random_ket({3}, rng).scaled(1.0 + 3.0 * rng.uniform());
    EXPECT_LE(apply(o, psi).norm(), singular_values(o)[0] * psi.norm() + 1e-10);
  }
}

TEST(Monomial, Detection) {
  EXPECT_TRUE(is_monomial(paper_correction(ChannelKind::NU, 7).op));
  EXPECT_TRUE(is_monomial(Operator::identity(3)));
  Operator o = Operator::identity(3);
  o(0, 1) = 0.5;
  EXPECT_FALSE(is_monomial(o));
}

}  // namespace
}  // namespace qutrit

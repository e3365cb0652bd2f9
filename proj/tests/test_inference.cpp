#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <Eigen/Dense>
#include <cmath>
#include <numeric>
#include <random>

#include "ancova/distributions.hpp"
#include "ancova/errors.hpp"
#include "ancova/hypotheses.hpp"
#include "ancova/inference.hpp"
#include "ancova/model.hpp"
#include "support/oracles.hpp"

using ancova::classical_f_test;
using ancova::contrast_to_projection;
using ancova::Dataset;
using ancova::equal_means_contrast;
using ancova::fit_ols;
using ancova::FittedModel;
using ancova::Flavor;
using ancova::HypothesisSpec;
using ancova::Matrix;
using ancova::oneway_projection;
using ancova::sandwich;
using ancova::SandwichEstimate;
using ancova::TestResult;
using ancova::Vector;
using ancova::white_test;

namespace {

Dataset random_dataset(std::mt19937_64& gen, std::vector<std::size_t> sizes,
                       std::size_t r, double heterosked = 0.0) {
  std::normal_distribution<double> normal;
  const std::size_t n = std::accumulate(sizes.begin(), sizes.end(), std::size_t{0});
  std::vector<int> labels;
  for (std::size_t g = 0; g < sizes.size(); ++g)
    labels.insert(labels.end(), sizes[g], static_cast<int>(g + 1));
  Matrix z(n, r);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t k = 0; k < r; ++k) z(i, k) = normal(gen);
  Vector y(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double scale = 1.0 + heterosked * static_cast<double>(labels[i] - 1);
    y[i] = normal(gen) * scale + 0.4 * labels[i];
    for (std::size_t k = 0; k < r; ++k) y[i] += 0.8 * z(i, k);
  }
  return Dataset(std::move(y), std::move(labels), std::move(z));
}

// Eq.-style brute force in long double: N (X'X)^-1 X' diag(w) X (X'X)^-1.
Matrix brute_force_sandwich(const FittedModel& model, Flavor flavor) {
  const Matrix& x = model.design();
  const std::size_t n = x.rows();
  const std::size_t c = x.cols();

  std::vector<long double> gram(c * c, 0.0L);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < c; ++j)
      for (std::size_t k = 0; k < c; ++k)
        gram[j * c + k] += static_cast<long double>(x(i, j)) * x(i, k);

  // Invert the Gram matrix column by column.
  std::vector<long double> ginv(c * c, 0.0L);
  for (std::size_t col = 0; col < c; ++col) {
    std::vector<long double> e(c, 0.0L);
    e[col] = 1.0L;
    const auto sol = oracles::solve_dense_ld(gram, e, c);
    for (std::size_t rowi = 0; rowi < c; ++rowi) ginv[rowi * c + col] = sol[rowi];
  }

  std::vector<long double> meat(c * c, 0.0L);
  for (std::size_t i = 0; i < n; ++i) {
    long double w = static_cast<long double>(model.residuals()[i]) *
                    model.residuals()[i];
    if (flavor == Flavor::HC2) w /= 1.0L - model.leverages()[i];
    for (std::size_t j = 0; j < c; ++j)
      for (std::size_t k = 0; k < c; ++k)
        meat[j * c + k] += w * x(i, j) * x(i, k);
  }

  std::vector<long double> tmp(c * c, 0.0L), cov(c * c, 0.0L);
  for (std::size_t i = 0; i < c; ++i)
    for (std::size_t j = 0; j < c; ++j)
      for (std::size_t k = 0; k < c; ++k)
        tmp[i * c + j] += ginv[i * c + k] * meat[k * c + j];
  for (std::size_t i = 0; i < c; ++i)
    for (std::size_t j = 0; j < c; ++j)
      for (std::size_t k = 0; k < c; ++k)
        cov[i * c + j] += tmp[i * c + k] * ginv[k * c + j];

  Matrix out(c, c);
  for (std::size_t i = 0; i < c; ++i)
    for (std::size_t j = 0; j < c; ++j)
      out(i, j) = static_cast<double>(static_cast<long double>(n) * cov[i * c + j]);
  return out;
}

}  // namespace

TEST_CASE("sandwich: zero residuals give the zero matrix") {
  // Exact-fit data: y determined by group indicators.
  Dataset data(Vector{2.0, 2.0, 5.0, 5.0}, {1, 1, 2, 2}, Matrix(4, 0));
  const FittedModel model = fit_ols(data);
  CHECK(sandwich(model, Flavor::HC0).matrix.norm_inf() <= 1e-20);
}

TEST_CASE("sandwich: scalar hand computation") {
  // One group, two observations, residuals (1, -1):
  // N (X'X)^-1 X'DX (X'X)^-1 = 2 * 0.5 * 2 * 0.5 = 1.
  Dataset data(Vector{1.0, -1.0}, {1, 1}, Matrix(2, 0));
  const FittedModel model = fit_ols(data);
  const SandwichEstimate est = sandwich(model, Flavor::HC0);
  CHECK(est.matrix.rows() == 1);
  CHECK(est.matrix(0, 0) == doctest::Approx(1.0).epsilon(1e-14));
}

TEST_CASE("sandwich: HC0 equals the brute-force definition") {
  std::mt19937_64 gen(53);
  for (int trial = 0; trial < 20; ++trial) {
    const Dataset data = random_dataset(gen, {4, 5, 6}, 2, 0.5);
    const FittedModel model = fit_ols(data);
    const Matrix hc0 = sandwich(model, Flavor::HC0).matrix;
    const Matrix oracle = brute_force_sandwich(model, Flavor::HC0);
    CHECK(hc0.max_abs_diff(oracle) <= 1e-10 * (1.0 + oracle.norm_inf()));
  }
}

TEST_CASE("sandwich: symmetric and positive semidefinite") {
  std::mt19937_64 gen(59);
  for (int trial = 0; trial < 10; ++trial) {
    const Dataset data = random_dataset(gen, {5, 5, 5, 5}, 2, 1.0);
    const FittedModel model = fit_ols(data);
    for (Flavor flavor : {Flavor::HC0, Flavor::HC2}) {
      const Matrix s = sandwich(model, flavor).matrix;
      CHECK(s.max_abs_diff(s.transpose()) <= 1e-10 * (1.0 + s.norm_inf()));
      Eigen::MatrixXd m(s.rows(), s.cols());
      for (std::size_t i = 0; i < s.rows(); ++i)
        for (std::size_t j = 0; j < s.cols(); ++j) m(i, j) = s(i, j);
      Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(m);
      CHECK(es.eigenvalues().minCoeff() >= -1e-8 * es.eigenvalues().maxCoeff());
    }
  }
}

TEST_CASE("sandwich: HC2 dominates HC0 in the Loewner order") {
  std::mt19937_64 gen(61);
  for (int trial = 0; trial < 10; ++trial) {
    const Dataset data = random_dataset(gen, {4, 4, 4}, 1, 0.7);
    const FittedModel model = fit_ols(data);
    const Matrix diff =
        sandwich(model, Flavor::HC2).matrix - sandwich(model, Flavor::HC0).matrix;
    Eigen::MatrixXd m(diff.rows(), diff.cols());
    for (std::size_t i = 0; i < diff.rows(); ++i)
      for (std::size_t j = 0; j < diff.cols(); ++j) m(i, j) = diff(i, j);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(m);
    CHECK(es.eigenvalues().minCoeff() >= -1e-10 * (1.0 + es.eigenvalues().maxCoeff()));
  }
}

TEST_CASE("sandwich: leverage-one observation fails for HC2") {
  // A singleton group is fitted exactly: its leverage is 1.
  Dataset data(Vector{1.0, 2.0, 3.0, 9.0}, {1, 1, 1, 2}, Matrix(4, 0));
  const FittedModel model = fit_ols(data);
  CHECK_THROWS_AS(sandwich(model, Flavor::HC2), ancova::LeverageOne);
  CHECK_NOTHROW(sandwich(model, Flavor::HC0));
}

TEST_CASE("white_test: equal fitted group means give statistic zero") {
  Dataset data(Vector{1.0, 3.0, 1.0, 3.0}, {1, 1, 2, 2}, Matrix(4, 0));
  const FittedModel model = fit_ols(data);
  const TestResult res = white_test(model, equal_means_contrast(2, 0), Flavor::HC0);
  CHECK(res.statistic == doctest::Approx(0.0).epsilon(1e-12));
  CHECK(res.p_value == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("white_test: contrast and projection forms agree") {
  std::mt19937_64 gen(67);
  for (int trial = 0; trial < 20; ++trial) {
    const std::size_t a = 2 + trial % 3;
    const std::size_t r = trial % 2;
    const Dataset data = random_dataset(gen, std::vector<std::size_t>(a, 6), r, 0.5);
    const FittedModel model = fit_ols(data);
    for (Flavor flavor : {Flavor::HC0, Flavor::HC2}) {
      const TestResult via_h = white_test(model, equal_means_contrast(a, r), flavor);
      const TestResult via_t = white_test(model, oneway_projection(a, r), flavor);
      CHECK(via_t.statistic ==
            doctest::Approx(via_h.statistic).epsilon(1e-8));
      CHECK(via_t.df1 == via_h.df1);
    }
  }
}

TEST_CASE("white_test: p-value is the chi-square survival at the statistic") {
  std::mt19937_64 gen(71);
  const Dataset data = random_dataset(gen, {8, 8, 8}, 1, 0.3);
  const FittedModel model = fit_ols(data);
  const TestResult res = white_test(model, equal_means_contrast(3, 1), Flavor::HC2);
  CHECK(res.p_value == doctest::Approx(ancova::chisq_sf(res.statistic, 2)).epsilon(1e-14));
  CHECK(res.df1 == 2);
}

TEST_CASE("white_test: zero-residual data has a singular Wald core") {
  // Group size 4 keeps (X'X)^-1 a power of two, so the residuals are exactly
  // zero and the sandwich collapses to the zero matrix.
  Dataset data(Vector{2.0, 2.0, 2.0, 2.0, 5.0, 5.0, 5.0, 5.0},
               {1, 1, 1, 1, 2, 2, 2, 2}, Matrix(8, 0));
  const FittedModel model = fit_ols(data);
  CHECK(model.residuals().norm_inf() == 0.0);
  CHECK_THROWS_AS(white_test(model, equal_means_contrast(2, 0), Flavor::HC0),
                  ancova::SingularWaldCore);
}

TEST_CASE("classical_f_test: zero contrast gives p-value one") {
  Dataset data(Vector{1.0, 3.0, 1.0, 3.0}, {1, 1, 2, 2}, Matrix(4, 0));
  const FittedModel model = fit_ols(data);
  const TestResult res = classical_f_test(model, equal_means_contrast(2, 0));
  CHECK(res.statistic == doctest::Approx(0.0).epsilon(1e-12));
  CHECK(res.p_value == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(res.df1 == 1);
  CHECK(res.df2.value() == 2);
}

TEST_CASE("classical_f_test: equals the two-sample pooled t squared") {
  Dataset data(Vector{1.0, 2.0, 4.0, 6.0, 7.0, 11.0}, {1, 1, 1, 2, 2, 2},
               Matrix(6, 0));
  const FittedModel model = fit_ols(data);
  const TestResult res = classical_f_test(model, equal_means_contrast(2, 0));

  const double m1 = (1.0 + 2.0 + 4.0) / 3.0;
  const double m2 = (6.0 + 7.0 + 11.0) / 3.0;
  const double ss1 = (1 - m1) * (1 - m1) + (2 - m1) * (2 - m1) + (4 - m1) * (4 - m1);
  const double ss2 = (6 - m2) * (6 - m2) + (7 - m2) * (7 - m2) + (11 - m2) * (11 - m2);
  const double pooled = (ss1 + ss2) / 4.0;
  const double t = (m1 - m2) / std::sqrt(pooled * (1.0 / 3.0 + 1.0 / 3.0));
  CHECK(res.statistic == doctest::Approx(t * t).epsilon(1e-12));
}

TEST_CASE("classical_f_test requires a contrast hypothesis") {
  std::mt19937_64 gen(73);
  const Dataset data = random_dataset(gen, {5, 5}, 0);
  const FittedModel model = fit_ols(data);
  CHECK_THROWS_AS(classical_f_test(model, oneway_projection(2, 0)),
                  ancova::InvalidArgument);
}

TEST_CASE("scale equivariance of the Wald statistic") {
  std::mt19937_64 gen(79);
  const Dataset data = random_dataset(gen, {6, 6, 6}, 2, 0.4);
  const FittedModel base = fit_ols(data);
  const HypothesisSpec hyp = equal_means_contrast(3, 2);
  const double s = 37.5;
  const FittedModel scaled = fit_ols(
      Dataset(data.response().scaled(s), data.group_of(), data.covariates()));
  for (Flavor flavor : {Flavor::HC0, Flavor::HC2}) {
    const double t0 = white_test(base, hyp, flavor).statistic;
    const double t1 = white_test(scaled, hyp, flavor).statistic;
    CHECK(t1 == doctest::Approx(t0).epsilon(1e-8));
  }
  CHECK(classical_f_test(scaled, hyp).statistic ==
        doctest::Approx(classical_f_test(base, hyp).statistic).epsilon(1e-8));
}

TEST_CASE("location invariance of both tests") {
  std::mt19937_64 gen(83);
  const Dataset data = random_dataset(gen, {6, 6, 6, 6}, 2, 0.4);
  const FittedModel base = fit_ols(data);
  const HypothesisSpec hyp = equal_means_contrast(4, 2);

  Vector shifted_y = data.response();
  for (std::size_t i = 0; i < shifted_y.size(); ++i) shifted_y[i] += 123.25;
  const FittedModel shifted =
      fit_ols(Dataset(shifted_y, data.group_of(), data.covariates()));

  for (Flavor flavor : {Flavor::HC0, Flavor::HC2}) {
    CHECK(white_test(shifted, hyp, flavor).statistic ==
          doctest::Approx(white_test(base, hyp, flavor).statistic).epsilon(1e-8));
  }
  CHECK(classical_f_test(shifted, hyp).statistic ==
        doctest::Approx(classical_f_test(base, hyp).statistic).epsilon(1e-8));
}

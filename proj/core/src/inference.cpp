#include "ancova/inference.hpp"

#include <cmath>
#include <string>

#include "ancova/distributions.hpp"
#include "ancova/errors.hpp"

namespace ancova {

namespace {

// X' diag(w) X accumulated row by row (symmetric, c x c).
Matrix weighted_gram(const Matrix& x, const Vector& w) {
  const std::size_t n = x.rows();
  const std::size_t c = x.cols();
  Matrix m(c, c);
  for (std::size_t i = 0; i < n; ++i) {
    const double wi = w[i];
    if (wi == 0.0) continue;
    const double* row = x.row_data(i);
    for (std::size_t j = 0; j < c; ++j) {
      const double wj = wi * row[j];
      if (wj == 0.0) continue;
      for (std::size_t k = j; k < c; ++k) m(j, k) += wj * row[k];
    }
  }
  for (std::size_t j = 0; j < c; ++j)
    for (std::size_t k = 0; k < j; ++k) m(j, k) = m(k, j);
  return m;
}

}  // namespace

SandwichEstimate sandwich(const FittedModel& model, Flavor flavor) {
  const std::size_t n = model.n_total();
  const Vector& u = model.residuals();
  const Vector& lev = model.leverages();

  Vector w(n);
  for (std::size_t i = 0; i < n; ++i) {
    double wi = u[i] * u[i];
    if (flavor == Flavor::HC2) {
      if (lev[i] >= 1.0 - 1e-10)
        throw LeverageOne("sandwich: observation " + std::to_string(i) +
                          " has leverage numerically equal to one");
      wi /= 1.0 - lev[i];
    }
    w[i] = wi;
  }

  // (X'X/N)^-1 N^-1 X'DX (X'X/N)^-1 == N * G (X'DX) G with G = (X'X)^-1.
  const Matrix meat = weighted_gram(model.design(), w);
  const Matrix& g = model.gram_inverse();
  Matrix cov = (g * meat * g).scaled(static_cast<double>(n));
  return SandwichEstimate{flavor, std::move(cov), n};
}

TestResult white_test(const FittedModel& model, const HypothesisSpec& hyp,
                      Flavor flavor) {
  if (hyp.n_parameters() != model.n_parameters())
    throw InvalidArgument("white_test: hypothesis size does not match model");

  const SandwichEstimate est = sandwich(model, flavor);
  const Matrix& m = hyp.matrix();
  const Vector hb = m * model.beta_hat();
  const Matrix core = m * est.matrix * m.transpose();
  const double n = static_cast<double>(model.n_total());

  double statistic = 0.0;
  if (hyp.kind() == HypothesisKind::Contrast) {
    Matrix rhs(hb.size(), 1);
    for (std::size_t i = 0; i < hb.size(); ++i) rhs(i, 0) = hb[i];
    Matrix solved;
    try {
      solved = solve_spd(core, rhs);
    } catch (const SingularMatrix& e) {
      throw SingularWaldCore(std::string("white_test: H Cov H' is singular (") +
                             e.what() + ")");
    }
    for (std::size_t i = 0; i < hb.size(); ++i) statistic += hb[i] * solved(i, 0);
  } else {
    const Matrix pinv = pseudoinverse(core);
    const Vector tmp = pinv * hb;
    statistic = hb.dot(tmp);
  }
  statistic *= n;
  if (statistic < 0.0 && statistic > -1e-10) statistic = 0.0;

  TestResult result;
  result.method = Method::WhiteAsymptotic;
  result.statistic = statistic;
  result.df1 = hyp.rank();
  result.p_value = chisq_sf(statistic, hyp.rank());
  result.flavor = flavor;
  return result;
}

TestResult classical_f_test(const FittedModel& model, const HypothesisSpec& hyp) {
  if (hyp.kind() != HypothesisKind::Contrast)
    throw InvalidArgument("classical_f_test: hypothesis must be a contrast");
  if (hyp.n_parameters() != model.n_parameters())
    throw InvalidArgument("classical_f_test: hypothesis size does not match model");
  const std::size_t n = model.n_total();
  const std::size_t c = model.n_parameters();
  const std::size_t q = hyp.rank();
  if (n <= c)
    throw InvalidArgument("classical_f_test: needs N > number of parameters");

  const Matrix& h = hyp.matrix();
  const Vector hb = h * model.beta_hat();
  const Matrix core = h * model.gram_inverse() * h.transpose();

  Matrix rhs(hb.size(), 1);
  for (std::size_t i = 0; i < hb.size(); ++i) rhs(i, 0) = hb[i];
  const Matrix solved = solve_spd(core, rhs);
  double numerator = 0.0;
  for (std::size_t i = 0; i < hb.size(); ++i) numerator += hb[i] * solved(i, 0);
  numerator /= static_cast<double>(q);

  const Vector& u = model.residuals();
  const double sigma2 = u.dot(u) / static_cast<double>(n - c);
  double statistic = numerator / sigma2;
  if (statistic < 0.0 && statistic > -1e-10) statistic = 0.0;

  TestResult result;
  result.method = Method::ClassicalF;
  result.statistic = statistic;
  result.df1 = q;
  result.df2 = n - c;
  result.p_value = f_sf(statistic, q, n - c);
  return result;
}

}  // namespace ancova

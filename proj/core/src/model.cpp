#include "ancova/model.hpp"

#include <algorithm>
#include <string>

#include "ancova/errors.hpp"

namespace ancova {

Dataset::Dataset(Vector response, std::vector<int> group_of, Matrix covariates)
    : response_(std::move(response)),
      group_of_(std::move(group_of)),
      covariates_(std::move(covariates)) {
  const std::size_t n = response_.size();
  if (n == 0) throw InvalidArgument("Dataset: empty response");
  if (group_of_.size() != n)
    throw InvalidArgument("Dataset: group labels do not match response length");
  if (covariates_.rows() != 0 && covariates_.rows() != n)
    throw InvalidArgument("Dataset: covariate rows do not match response length");
  if (covariates_.rows() == 0 && covariates_.cols() == 0)
    covariates_ = Matrix(n, 0);

  int max_label = 0;
  for (int g : group_of_) {
    if (g < 1) throw InvalidArgument("Dataset: group labels must be >= 1");
    max_label = std::max(max_label, g);
  }
  n_groups_ = static_cast<std::size_t>(max_label);

  std::vector<std::size_t> counts(n_groups_, 0);
  for (int g : group_of_) ++counts[static_cast<std::size_t>(g - 1)];
  for (std::size_t i = 0; i < n_groups_; ++i) {
    if (counts[i] == 0)
      throw EmptyGroup("Dataset: group " + std::to_string(i + 1) + " has no observations");
  }
}

std::vector<std::size_t> Dataset::group_sizes() const {
  std::vector<std::size_t> counts(n_groups_, 0);
  for (int g : group_of_) ++counts[static_cast<std::size_t>(g - 1)];
  return counts;
}

Matrix build_design(const Dataset& data) {
  const std::size_t n = data.n_total();
  const std::size_t a = data.n_groups();
  const std::size_t r = data.n_covariates();
  Matrix x(n, a + r);
  for (std::size_t i = 0; i < n; ++i) {
    x(i, static_cast<std::size_t>(data.group_of()[i] - 1)) = 1.0;
    for (std::size_t k = 0; k < r; ++k) x(i, a + k) = data.covariates()(i, k);
  }
  return x;
}

FittedModel::FittedModel(Matrix design, Vector beta_hat, Vector residuals,
                         Vector leverages, Matrix gram_inverse)
    : design_(std::move(design)),
      beta_hat_(std::move(beta_hat)),
      residuals_(std::move(residuals)),
      leverages_(std::move(leverages)),
      gram_inverse_(std::move(gram_inverse)) {}

FittedModel fit_design(const Matrix& design, const Vector& response) {
  const std::size_t n = design.rows();
  const std::size_t c = design.cols();
  if (response.size() != n)
    throw InvalidArgument("fit_design: response length does not match design rows");
  if (n < c)
    throw RankDeficient("fit_design: fewer observations than parameters", c - 1);

  // Gram matrix and X'y in one pass over the rows.
  Matrix gram(c, c);
  Vector xty(c);
  for (std::size_t i = 0; i < n; ++i) {
    const double* row = design.row_data(i);
    const double yi = response[i];
    for (std::size_t j = 0; j < c; ++j) {
      const double xj = row[j];
      if (xj == 0.0) continue;
      xty[j] += xj * yi;
      for (std::size_t k = j; k < c; ++k) gram(j, k) += xj * row[k];
    }
  }
  for (std::size_t j = 0; j < c; ++j)
    for (std::size_t k = 0; k < j; ++k) gram(j, k) = gram(k, j);

  Matrix gram_inverse;
  try {
    gram_inverse = solve_spd(gram, Matrix::identity(c));
  } catch (const SingularMatrix& e) {
    // The Cholesky reports the failing column in its message; recover it.
    const std::string msg = e.what();
    std::size_t col = 0;
    const auto pos = msg.rfind("column ");
    if (pos != std::string::npos) col = std::stoul(msg.substr(pos + 7));
    throw RankDeficient("fit_design: design is rank deficient at column " +
                            std::to_string(col),
                        col);
  }

  Vector beta(c);
  for (std::size_t j = 0; j < c; ++j) {
    double acc = 0.0;
    for (std::size_t k = 0; k < c; ++k) acc += gram_inverse(j, k) * xty[k];
    beta[j] = acc;
  }

  Vector residuals(n);
  Vector leverages(n);
  std::vector<double> gx(c);
  for (std::size_t i = 0; i < n; ++i) {
    const double* row = design.row_data(i);
    double fitted = 0.0;
    for (std::size_t j = 0; j < c; ++j) fitted += row[j] * beta[j];
    residuals[i] = response[i] - fitted;

    // Leverage p_ii = x_i' (X'X)^-1 x_i, computed row by row.
    for (std::size_t j = 0; j < c; ++j) {
      double acc = 0.0;
      for (std::size_t k = 0; k < c; ++k) acc += gram_inverse(j, k) * row[k];
      gx[j] = acc;
    }
    double lev = 0.0;
    for (std::size_t j = 0; j < c; ++j) lev += row[j] * gx[j];
    leverages[i] = lev;
  }

  return FittedModel(design, std::move(beta), std::move(residuals),
                     std::move(leverages), std::move(gram_inverse));
}

FittedModel fit_ols(const Dataset& data) {
  return fit_design(build_design(data), data.response());
}

}  // namespace ancova

#pragma once

#include <cstddef>
#include <vector>

#include "ancova/matrix.hpp"

namespace ancova {

/// One grouped sample: responses, group labels in 1..a, and an N x r block
/// of fixed covariates (r may be zero).
class Dataset {
 public:
  Dataset(Vector response, std::vector<int> group_of, Matrix covariates);

  std::size_t n_total() const { return response_.size(); }
  std::size_t n_groups() const { return n_groups_; }
  std::size_t n_covariates() const { return covariates_.cols(); }

  const Vector& response() const { return response_; }
  const std::vector<int>& group_of() const { return group_of_; }
  const Matrix& covariates() const { return covariates_; }
  std::vector<std::size_t> group_sizes() const;

 private:
  Vector response_;
  std::vector<int> group_of_;
  Matrix covariates_;
  std::size_t n_groups_ = 0;
};

/// N x (a + r) design matrix: one indicator column per group followed by the
/// covariate columns, observation order preserved.
Matrix build_design(const Dataset& data);

/// Ordinary least squares fit with cached quantities needed by the
/// heteroskedasticity-robust tests.
class FittedModel {
 public:
  FittedModel(Matrix design, Vector beta_hat, Vector residuals,
              Vector leverages, Matrix gram_inverse);

  const Matrix& design() const { return design_; }
  const Vector& beta_hat() const { return beta_hat_; }
  const Vector& residuals() const { return residuals_; }
  /// Diagonal of the hat matrix X (X'X)^-1 X'.
  const Vector& leverages() const { return leverages_; }
  const Matrix& gram_inverse() const { return gram_inverse_; }
  std::size_t n_total() const { return design_.rows(); }
  std::size_t n_parameters() const { return design_.cols(); }

 private:
  Matrix design_;
  Vector beta_hat_;
  Vector residuals_;
  Vector leverages_;
  Matrix gram_inverse_;
};

/// Fits the cell-means ANCOVA model by OLS. Throws RankDeficient (naming the
/// offending design column) when X'X is numerically singular.
FittedModel fit_ols(const Dataset& data);

/// Fit against an already-built design matrix.
FittedModel fit_design(const Matrix& design, const Vector& response);

}  // namespace ancova

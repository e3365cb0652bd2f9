#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "ancova/matrix.hpp"

namespace ancova {

enum class HypothesisKind { Contrast, Projection };

enum class TwowayEffect { MainB, MainC, Interaction };
enum class NestedEffect { Category, Subcategory };

/// A linear hypothesis about the parameter vector beta = (mu', nu')',
/// either as a full-row-rank contrast matrix H (q x c) or as a symmetric
/// idempotent projection matrix T (c x c). In both forms the hypothesis is
/// "matrix * beta = 0".
class HypothesisSpec {
 public:
  /// Validates full row rank (smallest singular value of H H' above
  /// 1e-10 times the largest).
  static HypothesisSpec contrast(Matrix h);

  /// Validates T T == T and T == T' within 1e-10; rank is the trace rounded
  /// to the nearest integer and must be within 1e-6 of it.
  static HypothesisSpec projection(Matrix t);

  HypothesisKind kind() const { return kind_; }
  const Matrix& matrix() const { return matrix_; }
  std::size_t rank() const { return rank_; }
  /// Number of model parameters the hypothesis refers to.
  std::size_t n_parameters() const { return matrix_.cols(); }

 private:
  HypothesisSpec(HypothesisKind kind, Matrix matrix, std::size_t rank)
      : kind_(kind), matrix_(std::move(matrix)), rank_(rank) {}

  HypothesisKind kind_;
  Matrix matrix_;
  std::size_t rank_;
};

/// a-dimensional centering matrix I_a - J_a / a.
Matrix centering(std::size_t a);

/// Contrast H = (1_{a-1}, -I_{a-1}, 0_r) testing equality of the a adjusted
/// group means in a model with r covariates.
HypothesisSpec equal_means_contrast(std::size_t a, std::size_t r);

/// Orthogonal projection T = H' (H H')^-1 H with the same null space as H.
HypothesisSpec contrast_to_projection(const HypothesisSpec& h);

/// One-way layout projection diag(P_a, 0_r).
HypothesisSpec oneway_projection(std::size_t a, std::size_t r);

/// Crossed two-way layout with b x c cells (group index = (i-1)*c + j).
/// Main effects and interaction projections diag(T_f, 0_r).
HypothesisSpec twoway_projection(std::size_t b, std::size_t c,
                                 TwowayEffect effect, std::size_t r);

/// Contrast formulation of the same two-way hypotheses.
HypothesisSpec twoway_contrast(std::size_t b, std::size_t c,
                               TwowayEffect effect, std::size_t r);

/// Hierarchically nested two-way design with b categories and c_per[i]
/// sub-categories inside category i (cells ordered block by block).
HypothesisSpec nested_projection(std::size_t b,
                                 std::span<const std::size_t> c_per,
                                 NestedEffect effect, std::size_t r);

/// Contrast formulation of the nested hypotheses.
HypothesisSpec nested_contrast(std::size_t b,
                               std::span<const std::size_t> c_per,
                               NestedEffect effect, std::size_t r);

}  // namespace ancova

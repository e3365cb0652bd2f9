#pragma once

#include <cstddef>
#include <optional>

#include "ancova/hypotheses.hpp"
#include "ancova/matrix.hpp"
#include "ancova/model.hpp"

namespace ancova {

/// Which heteroskedasticity-consistent weighting to use: HC0 takes the raw
/// squared residuals, HC2 divides each by (1 - p_ii).
enum class Flavor { HC0, HC2 };

enum class Method { WhiteAsymptotic, ClassicalF, WildBootstrap };

/// Estimate of Cov(sqrt(N) * beta_hat).
struct SandwichEstimate {
  Flavor flavor;
  Matrix matrix;
  std::size_t n_total;
};

struct TestResult {
  Method method;
  double statistic = 0.0;
  std::size_t df1 = 0;
  std::optional<std::size_t> df2;
  double p_value = 1.0;
  std::optional<Flavor> flavor;
};

/// (X'X/N)^-1 N^-1 X' diag(w_i) X (X'X/N)^-1 with w_i the flavor's weights.
/// Throws LeverageOne for HC2 when some p_ii >= 1 - 1e-10.
SandwichEstimate sandwich(const FittedModel& model, Flavor flavor);

/// Wald-type test of "hypothesis matrix * beta = 0" against the chi-square
/// limit with q = rank degrees of freedom. Contrast hypotheses invert
/// H Cov H' and throw SingularWaldCore if it is numerically singular;
/// projection hypotheses use the Moore-Penrose inverse.
TestResult white_test(const FittedModel& model, const HypothesisSpec& hyp,
                      Flavor flavor);

/// Classical ANCOVA F test assuming homoskedastic normal errors; requires a
/// contrast hypothesis.
TestResult classical_f_test(const FittedModel& model, const HypothesisSpec& hyp);

}  // namespace ancova

#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "ancova/inference.hpp"
#include "ancova/matrix.hpp"
#include "ancova/model.hpp"
#include "ancova/rng.hpp"

namespace ancova {

enum class ErrorDistribution { StandardNormal, Lognormal, DoubleExponential, ChiSquare5 };

enum class VarianceScenarioKind { I, II, III };

/// Group/observation variance patterns:
///   I   - every observation has variance 1,
///   II  - group i has variance i,
///   III - within group 1 the first floor(n1/2) observations have variance 1
///         and the rest variance 2; group i >= 2 has variance i + 1.
struct VarianceScenario {
  VarianceScenarioKind kind = VarianceScenarioKind::I;

  /// Standard deviation of every observation, in group-major order.
  Vector per_observation_sd(std::span<const std::size_t> group_sizes) const;
};

struct SimulationScenario {
  std::vector<std::size_t> group_sizes;
  ErrorDistribution distribution = ErrorDistribution::StandardNormal;
  VarianceScenario variances;
  /// Group means; zero vector for a null configuration. Empty means all zero.
  Vector mu;
  /// Regression coefficients of the fixed covariates (at most two).
  Vector coefficients = Vector{-0.5, 1.5};
  std::size_t n_sim = 2000;
  std::size_t n_boot = 1000;
  double alpha = 0.05;
  Flavor flavor = Flavor::HC2;
  std::uint64_t seed = 0;

  std::size_t n_total() const;
  std::size_t n_groups() const { return group_sizes.size(); }
};

struct MethodRates {
  double f = 0.0;
  double white = 0.0;
  double wb = 0.0;
};

struct SimulationReport {
  MethodRates rejection_rate;
  MethodRates monte_carlo_se;
  std::size_t n_sim_effective = 0;
  SimulationScenario scenario;
};

struct PowerPoint {
  double delta = 0.0;
  double power_f = 0.0;
  double power_wb = 0.0;
  double se_f = 0.0;
  double se_wb = 0.0;
};

/// The two fixed covariate vectors as an N x 2 matrix: column one is equally
/// spaced on [-10, 10]; column two is descending, the first ceil(N/2) entries
/// equally spaced from 5 to 0 and the remaining floor(N/2) from -1 to -2.
Matrix paper_covariates(std::size_t n);

/// Centers and scales raw i.i.d. draws by the named distribution's analytic
/// mean and standard deviation, then multiplies entry i by sds[i].
Vector standardize_and_scale(const Vector& raw, const Vector& sds,
                             ErrorDistribution kind);

/// One synthetic dataset: Y_i = mu_g(i) + z_i' nu + eps_i with covariates
/// taken from paper_covariates in group-major observation order.
Dataset generate_dataset(const SimulationScenario& scenario, SplitRng& stream);

/// Monte Carlo estimate of the type I error rates of the classical F test,
/// the robust Wald test and its wild bootstrap version under the scenario's
/// equal-means null. Deterministic in the scenario (thread count only
/// changes wall time).
SimulationReport run_type1_study(const SimulationScenario& scenario,
                                 unsigned threads = 0);

/// Empirical power curve over mean shifts delta (two-group scenarios):
/// group means are (0, delta).
std::vector<PowerPoint> run_power_study(const std::vector<double>& deltas,
                                        const SimulationScenario& base,
                                        unsigned threads = 0);

const char* to_string(ErrorDistribution kind);
const char* to_string(VarianceScenarioKind kind);
const char* to_string(Flavor flavor);

namespace detail {

/// Builds the dataset for a known error vector (used to pin the mean part).
Dataset assemble_dataset(const SimulationScenario& scenario, const Vector& errors);

/// One raw draw before standardization.
double draw_raw(ErrorDistribution kind, SplitRng& rng);

}  // namespace detail

}  // namespace ancova

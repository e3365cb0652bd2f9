#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "ancova/hypotheses.hpp"
#include "ancova/inference.hpp"
#include "ancova/model.hpp"

namespace ancova {

enum class Multiplier { Rademacher };

struct BootstrapConfig {
  std::size_t replications = 1000;
  Flavor flavor = Flavor::HC2;
  Multiplier multiplier = Multiplier::Rademacher;
  std::uint64_t seed = 0;
};

struct BootstrapResult {
  /// Wald statistic of the original data.
  double observed = 0.0;
  /// All B resampled statistics, sorted ascending. Replicates whose Wald
  /// core was singular enter as +infinity, so the length is always B.
  std::vector<double> draws;
  double p_value = 1.0;
  std::size_t degenerate_count = 0;
};

/// Wild bootstrap of the heteroskedasticity-robust Wald test.
///
/// Each replicate draws i.i.d. Rademacher multipliers T_i from the stream
/// derived from (cfg.seed, replicate index), forms
///   Y*_i = x_i' beta_hat + u_i (1 - p_ii)^{-1/2} T_i,
/// refits beta* = (X'X)^-1 X' Y* against the unchanged design, rebuilds the
/// sandwich estimate from the bootstrap residuals under cfg.flavor, and
/// evaluates the same Wald statistic. The p-value is
/// (1 + #{T* >= T_observed}) / (B + 1).
///
/// Results are bit-identical for a given (model, hyp, cfg) regardless of
/// `threads`.
BootstrapResult wild_bootstrap_test(const FittedModel& model,
                                    const HypothesisSpec& hyp,
                                    const BootstrapConfig& cfg,
                                    unsigned threads = 1);

namespace detail {

/// Test hook: supplies the multiplier vector of each replicate.
class MultiplierSource {
 public:
  virtual ~MultiplierSource() = default;
  virtual void fill(std::uint64_t replicate, std::span<double> out) const = 0;
};

/// Default source: replicate b draws from SplitRng::from(seed).split(b).
class RademacherSource final : public MultiplierSource {
 public:
  explicit RademacherSource(std::uint64_t seed) : seed_(seed) {}
  void fill(std::uint64_t replicate, std::span<double> out) const override;

 private:
  std::uint64_t seed_;
};

BootstrapResult wild_bootstrap_with_source(const FittedModel& model,
                                           const HypothesisSpec& hyp,
                                           const BootstrapConfig& cfg,
                                           const MultiplierSource& source,
                                           unsigned threads);

}  // namespace detail

}  // namespace ancova

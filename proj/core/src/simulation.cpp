#include "ancova/simulation.hpp"

#include <array>
#include <cmath>
#include <numeric>
#include <sstream>

#include "ancova/bootstrap.hpp"
#include "ancova/distributions.hpp"
#include "ancova/errors.hpp"
#include "ancova/hypotheses.hpp"
#include "parallel.hpp"

namespace ancova {

namespace detail {

double draw_raw(ErrorDistribution kind, SplitRng& rng) {
  switch (kind) {
    case ErrorDistribution::StandardNormal:
      return normal_quantile(rng.next_open01());
    case ErrorDistribution::Lognormal:
      return std::exp(normal_quantile(rng.next_open01()));
    case ErrorDistribution::DoubleExponential: {
      const double u = rng.next_open01();
      return u < 0.5 ? std::log(2.0 * u) : -std::log(2.0 * (1.0 - u));
    }
    case ErrorDistribution::ChiSquare5: {
      double acc = 0.0;
      for (int k = 0; k < 5; ++k) {
        const double z = normal_quantile(rng.next_open01());
        acc += z * z;
      }
      return acc;
    }
  }
  throw UnknownDistribution("draw_raw: unknown error distribution");
}

Dataset assemble_dataset(const SimulationScenario& scenario, const Vector& errors) {
  const std::size_t a = scenario.n_groups();
  const std::size_t n = scenario.n_total();
  const std::size_t r = scenario.coefficients.size();
  if (errors.size() != n)
    throw InvalidScenario("assemble_dataset: error vector length mismatch");

  Matrix covariates(n, r);
  if (r > 0) {
    const Matrix z = paper_covariates(n);
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t k = 0; k < r; ++k) covariates(i, k) = z(i, k);
  }

  std::vector<int> labels(n);
  Vector y(n);
  std::size_t row = 0;
  for (std::size_t g = 0; g < a; ++g) {
    const double mean_g = scenario.mu.size() == 0 ? 0.0 : scenario.mu[g];
    for (std::size_t j = 0; j < scenario.group_sizes[g]; ++j, ++row) {
      labels[row] = static_cast<int>(g + 1);
      double value = mean_g + errors[row];
      for (std::size_t k = 0; k < r; ++k)
        value += scenario.coefficients[k] * covariates(row, k);
      y[row] = value;
    }
  }
  return Dataset(std::move(y), std::move(labels), std::move(covariates));
}

}  // namespace detail

namespace {

struct Moments {
  double mean;
  double sd;
};

Moments analytic_moments(ErrorDistribution kind) {
  switch (kind) {
    case ErrorDistribution::StandardNormal:
      return {0.0, 1.0};
    case ErrorDistribution::Lognormal:
      // exp(Z) with Z standard normal.
      return {std::exp(0.5), std::sqrt((std::exp(1.0) - 1.0) * std::exp(1.0))};
    case ErrorDistribution::DoubleExponential:
      // Unit scale; variance 2.
      return {0.0, std::sqrt(2.0)};
    case ErrorDistribution::ChiSquare5:
      return {5.0, std::sqrt(10.0)};
  }
  throw UnknownDistribution("analytic_moments: unknown error distribution");
}

void validate(const SimulationScenario& scenario) {
  if (scenario.group_sizes.empty())
    throw InvalidScenario("scenario: group_sizes must be non-empty");
  for (std::size_t ni : scenario.group_sizes) {
    if (ni < 1) throw InvalidScenario("scenario: each group size must be >= 1");
  }
  if (scenario.mu.size() != 0 && scenario.mu.size() != scenario.n_groups())
    throw InvalidScenario("scenario: mu length must equal the number of groups");
  if (scenario.coefficients.size() > 2)
    throw InvalidScenario("scenario: at most two covariate coefficients supported");
  if (!(scenario.alpha > 0.0 && scenario.alpha < 1.0))
    throw InvalidScenario("scenario: alpha must lie in (0, 1)");
  if (scenario.n_sim < 1) throw InvalidScenario("scenario: n_sim must be >= 1");
  if (scenario.n_boot < 1) throw InvalidScenario("scenario: n_boot must be >= 1");
}

std::string scenario_context(const SimulationScenario& s, std::size_t replicate) {
  std::ostringstream os;
  os << "scenario " << to_string(s.variances.kind) << "/" << to_string(s.distribution)
     << "/" << to_string(s.flavor) << " n=(";
  for (std::size_t i = 0; i < s.group_sizes.size(); ++i)
    os << (i ? "," : "") << s.group_sizes[i];
  os << "), replicate " << replicate << ", seed " << s.seed;
  return os.str();
}

struct StudyCounts {
  std::size_t f = 0;
  std::size_t white = 0;
  std::size_t wb = 0;
};

// Shared Monte Carlo engine for the type-I-error and power studies.
StudyCounts run_study(const SimulationScenario& scenario, unsigned threads) {
  validate(scenario);
  const std::size_t a = scenario.n_groups();
  if (a < 2) throw InvalidScenario("scenario: need at least two groups");
  const std::size_t r = scenario.coefficients.size();
  if (r > 0 && scenario.n_total() < 2)
    throw InvalidScenario("scenario: need at least two observations");

  const HypothesisSpec hyp = equal_means_contrast(a, r);
  const SplitRng root = SplitRng::from(scenario.seed);

  std::vector<std::array<std::uint8_t, 3>> hits(scenario.n_sim, {0, 0, 0});
  detail::parallel_for(
      scenario.n_sim, threads, [&](std::size_t begin, std::size_t end) {
        for (std::size_t i = begin; i < end; ++i) {
          try {
            SplitRng replicate_rng = root.split(i);
            SplitRng data_stream = replicate_rng.split(0);
            const Dataset data = generate_dataset(scenario, data_stream);
            const FittedModel model = fit_ols(data);

            const TestResult f = classical_f_test(model, hyp);
            const TestResult white = white_test(model, hyp, scenario.flavor);

            BootstrapConfig cfg;
            cfg.replications = scenario.n_boot;
            cfg.flavor = scenario.flavor;
            cfg.seed = replicate_rng.split(1).stream_key();
            const BootstrapResult wb = wild_bootstrap_test(model, hyp, cfg);

            hits[i] = {static_cast<std::uint8_t>(f.p_value <= scenario.alpha),
                       static_cast<std::uint8_t>(white.p_value <= scenario.alpha),
                       static_cast<std::uint8_t>(wb.p_value <= scenario.alpha)};
          } catch (const std::exception& e) {
            throw Error(scenario_context(scenario, i) + ": " + e.what());
          }
        }
      });

  StudyCounts counts;
  for (const auto& h : hits) {
    counts.f += h[0];
    counts.white += h[1];
    counts.wb += h[2];
  }
  return counts;
}

double rate_se(double rate, std::size_t n) {
  return std::sqrt(rate * (1.0 - rate) / static_cast<double>(n));
}

}  // namespace

std::size_t SimulationScenario::n_total() const {
  return std::accumulate(group_sizes.begin(), group_sizes.end(), std::size_t{0});
}

Vector VarianceScenario::per_observation_sd(
    std::span<const std::size_t> group_sizes) const {
  std::size_t n = 0;
  for (std::size_t ni : group_sizes) n += ni;
  Vector sds(n);
  std::size_t row = 0;
  for (std::size_t g = 0; g < group_sizes.size(); ++g) {
    for (std::size_t j = 0; j < group_sizes[g]; ++j, ++row) {
      double variance = 1.0;
      switch (kind) {
        case VarianceScenarioKind::I:
          variance = 1.0;
          break;
        case VarianceScenarioKind::II:
          variance = static_cast<double>(g + 1);
          break;
        case VarianceScenarioKind::III:
          if (g == 0) {
            variance = j < group_sizes[0] / 2 ? 1.0 : 2.0;
          } else {
            variance = static_cast<double>(g + 2);
          }
          break;
      }
      sds[row] = std::sqrt(variance);
    }
  }
  return sds;
}

Matrix paper_covariates(std::size_t n) {
  if (n < 2) throw InvalidArity("paper_covariates: need N >= 2");
  Matrix z(n, 2);
  for (std::size_t i = 0; i < n; ++i)
    z(i, 0) = -10.0 + 20.0 * static_cast<double>(i) / static_cast<double>(n - 1);

  const std::size_t first = (n + 1) / 2;
  const std::size_t second = n / 2;
  for (std::size_t i = 0; i < first; ++i) {
    z(i, 1) = first == 1 ? 5.0
                         : 5.0 - 5.0 * static_cast<double>(i) /
                                     static_cast<double>(first - 1);
  }
  for (std::size_t i = 0; i < second; ++i) {
    z(first + i, 1) = second == 1 ? -1.0
                                  : -1.0 - 1.0 * static_cast<double>(i) /
                                               static_cast<double>(second - 1);
  }
  return z;
}

Vector standardize_and_scale(const Vector& raw, const Vector& sds,
                             ErrorDistribution kind) {
  if (raw.size() != sds.size())
    throw InvalidArgument("standardize_and_scale: length mismatch");
  const Moments m = analytic_moments(kind);
  Vector out(raw.size());
  for (std::size_t i = 0; i < raw.size(); ++i) {
    if (!(sds[i] > 0.0))
      throw InvalidArgument("standardize_and_scale: sds must be positive");
    out[i] = sds[i] * (raw[i] - m.mean) / m.sd;
  }
  return out;
}

Dataset generate_dataset(const SimulationScenario& scenario, SplitRng& stream) {
  validate(scenario);
  const std::size_t n = scenario.n_total();
  Vector raw(n);
  for (std::size_t i = 0; i < n; ++i)
    raw[i] = detail::draw_raw(scenario.distribution, stream);
  const Vector sds = scenario.variances.per_observation_sd(scenario.group_sizes);
  const Vector errors = standardize_and_scale(raw, sds, scenario.distribution);
  return detail::assemble_dataset(scenario, errors);
}

SimulationReport run_type1_study(const SimulationScenario& scenario,
                                 unsigned threads) {
  for (std::size_t g = 0; g < scenario.mu.size(); ++g) {
    if (scenario.mu[g] != 0.0)
      throw InvalidScenario("run_type1_study: mu must be zero under the null");
  }
  const StudyCounts counts = run_study(scenario, threads);
  const double n = static_cast<double>(scenario.n_sim);

  SimulationReport report;
  report.rejection_rate = {counts.f / n, counts.white / n, counts.wb / n};
  report.monte_carlo_se = {rate_se(report.rejection_rate.f, scenario.n_sim),
                           rate_se(report.rejection_rate.white, scenario.n_sim),
                           rate_se(report.rejection_rate.wb, scenario.n_sim)};
  report.n_sim_effective = scenario.n_sim;
  report.scenario = scenario;
  return report;
}

std::vector<PowerPoint> run_power_study(const std::vector<double>& deltas,
                                        const SimulationScenario& base,
                                        unsigned threads) {
  if (base.n_groups() != 2)
    throw InvalidScenario("run_power_study: base scenario must have two groups");

  std::vector<PowerPoint> curve;
  curve.reserve(deltas.size());
  for (double delta : deltas) {
    SimulationScenario scenario = base;
    scenario.mu = Vector{0.0, delta};
    const StudyCounts counts = run_study(scenario, threads);
    const double n = static_cast<double>(scenario.n_sim);
    PowerPoint point;
    point.delta = delta;
    point.power_f = counts.f / n;
    point.power_wb = counts.wb / n;
    point.se_f = rate_se(point.power_f, scenario.n_sim);
    point.se_wb = rate_se(point.power_wb, scenario.n_sim);
    curve.push_back(point);
  }
  return curve;
}

const char* to_string(ErrorDistribution kind) {
  switch (kind) {
    case ErrorDistribution::StandardNormal:
      return "normal";
    case ErrorDistribution::Lognormal:
      return "lognormal";
    case ErrorDistribution::DoubleExponential:
      return "double_exponential";
    case ErrorDistribution::ChiSquare5:
      return "chisq5";
  }
  return "?";
}

const char* to_string(VarianceScenarioKind kind) {
  switch (kind) {
    case VarianceScenarioKind::I:
      return "I";
    case VarianceScenarioKind::II:
      return "II";
    case VarianceScenarioKind::III:
      return "III";
  }
  return "?";
}

const char* to_string(Flavor flavor) {
  return flavor == Flavor::HC0 ? "hc0" : "hc2";
}

}  // namespace ancova

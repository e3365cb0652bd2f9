// Acceptance suite: end-to-end statistical checks at fixed seeds and desk
// scale (n_sim = 2000, n_boot = 1000). Prints one PASS/FAIL line per
// criterion; exits non-zero if any requested criterion fails.

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <functional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "ancova/bootstrap.hpp"
#include "ancova/distributions.hpp"
#include "ancova/hypotheses.hpp"
#include "ancova/inference.hpp"
#include "ancova/model.hpp"
#include "ancova/rng.hpp"
#include "ancova/simulation.hpp"
#include "cli/commands.hpp"
#include "support/oracles.hpp"

using namespace ancova;

namespace {

constexpr std::size_t kDeskSims = 2000;
constexpr std::size_t kDeskBoots = 1000;

struct CellSpec {
  const char* label;
  std::vector<std::size_t> sizes;
  VarianceScenarioKind variance;
  ErrorDistribution distribution;
  Flavor flavor;
  std::uint64_t seed;
};

SimulationReport run_cell(const CellSpec& cell) {
  SimulationScenario s;
  s.group_sizes = cell.sizes;
  s.variances.kind = cell.variance;
  s.distribution = cell.distribution;
  s.flavor = cell.flavor;
  s.n_sim = kDeskSims;
  s.n_boot = kDeskBoots;
  s.seed = cell.seed;
  s.mu = Vector(cell.sizes.size());
  return run_type1_study(s, 0);
}

bool check_rate(std::ostringstream& log, const char* cell, const char* method,
                double rate, double target_percent, double tol_percent) {
  const double diff = std::fabs(100.0 * rate - target_percent);
  const bool ok = diff <= tol_percent;
  log << "    " << (ok ? "ok  " : "MISS") << " " << cell << " " << method << ": "
      << 100.0 * rate << "% vs " << target_percent << "% (tol " << tol_percent
      << ")\n";
  return ok;
}

// --- criterion 1: golden type-I-error cells, HC2 -------------------------

bool criterion1(std::ostringstream& log) {
  bool ok = true;

  const CellSpec i_n1{"I,n1,normal", {40, 40, 40, 40}, VarianceScenarioKind::I,
                      ErrorDistribution::StandardNormal, Flavor::HC2, 101};
  const SimulationReport r1 = run_cell(i_n1);
  ok &= check_rate(log, i_n1.label, "F", r1.rejection_rate.f, 4.9, 1.8);
  ok &= check_rate(log, i_n1.label, "White", r1.rejection_rate.white, 6.4, 1.8);
  ok &= check_rate(log, i_n1.label, "WB", r1.rejection_rate.wb, 5.2, 1.8);

  const CellSpec i_n3{"I,n3,normal", {5, 5, 5, 5}, VarianceScenarioKind::I,
                      ErrorDistribution::StandardNormal, Flavor::HC2, 107};
  const SimulationReport r2 = run_cell(i_n3);
  ok &= check_rate(log, i_n3.label, "White", r2.rejection_rate.white, 19.6, 1.8);
  ok &= check_rate(log, i_n3.label, "WB", r2.rejection_rate.wb, 6.9, 1.8);

  const CellSpec ii_n5{"II,n5,normal", {25, 20, 10, 5}, VarianceScenarioKind::II,
                       ErrorDistribution::StandardNormal, Flavor::HC2, 103};
  const SimulationReport r3 = run_cell(ii_n5);
  ok &= check_rate(log, ii_n5.label, "F", r3.rejection_rate.f, 10.0, 1.8);
  ok &= check_rate(log, ii_n5.label, "WB", r3.rejection_rate.wb, 5.0, 1.8);

  const CellSpec ii_n4{"II,n4,normal", {5, 10, 20, 25}, VarianceScenarioKind::II,
                       ErrorDistribution::StandardNormal, Flavor::HC2, 104};
  const SimulationReport r4 = run_cell(ii_n4);
  ok &= check_rate(log, ii_n4.label, "F", r4.rejection_rate.f, 3.3, 1.8);
  ok &= check_rate(log, ii_n4.label, "WB", r4.rejection_rate.wb, 5.2, 1.8);

  const CellSpec i_n2_log{"I,n2,lognormal", {15, 15, 15, 15},
                          VarianceScenarioKind::I, ErrorDistribution::Lognormal,
                          Flavor::HC2, 105};
  const SimulationReport r5 = run_cell(i_n2_log);
  ok &= check_rate(log, i_n2_log.label, "WB", r5.rejection_rate.wb, 3.5, 1.8);

  return ok;
}

// --- criterion 2: HC0 versus HC2 liberality ------------------------------

bool criterion2(std::ostringstream& log) {
  bool ok = true;

  const CellSpec hc0{"I,n3,normal", {5, 5, 5, 5}, VarianceScenarioKind::I,
                     ErrorDistribution::StandardNormal, Flavor::HC0, 201};
  CellSpec hc2 = hc0;
  hc2.flavor = Flavor::HC2;
  hc2.seed = 202;

  const SimulationReport r0 = run_cell(hc0);
  const SimulationReport r2 = run_cell(hc2);
  ok &= check_rate(log, "I,n3,normal", "White-HC0", r0.rejection_rate.white, 31.9, 2.5);
  ok &= check_rate(log, "I,n3,normal", "White-HC2", r2.rejection_rate.white, 19.6, 2.5);

  // HC0 must reject more often than HC2 in every small-sample cell tested.
  struct Pair {
    const char* label;
    std::vector<std::size_t> sizes;
    VarianceScenarioKind variance;
  };
  const std::vector<Pair> cells{{"I,n3", {5, 5, 5, 5}, VarianceScenarioKind::I},
                                {"II,n3", {5, 5, 5, 5}, VarianceScenarioKind::II},
                                {"I,n2", {15, 15, 15, 15}, VarianceScenarioKind::I}};
  std::uint64_t seed = 210;
  for (const Pair& cell : cells) {
    CellSpec a{"", cell.sizes, cell.variance, ErrorDistribution::StandardNormal,
               Flavor::HC0, seed};
    CellSpec b = a;
    b.flavor = Flavor::HC2;
    ++seed;
    const double hc0_rate = run_cell(a).rejection_rate.white;
    const double hc2_rate = run_cell(b).rejection_rate.white;
    const bool ordered = hc0_rate > hc2_rate;
    log << "    " << (ordered ? "ok  " : "MISS") << " " << cell.label
        << " ordering: HC0 " << 100 * hc0_rate << "% > HC2 " << 100 * hc2_rate
        << "%\n";
    ok &= ordered;
  }
  return ok;
}

// --- criterion 3: chi-square(5) errors -----------------------------------

bool criterion3(std::ostringstream& log) {
  const CellSpec cell{"II,n5,chisq5", {25, 20, 10, 5}, VarianceScenarioKind::II,
                      ErrorDistribution::ChiSquare5, Flavor::HC2, 301};
  const SimulationReport r = run_cell(cell);
  bool ok = true;
  ok &= check_rate(log, cell.label, "F", r.rejection_rate.f, 10.0, 1.8);
  ok &= check_rate(log, cell.label, "White", r.rejection_rate.white, 9.6, 1.8);
  ok &= check_rate(log, cell.label, "WB", r.rejection_rate.wb, 5.0, 1.8);
  return ok;
}

// --- criterion 4: power study ---------------------------------------------

std::vector<double> pava(const std::vector<double>& y) {
  std::vector<double> level;
  std::vector<int> count;
  for (double v : y) {
    level.push_back(v);
    count.push_back(1);
    while (level.size() > 1 && level[level.size() - 2] > level.back()) {
      const int merged_count = count[count.size() - 2] + count.back();
      const double merged =
          (level[level.size() - 2] * count[count.size() - 2] +
           level.back() * count.back()) /
          merged_count;
      level.pop_back();
      count.pop_back();
      level.back() = merged;
      count.back() = merged_count;
    }
  }
  std::vector<double> fit;
  for (std::size_t i = 0; i < level.size(); ++i)
    fit.insert(fit.end(), count[i], level[i]);
  return fit;
}

bool criterion4(std::ostringstream& log) {
  SimulationScenario base;
  base.group_sizes = {15, 15};
  base.n_sim = kDeskSims;
  base.n_boot = kDeskBoots;
  base.seed = 401;

  const std::vector<double> deltas{0.0, 0.5, 1.0, 1.5, 2.0, 2.5, 3.0};
  const auto curve = run_power_study(deltas, base, 0);

  bool ok = true;
  const double se0 = std::sqrt(0.05 * 0.95 / static_cast<double>(kDeskSims));
  const bool f0 = std::fabs(curve[0].power_f - 0.05) <= 3.0 * se0;
  const bool wb0 = std::fabs(curve[0].power_wb - 0.05) <= 3.0 * se0;
  log << "    " << (f0 ? "ok  " : "MISS") << " F power at 0: " << curve[0].power_f
      << " vs alpha 0.05 (3SE " << 3.0 * se0 << ")\n";
  log << "    " << (wb0 ? "ok  " : "MISS")
      << " WB power at 0: " << curve[0].power_wb << "\n";
  ok &= f0 && wb0;

  for (const bool use_wb : {false, true}) {
    std::vector<double> powers;
    for (const PowerPoint& p : curve)
      powers.push_back(use_wb ? p.power_wb : p.power_f);
    const std::vector<double> fit = pava(powers);
    double worst = 0.0;
    for (std::size_t i = 0; i < powers.size(); ++i) {
      const double p = powers[i];
      const double se = std::sqrt(std::max(p * (1 - p), 0.05 * 0.95) /
                                  static_cast<double>(kDeskSims));
      worst = std::max(worst, std::fabs(fit[i] - p) / se);
    }
    const bool monotone = worst <= 3.0;
    log << "    " << (monotone ? "ok  " : "MISS") << " "
        << (use_wb ? "WB" : "F") << " isotonic residual: " << worst << " SE\n";
    ok &= monotone;
  }

  double max_gap = 0.0;
  for (const PowerPoint& p : curve) max_gap = std::max(max_gap, p.power_f - p.power_wb);
  const bool gap_ok = max_gap <= 0.09;
  log << "    " << (gap_ok ? "ok  " : "MISS")
      << " max(power_F - power_WB): " << max_gap << " (limit 0.09)\n";
  ok &= gap_ok;
  return ok;
}

// --- criterion 5: chi-square limit of the Wald statistic ------------------

bool criterion5(std::ostringstream& log) {
  SimulationScenario s;
  s.group_sizes = {1000, 1000};
  s.coefficients = Vector{-0.5};
  s.mu = Vector(2);
  s.seed = 501;

  const HypothesisSpec hyp = equal_means_contrast(2, 1);
  const SplitRng root = SplitRng::from(s.seed);
  std::vector<double> stats;
  stats.reserve(2000);
  for (std::size_t i = 0; i < 2000; ++i) {
    SplitRng stream = root.split(i);
    const Dataset data = generate_dataset(s, stream);
    const FittedModel model = fit_ols(data);
    stats.push_back(white_test(model, hyp, Flavor::HC0).statistic);
  }
  const double d = oracles::ks_distance(
      stats, [](double x) { return chisq_cdf(std::max(x, 0.0), 1); });
  const bool ok = d <= 0.05;
  log << "    " << (ok ? "ok  " : "MISS")
      << " KS distance of T(H) to chi-square(1): " << d << " (limit 0.05)\n";
  return ok;
}

// --- criterion 6: bootstrap p-values are null-uniform ---------------------

bool criterion6(std::ostringstream& log) {
  SimulationScenario s;
  s.group_sizes = {30, 30};
  s.coefficients = Vector{-0.5};
  s.mu = Vector(2);
  s.seed = 601;

  const HypothesisSpec hyp = equal_means_contrast(2, 1);
  const SplitRng root = SplitRng::from(s.seed);
  std::vector<double> pvalues;
  pvalues.reserve(500);
  for (std::size_t i = 0; i < 500; ++i) {
    SplitRng replicate = root.split(i);
    SplitRng stream = replicate.split(0);
    const Dataset data = generate_dataset(s, stream);
    const FittedModel model = fit_ols(data);
    BootstrapConfig cfg;
    cfg.replications = 499;
    cfg.flavor = Flavor::HC2;
    cfg.seed = replicate.split(1).stream_key();
    pvalues.push_back(wild_bootstrap_test(model, hyp, cfg).p_value);
  }
  const double d = oracles::ks_distance(
      pvalues, [](double x) { return std::clamp(x, 0.0, 1.0); });
  const bool ok = d <= 0.08;
  log << "    " << (ok ? "ok  " : "MISS")
      << " KS distance of bootstrap p-values to uniform: " << d
      << " (limit 0.08)\n";
  return ok;
}

// --- criterion 7: algebraic oracle equivalences ---------------------------

Dataset random_design(std::mt19937_64& gen, std::size_t a, std::size_t per,
                      std::size_t r) {
  std::normal_distribution<double> normal;
  const std::size_t n = a * per;
  std::vector<int> labels;
  for (std::size_t g = 0; g < a; ++g)
    labels.insert(labels.end(), per, static_cast<int>(g + 1));
  Matrix z(n, r);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t k = 0; k < r; ++k) z(i, k) = normal(gen);
  Vector y(n);
  for (std::size_t i = 0; i < n; ++i)
    y[i] = normal(gen) * (1.0 + 0.4 * labels[i]) + 0.3 * labels[i];
  return Dataset(std::move(y), std::move(labels), std::move(z));
}

bool criterion7(std::ostringstream& log) {
  bool ok = true;
  std::mt19937_64 gen(7001);

  // HC0 sandwich versus the long-double brute force, 100 random designs.
  double worst_sandwich = 0.0;
  for (int trial = 0; trial < 100; ++trial) {
    const Dataset data = random_design(gen, 2 + trial % 3, 4 + trial % 5, trial % 3);
    const FittedModel model = fit_ols(data);
    const Matrix& x = model.design();
    const std::size_t n = x.rows(), c = x.cols();

    std::vector<long double> gram(c * c, 0.0L);
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < c; ++j)
        for (std::size_t k = 0; k < c; ++k)
          gram[j * c + k] += static_cast<long double>(x(i, j)) * x(i, k);
    std::vector<long double> ginv(c * c, 0.0L);
    for (std::size_t col = 0; col < c; ++col) {
      std::vector<long double> e(c, 0.0L);
      e[col] = 1.0L;
      const auto sol = oracles::solve_dense_ld(gram, e, c);
      for (std::size_t rowi = 0; rowi < c; ++rowi) ginv[rowi * c + col] = sol[rowi];
    }
    std::vector<long double> meat(c * c, 0.0L);
    for (std::size_t i = 0; i < n; ++i) {
      const long double w = static_cast<long double>(model.residuals()[i]) *
                            model.residuals()[i];
      for (std::size_t j = 0; j < c; ++j)
        for (std::size_t k = 0; k < c; ++k)
          meat[j * c + k] += w * x(i, j) * x(i, k);
    }
    std::vector<long double> tmp(c * c, 0.0L);
    for (std::size_t i = 0; i < c; ++i)
      for (std::size_t j = 0; j < c; ++j)
        for (std::size_t k = 0; k < c; ++k)
          tmp[i * c + j] += ginv[i * c + k] * meat[k * c + j];
    const Matrix estimate = sandwich(model, Flavor::HC0).matrix;
    double scale = 1.0;
    for (std::size_t i = 0; i < c; ++i)
      for (std::size_t j = 0; j < c; ++j) {
        long double oracle = 0.0L;
        for (std::size_t k = 0; k < c; ++k)
          oracle += tmp[i * c + k] * ginv[k * c + j];
        oracle *= static_cast<long double>(n);
        scale = std::max(scale, std::fabs(static_cast<double>(oracle)));
        worst_sandwich = std::max(
            worst_sandwich,
            std::fabs(estimate(i, j) - static_cast<double>(oracle)) / scale);
      }
  }
  const bool sandwich_ok = worst_sandwich <= 1e-10;
  log << "    " << (sandwich_ok ? "ok  " : "MISS")
      << " HC0 sandwich vs brute force, worst relative error: " << worst_sandwich
      << "\n";
  ok &= sandwich_ok;

  // Contrast-form and projection-form Wald statistics.
  double worst_wald = 0.0;
  for (int trial = 0; trial < 50; ++trial) {
    const std::size_t a = 2 + trial % 4;
    const std::size_t r = trial % 3;
    const Dataset data = random_design(gen, a, 7, r);
    const FittedModel model = fit_ols(data);
    for (Flavor flavor : {Flavor::HC0, Flavor::HC2}) {
      const double th = white_test(model, equal_means_contrast(a, r), flavor).statistic;
      const double tt = white_test(model, oneway_projection(a, r), flavor).statistic;
      worst_wald = std::max(worst_wald, std::fabs(th - tt) / (1.0 + std::fabs(th)));
    }
  }
  const bool wald_ok = worst_wald <= 1e-8;
  log << "    " << (wald_ok ? "ok  " : "MISS")
      << " contrast vs projection Wald, worst relative gap: " << worst_wald << "\n";
  ok &= wald_ok;

  // Projection constructions agree and are symmetric idempotent projections.
  double worst_proj = 0.0;
  double worst_invariant = 0.0;
  for (std::size_t a = 2; a <= 5; ++a) {
    for (std::size_t r = 0; r <= 2; ++r) {
      const Matrix via_contrast =
          contrast_to_projection(equal_means_contrast(a, r)).matrix();
      const Matrix direct = oneway_projection(a, r).matrix();
      worst_proj = std::max(worst_proj, via_contrast.max_abs_diff(direct));
    }
  }
  std::vector<HypothesisSpec> projections;
  projections.push_back(oneway_projection(4, 2));
  projections.push_back(twoway_projection(2, 3, TwowayEffect::MainB, 1));
  projections.push_back(twoway_projection(2, 3, TwowayEffect::MainC, 1));
  projections.push_back(twoway_projection(3, 3, TwowayEffect::Interaction, 0));
  const std::vector<std::size_t> c_per{2, 3, 2};
  projections.push_back(nested_projection(3, c_per, NestedEffect::Category, 1));
  projections.push_back(nested_projection(3, c_per, NestedEffect::Subcategory, 1));
  for (const HypothesisSpec& spec : projections) {
    const Matrix& t = spec.matrix();
    worst_invariant = std::max(worst_invariant, (t * t).max_abs_diff(t));
    worst_invariant = std::max(worst_invariant, t.max_abs_diff(t.transpose()));
  }
  const bool proj_ok = worst_proj <= 1e-10 && worst_invariant <= 1e-10;
  log << "    " << (proj_ok ? "ok  " : "MISS")
      << " projection equivalence " << worst_proj << ", projection invariants "
      << worst_invariant << "\n";
  ok &= proj_ok;
  return ok;
}

// --- criterion 8: byte-identical output across thread counts --------------

bool criterion8(std::ostringstream& log) {
  const std::string sim_cfg = "/tmp/ancova_acceptance_sim.cfg";
  {
    std::FILE* f = std::fopen(sim_cfg.c_str(), "w");
    std::fputs(
        "group_sizes = 15,15,15,15\ndistribution = normal\n"
        "variance_scenario = II\nn_sim = 400\nn_boot = 299\n",
        f);
    std::fclose(f);
  }
  const std::string power_cfg = "/tmp/ancova_acceptance_power.cfg";
  {
    std::FILE* f = std::fopen(power_cfg.c_str(), "w");
    std::fputs("deltas = 0,1.0,2.0\ngroup_sizes = 12,12\nn_sim = 300\nn_boot = 199\n",
               f);
    std::fclose(f);
  }

  bool ok = true;
  for (const char* command : {"simulate", "power"}) {
    const std::string cfg = std::strcmp(command, "simulate") == 0 ? sim_cfg : power_cfg;
    std::string outputs[3];
    const char* threads[3] = {"1", "2", "5"};
    for (int t = 0; t < 3; ++t) {
      std::ostringstream out, err;
      const int code = ancova::cli::run(
          {command, "--config", cfg, "--seed", "77", "--threads", threads[t]}, out,
          err);
      if (code != 0) {
        log << "    MISS " << command << " exited with " << code << ": "
            << err.str() << "\n";
        return false;
      }
      outputs[t] = out.str();
    }
    const bool same = outputs[0] == outputs[1] && outputs[1] == outputs[2];
    log << "    " << (same ? "ok  " : "MISS") << " " << command
        << " output identical for --threads 1/2/5 (" << outputs[0].size()
        << " bytes)\n";
    ok &= same;
  }
  std::remove(sim_cfg.c_str());
  std::remove(power_cfg.c_str());
  return ok;
}

struct Criterion {
  int id;
  const char* name;
  std::function<bool(std::ostringstream&)> fn;
};

}  // namespace

int main(int argc, char** argv) {
  const std::vector<Criterion> criteria{
      {1, "golden type-I-error cells (HC2, desk scale)", criterion1},
      {2, "HC0 vs HC2 small-sample liberality ordering", criterion2},
      {3, "golden cells under chi-square(5) errors", criterion3},
      {4, "power study shape and F-WB gap", criterion4},
      {5, "Wald statistic chi-square limit (KS)", criterion5},
      {6, "bootstrap p-value null uniformity (KS)", criterion6},
      {7, "algebraic oracle equivalences", criterion7},
      {8, "byte-identical output across thread counts", criterion8},
  };

  std::vector<int> wanted;
  for (int i = 1; i < argc; ++i) wanted.push_back(std::atoi(argv[i]));

  int failures = 0;
  for (const Criterion& crit : criteria) {
    if (!wanted.empty() &&
        std::find(wanted.begin(), wanted.end(), crit.id) == wanted.end())
      continue;
    std::ostringstream log;
    bool ok = false;
    try {
      ok = crit.fn(log);
    } catch (const std::exception& e) {
      log << "    exception: " << e.what() << "\n";
    }
    std::printf("%s  criterion %d: %s\n", ok ? "PASS" : "FAIL", crit.id, crit.name);
    std::fputs(log.str().c_str(), stdout);
    std::fflush(stdout);
    if (!ok) ++failures;
  }
  return failures == 0 ? 0 : 1;
}

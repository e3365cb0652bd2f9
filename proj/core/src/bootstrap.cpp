#include "ancova/bootstrap.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "ancova/errors.hpp"
#include "ancova/rng.hpp"
#include "parallel.hpp"

namespace ancova {

namespace detail {

void RademacherSource::fill(std::uint64_t replicate, std::span<double> out) const {
  SplitRng rng = SplitRng::from(seed_).split(replicate);
  for (double& v : out) v = rng.next_rademacher();
}

namespace {

// Cholesky solve of a small symmetric system, in place. Returns false when a
// pivot falls below 1e-12 times the largest diagonal magnitude.
bool spd_solve_small(std::vector<double>& a, std::vector<double>& rhs, std::size_t n) {
  double max_diag = 0.0;
  for (std::size_t i = 0; i < n; ++i)
    max_diag = std::max(max_diag, std::fabs(a[i * n + i]));
  const double floor = 1e-12 * max_diag;

  for (std::size_t j = 0; j < n; ++j) {
    double diag = a[j * n + j];
    for (std::size_t k = 0; k < j; ++k) diag -= a[j * n + k] * a[j * n + k];
    if (!(diag > floor)) return false;
    const double root = std::sqrt(diag);
    a[j * n + j] = root;
    for (std::size_t i = j + 1; i < n; ++i) {
      double acc = a[i * n + j];
      for (std::size_t k = 0; k < j; ++k) acc -= a[i * n + k] * a[j * n + k];
      a[i * n + j] = acc / root;
    }
  }
  for (std::size_t i = 0; i < n; ++i) {
    double acc = rhs[i];
    for (std::size_t k = 0; k < i; ++k) acc -= a[i * n + k] * rhs[k];
    rhs[i] = acc / a[i * n + i];
  }
  for (std::size_t ii = n; ii-- > 0;) {
    double acc = rhs[ii];
    for (std::size_t k = ii + 1; k < n; ++k) acc -= a[k * n + ii] * rhs[k];
    rhs[ii] = acc / a[ii * n + ii];
  }
  return true;
}

// Everything a replicate needs that does not change between replicates.
struct ReplicateContext {
  const Matrix* design = nullptr;      // N x c
  const Matrix* gram_inverse = nullptr;
  const Matrix* hyp_matrix = nullptr;  // m x c (contrast: m = q, projection: m = c)
  bool projection = false;
  std::size_t n = 0, c = 0, m = 0;
  std::vector<double> projector;     // c x N, (X'X)^-1 X'
  std::vector<double> fitted;        // x_i' beta_hat
  std::vector<double> adjusted;      // u_i (1 - p_ii)^{-1/2}
  std::vector<double> hc2_scale;     // 1 / (1 - p_ii)
  std::vector<double> h_beta;        // hyp * beta_hat
  bool hc2 = false;
};

struct ReplicateWorkspace {
  std::vector<double> multipliers, ystar, betastar, ustar, weights;
  std::vector<double> meat, cov, tmp_cc, core, rhs, hdelta, tmp_mc;

  explicit ReplicateWorkspace(const ReplicateContext& ctx)
      : multipliers(ctx.n),
        ystar(ctx.n),
        betastar(ctx.c),
        ustar(ctx.n),
        weights(ctx.n),
        meat(ctx.c * ctx.c),
        cov(ctx.c * ctx.c),
        tmp_cc(ctx.c * ctx.c),
        core(ctx.m * ctx.m),
        rhs(ctx.m),
        hdelta(ctx.m),
        tmp_mc(ctx.m * ctx.c) {}
};

// One bootstrap replicate; returns +infinity when the Wald core is singular.
double replicate_statistic(const ReplicateContext& ctx, ReplicateWorkspace& ws) {
  const std::size_t n = ctx.n, c = ctx.c, m = ctx.m;
  const Matrix& x = *ctx.design;

  for (std::size_t i = 0; i < n; ++i)
    ws.ystar[i] = ctx.fitted[i] + ctx.adjusted[i] * ws.multipliers[i];

  // beta* = (X'X)^-1 X' y*
  for (std::size_t j = 0; j < c; ++j) {
    const double* prow = ctx.projector.data() + j * n;
    double acc = 0.0;
    for (std::size_t i = 0; i < n; ++i) acc += prow[i] * ws.ystar[i];
    ws.betastar[j] = acc;
  }

  for (std::size_t i = 0; i < n; ++i) {
    const double* row = x.row_data(i);
    double fit = 0.0;
    for (std::size_t j = 0; j < c; ++j) fit += row[j] * ws.betastar[j];
    const double u = ws.ystar[i] - fit;
    double w = u * u;
    if (ctx.hc2) w *= ctx.hc2_scale[i];
    ws.weights[i] = w;
  }

  // meat = X' diag(w) X (symmetric)
  std::fill(ws.meat.begin(), ws.meat.end(), 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    const double wi = ws.weights[i];
    const double* row = x.row_data(i);
    for (std::size_t j = 0; j < c; ++j) {
      const double wj = wi * row[j];
      if (wj == 0.0) continue;
      double* mrow = ws.meat.data() + j * c;
      for (std::size_t k = j; k < c; ++k) mrow[k] += wj * row[k];
    }
  }
  for (std::size_t j = 0; j < c; ++j)
    for (std::size_t k = 0; k < j; ++k) ws.meat[j * c + k] = ws.meat[k * c + j];

  // cov = N * G meat G
  const Matrix& g = *ctx.gram_inverse;
  for (std::size_t i = 0; i < c; ++i) {
    for (std::size_t j = 0; j < c; ++j) {
      double acc = 0.0;
      for (std::size_t k = 0; k < c; ++k) acc += ws.meat[i * c + k] * g(k, j);
      ws.tmp_cc[i * c + j] = acc;
    }
  }
  const double nf = static_cast<double>(n);
  for (std::size_t i = 0; i < c; ++i) {
    for (std::size_t j = 0; j < c; ++j) {
      double acc = 0.0;
      for (std::size_t k = 0; k < c; ++k) acc += g(i, k) * ws.tmp_cc[k * c + j];
      ws.cov[i * c + j] = nf * acc;
    }
  }

  // hdelta = hyp (beta* - beta_hat); core = hyp cov hyp'
  const Matrix& h = *ctx.hyp_matrix;
  for (std::size_t i = 0; i < m; ++i) {
    const double* hrow = h.row_data(i);
    double acc = 0.0;
    for (std::size_t j = 0; j < c; ++j) acc += hrow[j] * ws.betastar[j];
    ws.hdelta[i] = acc - ctx.h_beta[i];
  }
  for (std::size_t i = 0; i < m; ++i) {
    const double* hrow = h.row_data(i);
    for (std::size_t j = 0; j < c; ++j) {
      double acc = 0.0;
      for (std::size_t k = 0; k < c; ++k) acc += hrow[k] * ws.cov[k * c + j];
      ws.tmp_mc[i * c + j] = acc;
    }
  }
  for (std::size_t i = 0; i < m; ++i) {
    for (std::size_t j = 0; j < m; ++j) {
      const double* hrow = h.row_data(j);
      double acc = 0.0;
      for (std::size_t k = 0; k < c; ++k) acc += ws.tmp_mc[i * c + k] * hrow[k];
      ws.core[i * m + j] = acc;
    }
  }

  if (!ctx.projection) {
    ws.rhs = ws.hdelta;
    if (!spd_solve_small(ws.core, ws.rhs, m))
      return std::numeric_limits<double>::infinity();
    double quad = 0.0;
    for (std::size_t i = 0; i < m; ++i) quad += ws.hdelta[i] * ws.rhs[i];
    return std::max(0.0, nf * quad);
  }

  // Projection form: Moore-Penrose inverse of the (singular) core.
  Matrix core_m(m, m);
  for (std::size_t i = 0; i < m; ++i)
    for (std::size_t j = 0; j < m; ++j) core_m(i, j) = ws.core[i * m + j];
  const Matrix pinv = pseudoinverse(core_m);
  double quad = 0.0;
  for (std::size_t i = 0; i < m; ++i) {
    double acc = 0.0;
    for (std::size_t j = 0; j < m; ++j) acc += pinv(i, j) * ws.hdelta[j];
    quad += ws.hdelta[i] * acc;
  }
  return std::max(0.0, nf * quad);
}

}  // namespace

BootstrapResult wild_bootstrap_with_source(const FittedModel& model,
                                           const HypothesisSpec& hyp,
                                           const BootstrapConfig& cfg,
                                           const MultiplierSource& source,
                                           unsigned threads) {
  if (cfg.replications < 1)
    throw InvalidArgument("wild_bootstrap_test: need at least one replication");
  if (hyp.n_parameters() != model.n_parameters())
    throw InvalidArgument("wild_bootstrap_test: hypothesis size does not match model");

  const std::size_t n = model.n_total();
  const std::size_t c = model.n_parameters();

  ReplicateContext ctx;
  ctx.design = &model.design();
  ctx.gram_inverse = &model.gram_inverse();
  ctx.hyp_matrix = &hyp.matrix();
  ctx.projection = hyp.kind() == HypothesisKind::Projection;
  ctx.n = n;
  ctx.c = c;
  ctx.m = hyp.matrix().rows();
  ctx.hc2 = cfg.flavor == Flavor::HC2;

  const Vector& lev = model.leverages();
  ctx.adjusted.resize(n);
  ctx.hc2_scale.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    if (lev[i] >= 1.0 - 1e-10)
      throw LeverageOne("wild_bootstrap_test: observation " + std::to_string(i) +
                        " has leverage numerically equal to one");
    ctx.hc2_scale[i] = 1.0 / (1.0 - lev[i]);
    ctx.adjusted[i] = model.residuals()[i] / std::sqrt(1.0 - lev[i]);
  }

  ctx.fitted.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double* row = model.design().row_data(i);
    double acc = 0.0;
    for (std::size_t j = 0; j < c; ++j) acc += row[j] * model.beta_hat()[j];
    ctx.fitted[i] = acc;
  }

  // projector = (X'X)^-1 X', stored c x N.
  ctx.projector.assign(c * n, 0.0);
  for (std::size_t j = 0; j < c; ++j) {
    for (std::size_t i = 0; i < n; ++i) {
      const double* row = model.design().row_data(i);
      double acc = 0.0;
      for (std::size_t k = 0; k < c; ++k) acc += model.gram_inverse()(j, k) * row[k];
      ctx.projector[j * n + i] = acc;
    }
  }

  ctx.h_beta.resize(ctx.m);
  for (std::size_t i = 0; i < ctx.m; ++i) {
    const double* hrow = hyp.matrix().row_data(i);
    double acc = 0.0;
    for (std::size_t j = 0; j < c; ++j) acc += hrow[j] * model.beta_hat()[j];
    ctx.h_beta[i] = acc;
  }

  const double observed = white_test(model, hyp, cfg.flavor).statistic;

  const std::size_t b_total = cfg.replications;
  std::vector<double> draws(b_total);
  parallel_for(b_total, threads, [&](std::size_t begin, std::size_t end) {
    ReplicateWorkspace ws(ctx);
    for (std::size_t b = begin; b < end; ++b) {
      source.fill(b, ws.multipliers);
      draws[b] = replicate_statistic(ctx, ws);
    }
  });

  std::size_t exceed = 0;
  std::size_t degenerate = 0;
  for (double d : draws) {
    if (d >= observed) ++exceed;
    if (std::isinf(d)) ++degenerate;
  }
  std::sort(draws.begin(), draws.end());

  BootstrapResult result;
  result.observed = observed;
  result.draws = std::move(draws);
  result.degenerate_count = degenerate;
  result.p_value = static_cast<double>(1 + exceed) / static_cast<double>(b_total + 1);
  return result;
}

}  // namespace detail

BootstrapResult wild_bootstrap_test(const FittedModel& model,
                                    const HypothesisSpec& hyp,
                                    const BootstrapConfig& cfg,
                                    unsigned threads) {
  if (cfg.multiplier != Multiplier::Rademacher)
    throw InvalidArgument("wild_bootstrap_test: unsupported multiplier");
  detail::RademacherSource source(cfg.seed);
  return detail::wild_bootstrap_with_source(model, hyp, cfg, source, threads);
}

}  // namespace ancova

#include "ancova/hypotheses.hpp"

#include <Eigen/Dense>
#include <cmath>
#include <numeric>
#include <string>

#include "ancova/errors.hpp"

namespace ancova {

namespace {

// Embeds the factorial block T_f into diag(T_f, 0_r).
Matrix pad_projection(const Matrix& tf, std::size_t r) {
  Matrix t(tf.rows() + r, tf.cols() + r);
  for (std::size_t i = 0; i < tf.rows(); ++i)
    for (std::size_t j = 0; j < tf.cols(); ++j) t(i, j) = tf(i, j);
  return t;
}

// Appends r zero columns to a factorial contrast block.
Matrix pad_contrast(const Matrix& hf, std::size_t r) {
  Matrix h(hf.rows(), hf.cols() + r);
  for (std::size_t i = 0; i < hf.rows(); ++i)
    for (std::size_t j = 0; j < hf.cols(); ++j) h(i, j) = hf(i, j);
  return h;
}

}  // namespace

HypothesisSpec HypothesisSpec::contrast(Matrix h) {
  if (h.rows() == 0) throw InvalidArgument("contrast: H has no rows");
  if (h.rows() > h.cols())
    throw InvalidArgument("contrast: more rows than parameters");

  // Full row rank check via the eigenvalues of H H'.
  const std::size_t q = h.rows();
  Eigen::MatrixXd hht(q, q);
  for (std::size_t i = 0; i < q; ++i) {
    for (std::size_t j = 0; j < q; ++j) {
      double acc = 0.0;
      for (std::size_t k = 0; k < h.cols(); ++k) acc += h(i, k) * h(j, k);
      hht(i, j) = acc;
    }
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(hht);
  const double largest = es.eigenvalues().maxCoeff();
  const double smallest = es.eigenvalues().minCoeff();
  if (!(smallest > 1e-10 * largest))
    throw InvalidArgument("contrast: H is not of full row rank");

  return HypothesisSpec(HypothesisKind::Contrast, std::move(h), q);
}

HypothesisSpec HypothesisSpec::projection(Matrix t) {
  if (!t.square()) throw InvalidArgument("projection: T must be square");
  if (t.max_abs_diff(t.transpose()) > 1e-10)
    throw InvalidArgument("projection: T is not symmetric");
  if ((t * t).max_abs_diff(t) > 1e-10)
    throw InvalidArgument("projection: T is not idempotent");

  const double tr = t.trace();
  const double rounded = std::round(tr);
  if (std::fabs(tr - rounded) > 1e-6)
    throw InvalidArgument("projection: trace " + std::to_string(tr) +
                          " is not close to an integer rank");
  return HypothesisSpec(HypothesisKind::Projection, std::move(t),
                        static_cast<std::size_t>(rounded));
}

Matrix centering(std::size_t a) {
  if (a < 1) throw InvalidArity("centering: need a >= 1");
  Matrix p(a, a);
  const double off = -1.0 / static_cast<double>(a);
  for (std::size_t i = 0; i < a; ++i)
    for (std::size_t j = 0; j < a; ++j) p(i, j) = (i == j) ? 1.0 + off : off;
  return p;
}

HypothesisSpec equal_means_contrast(std::size_t a, std::size_t r) {
  if (a < 2) throw InvalidArity("equal_means_contrast: need a >= 2");
  Matrix h(a - 1, a + r);
  for (std::size_t i = 0; i + 1 < a; ++i) {
    h(i, 0) = 1.0;
    h(i, i + 1) = -1.0;
  }
  return HypothesisSpec::contrast(std::move(h));
}

HypothesisSpec contrast_to_projection(const HypothesisSpec& h) {
  if (h.kind() != HypothesisKind::Contrast)
    throw InvalidArgument("contrast_to_projection: input must be a contrast");
  const Matrix& hm = h.matrix();
  const Matrix hht = hm * hm.transpose();
  // (H H')^-1 H, then T = H' * that.
  const Matrix w = solve_spd(hht, hm);
  return HypothesisSpec::projection(hm.transpose() * w);
}

HypothesisSpec oneway_projection(std::size_t a, std::size_t r) {
  if (a < 2) throw InvalidArity("oneway_projection: need a >= 2");
  return HypothesisSpec::projection(pad_projection(centering(a), r));
}

HypothesisSpec twoway_projection(std::size_t b, std::size_t c,
                                 TwowayEffect effect, std::size_t r) {
  if (b < 2 || c < 2) throw InvalidArity("twoway_projection: need b, c >= 2");
  const double bf = static_cast<double>(b);
  const double cf = static_cast<double>(c);
  Matrix tf;
  switch (effect) {
    case TwowayEffect::MainB:
      tf = kronecker(centering(b), Matrix::ones(c, c).scaled(1.0 / cf));
      break;
    case TwowayEffect::MainC:
      tf = kronecker(Matrix::ones(b, b).scaled(1.0 / bf), centering(c));
      break;
    case TwowayEffect::Interaction:
      tf = kronecker(centering(b), centering(c));
      break;
  }
  return HypothesisSpec::projection(pad_projection(tf, r));
}

HypothesisSpec twoway_contrast(std::size_t b, std::size_t c,
                               TwowayEffect effect, std::size_t r) {
  if (b < 2 || c < 2) throw InvalidArity("twoway_contrast: need b, c >= 2");
  const double cf = static_cast<double>(c);
  const double bf = static_cast<double>(b);
  Matrix hf;
  switch (effect) {
    case TwowayEffect::MainB: {
      // Row i compares cell-mean averages of level 1 and level i+1 of B.
      hf = Matrix(b - 1, b * c);
      for (std::size_t i = 0; i + 1 < b; ++i) {
        for (std::size_t j = 0; j < c; ++j) {
          hf(i, j) = 1.0 / cf;
          hf(i, (i + 1) * c + j) = -1.0 / cf;
        }
      }
      break;
    }
    case TwowayEffect::MainC: {
      hf = Matrix(c - 1, b * c);
      for (std::size_t j = 0; j + 1 < c; ++j) {
        for (std::size_t i = 0; i < b; ++i) {
          hf(j, i * c) = 1.0 / bf;
          hf(j, i * c + j + 1) = -1.0 / bf;
        }
      }
      break;
    }
    case TwowayEffect::Interaction: {
      hf = Matrix((b - 1) * (c - 1), b * c);
      std::size_t row = 0;
      for (std::size_t i = 1; i < b; ++i) {
        for (std::size_t j = 1; j < c; ++j) {
          hf(row, 0) = 1.0;
          hf(row, j) = -1.0;
          hf(row, i * c) = -1.0;
          hf(row, i * c + j) = 1.0;
          ++row;
        }
      }
      break;
    }
  }
  return HypothesisSpec::contrast(pad_contrast(hf, r));
}

HypothesisSpec nested_contrast(std::size_t b,
                               std::span<const std::size_t> c_per,
                               NestedEffect effect, std::size_t r) {
  if (b < 2) throw InvalidArity("nested_contrast: need b >= 2");
  if (c_per.size() != b)
    throw InvalidArgument("nested_contrast: need one sub-category count per category");
  for (std::size_t ci : c_per) {
    if (ci < 1) throw InvalidArity("nested_contrast: each c_i must be >= 1");
  }
  const std::size_t total = std::accumulate(c_per.begin(), c_per.end(), std::size_t{0});
  std::vector<std::size_t> offset(b, 0);
  for (std::size_t i = 1; i < b; ++i) offset[i] = offset[i - 1] + c_per[i - 1];

  Matrix hf;
  if (effect == NestedEffect::Category) {
    // Row i compares the sub-category average of category 1 and category i+1.
    hf = Matrix(b - 1, total);
    for (std::size_t i = 0; i + 1 < b; ++i) {
      for (std::size_t j = 0; j < c_per[0]; ++j)
        hf(i, offset[0] + j) = 1.0 / static_cast<double>(c_per[0]);
      for (std::size_t j = 0; j < c_per[i + 1]; ++j)
        hf(i, offset[i + 1] + j) = -1.0 / static_cast<double>(c_per[i + 1]);
    }
  } else {
    std::size_t q = 0;
    for (std::size_t ci : c_per) q += ci - 1;
    if (q == 0)
      throw InvalidArity("nested_contrast: sub-category effect needs some c_i >= 2");
    hf = Matrix(q, total);
    std::size_t row = 0;
    for (std::size_t i = 0; i < b; ++i) {
      for (std::size_t j = 0; j + 1 < c_per[i]; ++j) {
        hf(row, offset[i] + j) = 1.0;
        hf(row, offset[i] + j + 1) = -1.0;
        ++row;
      }
    }
  }
  return HypothesisSpec::contrast(pad_contrast(hf, r));
}

HypothesisSpec nested_projection(std::size_t b,
                                 std::span<const std::size_t> c_per,
                                 NestedEffect effect, std::size_t r) {
  if (b < 2) throw InvalidArity("nested_projection: need b >= 2");
  if (effect == NestedEffect::Subcategory) {
    if (c_per.size() != b)
      throw InvalidArgument("nested_projection: need one sub-category count per category");
    // Block diagonal of centering matrices.
    const std::size_t total = std::accumulate(c_per.begin(), c_per.end(), std::size_t{0});
    Matrix tf(total, total);
    std::size_t off = 0;
    for (std::size_t ci : c_per) {
      const Matrix p = centering(ci);
      for (std::size_t i = 0; i < ci; ++i)
        for (std::size_t j = 0; j < ci; ++j) tf(off + i, off + j) = p(i, j);
      off += ci;
    }
    return HypothesisSpec::projection(pad_projection(tf, r));
  }
  // Category effect: orthogonal projection with the null space of the
  // category contrast. Built through the contrast so that the result is
  // symmetric and idempotent even with unequal sub-category counts.
  return contrast_to_projection(nested_contrast(b, c_per, effect, r));
}

}  // namespace ancova

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

#include "gaussdev/bodies.hpp"
#include "gaussdev/simd.hpp"

namespace gaussdev {

RowMatrix::RowMatrix(std::size_t rows, std::size_t cols, std::vector<double> data)
    : rows_(rows), cols_(cols), data_(std::move(data)), row_len_(rows, 0) {
  if (data_.size() != rows * cols) throw std::invalid_argument("RowMatrix: size mismatch");
  for (std::size_t r = 0; r < rows; ++r) {
    std::size_t len = cols;
    while (len > 0 && data_[r * cols + len - 1] == 0.0) --len;
    row_len_[r] = len;
  }
}

double RowMatrix::max_row_norm() const {
  double best = 0.0;
  for (std::size_t r = 0; r < rows_; ++r) {
    const auto x = row(r);
    best = std::max(best, std::sqrt(simd::scalar_kernels().sq_sum(x.data(), cols_)));
  }
  return best;
}

std::size_t RowMatrix::rank(double tol) const {
  std::vector<std::vector<double>> basis;
  for (std::size_t r = 0; r < rows_ && basis.size() < cols_; ++r) {
    std::vector<double> v(row(r).begin(), row(r).end());
    const double scale = std::sqrt(simd::scalar_kernels().sq_sum(v.data(), cols_));
    if (scale == 0.0) continue;
    for (const auto& b : basis) {
      const double c = simd::scalar_kernels().dot(b.data(), v.data(), cols_);
      for (std::size_t j = 0; j < cols_; ++j) v[j] -= c * b[j];
    }
    const double norm = std::sqrt(simd::scalar_kernels().sq_sum(v.data(), cols_));
    if (norm > tol * scale) {
      for (auto& x : v) x /= norm;
      basis.push_back(std::move(v));
    }
  }
  return basis.size();
}

std::vector<double> GPSpec::covariance() const {
  const std::size_t m = index_size();
  std::vector<double> cov(m * m);
  for (std::size_t s = 0; s < m; ++s)
    for (std::size_t t = 0; t < m; ++t)
      cov[s * m + t] = simd::scalar_kernels().dot(loading.row(s).data(), loading.row(t).data(),
                                                  loading.cols());
  return cov;
}

GPSpec GPSpec::from_covariance(std::span<const double> cov, std::size_t m) {
  if (m == 0 || cov.size() != m * m) throw std::invalid_argument("GPSpec: covariance must be m x m");
  std::vector<double> l(m * m, 0.0);
  for (std::size_t i = 0; i < m; ++i) {
    for (std::size_t j = 0; j <= i; ++j) {
      double s = cov[i * m + j];
      for (std::size_t k = 0; k < j; ++k) s -= l[i * m + k] * l[j * m + k];
      if (i == j) {
        if (!(s > 0.0)) throw std::invalid_argument("GPSpec: covariance is not positive definite");
        l[i * m + i] = std::sqrt(s);
      } else {
        l[i * m + j] = s / l[j * m + j];
      }
    }
  }
  return GPSpec{RowMatrix(m, m, std::move(l))};
}

GPSpec GPSpec::brownian(std::size_t m, double horizon) {
  if (m == 0 || !(horizon > 0.0)) throw std::invalid_argument("brownian: need m >= 1, horizon > 0");
  std::vector<double> cov(m * m);
  for (std::size_t s = 0; s < m; ++s)
    for (std::size_t t = 0; t < m; ++t)
      cov[s * m + t] = horizon * static_cast<double>(std::min(s, t) + 1) / static_cast<double>(m);
  return from_covariance(cov, m);
}

std::string to_string(Family family) {
  switch (family) {
    case Family::lp_norm: return "lp_norm";
    case Family::max_abs_coordinate: return "max_abs_coordinate";
    case Family::linear_functional: return "linear_functional";
    case Family::polytope_gauge: return "polytope_gauge";
    case Family::gp_sup: return "gp_sup";
    case Family::logconvex_1d: return "logconvex_1d";
    case Family::identity_positive: return "identity_positive";
    case Family::softplus_positive: return "softplus_positive";
    case Family::custom: return "custom";
  }
  return "?";
}

namespace {

std::string format_p(double p) {
  if (std::isinf(p)) return "inf";
  std::string s = std::to_string(p);
  s.erase(s.find_last_not_of('0') + 1);
  if (s.back() == '.') s.pop_back();
  return s;
}

// max-factored evaluation: m * (sum (|x_i| / m)^p)^(1/p)
double lp_generic(std::span<const double> x, double p) {
  const double m = simd::kernels().abs_max(x.data(), x.size());
  if (m == 0.0) return 0.0;
  double s = 0.0;
  for (double v : x) s += std::pow(std::fabs(v) / m, p);
  return m * std::pow(s, 1.0 / p);
}

double softplus(double x) { return x > 30.0 ? x : std::log1p(std::exp(x)); }

}  // namespace

double FunctionDescriptor::operator()(std::span<const double> x) const {
  if (x.size() != dimension_)
    throw std::invalid_argument(name_ + ": expected dimension " + std::to_string(dimension_) +
                                ", got " + std::to_string(x.size()));
  const auto& k = simd::kernels();
  switch (family_) {
    case Family::lp_norm:
      if (p_ == 1.0) return k.abs_sum(x.data(), x.size());
      if (p_ == 2.0) return std::sqrt(k.sq_sum(x.data(), x.size()));
      if (std::isinf(p_)) return k.abs_max(x.data(), x.size());
      return lp_generic(x, p_);
    case Family::max_abs_coordinate: return k.abs_max(x.data(), x.size());
    case Family::linear_functional: return k.dot(direction_.data(), x.data(), x.size());
    case Family::polytope_gauge:
    case Family::gp_sup:
      return k.abs_max_rows(rows_.data(), rows_.row_lengths(), rows_.rows(), rows_.cols(), x.data());
    case Family::logconvex_1d: return std::exp(-x[0] + 0.5 * x[0] * x[0]);
    case Family::identity_positive: {
      double s = 0.0;
      for (double v : x) s += v;
      return s;
    }
    case Family::softplus_positive: {
      double s = 0.0;
      for (double v : x) s += softplus(v);
      return s;
    }
    case Family::custom: return custom_(x);
  }
  return std::numeric_limits<double>::quiet_NaN();
}

void FunctionDescriptor::evaluate_rows(std::span<const double> rows, std::span<double> out) const {
  if (rows.size() != out.size() * dimension_)
    throw std::invalid_argument(name_ + ": block dimension does not match descriptor dimension " +
                                std::to_string(dimension_));
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = (*this)(rows.subspan(i * dimension_, dimension_));
}

FunctionDescriptor FunctionDescriptor::lp_norm(double p, std::size_t n) {
  if (!(p >= 1.0)) throw std::invalid_argument("lp_norm: p must be >= 1");
  if (n == 0) throw std::invalid_argument("lp_norm: dimension must be positive");
  FunctionDescriptor f;
  f.name_ = "lp_norm(" + format_p(p) + "," + std::to_string(n) + ")";
  f.family_ = Family::lp_norm;
  f.dimension_ = n;
  f.p_ = p;
  f.flags_ = {true, true, true, false};
  f.lipschitz_ = p >= 2.0 ? 1.0 : std::pow(static_cast<double>(n), 1.0 / p - 0.5);
  return f;
}

FunctionDescriptor FunctionDescriptor::max_abs_coordinate(std::size_t n) {
  auto f = lp_norm(std::numeric_limits<double>::infinity(), n);
  f.name_ = "max_abs_coordinate(" + std::to_string(n) + ")";
  f.family_ = Family::max_abs_coordinate;
  return f;
}

FunctionDescriptor FunctionDescriptor::linear_functional(std::vector<double> direction) {
  if (direction.empty()) throw std::invalid_argument("linear_functional: empty direction");
  FunctionDescriptor f;
  f.dimension_ = direction.size();
  f.name_ = "linear_functional(" + std::to_string(f.dimension_) + ")";
  f.family_ = Family::linear_functional;
  f.flags_ = {true, false, false, false};
  f.lipschitz_ = std::sqrt(simd::scalar_kernels().sq_sum(direction.data(), direction.size()));
  f.direction_ = std::move(direction);
  return f;
}

FunctionDescriptor FunctionDescriptor::polytope_gauge(RowMatrix facets) {
  if (facets.rows() == 0 || facets.cols() == 0)
    throw std::invalid_argument("polytope_gauge: empty facet matrix");
  FunctionDescriptor f;
  f.dimension_ = facets.cols();
  f.name_ = "polytope_gauge(" + std::to_string(f.dimension_) + "," + std::to_string(facets.rows()) + ")";
  f.family_ = Family::polytope_gauge;
  f.flags_ = {true, false, facets.rank() == facets.cols(), false};
  f.lipschitz_ = facets.max_row_norm();
  f.rows_ = std::move(facets);
  return f;
}

FunctionDescriptor FunctionDescriptor::gp_sup(const GPSpec& gp) {
  auto f = polytope_gauge(gp.loading);
  f.name_ = "gp_sup(" + std::to_string(gp.index_size()) + ")";
  f.family_ = Family::gp_sup;
  return f;
}

FunctionDescriptor FunctionDescriptor::logconvex_1d() {
  FunctionDescriptor f;
  f.name_ = "logconvex_1d";
  f.family_ = Family::logconvex_1d;
  f.dimension_ = 1;
  f.flags_ = {true, false, false, false};
  return f;
}

FunctionDescriptor FunctionDescriptor::identity_positive(std::size_t k) {
  if (k == 0) throw std::invalid_argument("identity_positive: dimension must be positive");
  FunctionDescriptor f;
  f.name_ = "identity_positive(" + std::to_string(k) + ")";
  f.family_ = Family::identity_positive;
  f.dimension_ = k;
  f.flags_ = {true, false, false, true};
  f.domain_ = Domain::positive_orthant;
  f.lipschitz_ = std::sqrt(static_cast<double>(k));
  return f;
}

FunctionDescriptor FunctionDescriptor::softplus_positive(std::size_t k) {
  auto f = identity_positive(k);
  f.name_ = "softplus_positive(" + std::to_string(k) + ")";
  f.family_ = Family::softplus_positive;
  return f;
}

FunctionDescriptor FunctionDescriptor::custom(std::string name, std::size_t n, Evaluator fn,
                                              Flags flags, std::optional<double> lipschitz,
                                              Domain domain) {
  if (n == 0 || !fn) throw std::invalid_argument("custom: need a dimension and an evaluator");
  FunctionDescriptor f;
  f.name_ = std::move(name);
  f.family_ = Family::custom;
  f.dimension_ = n;
  f.flags_ = flags;
  f.lipschitz_ = lipschitz;
  f.domain_ = domain;
  f.custom_ = std::move(fn);
  return f;
}

FunctionDescriptor make_builtin(const std::string& family, const BuiltinParams& params) {
  auto need_n = [&] {
    if (params.n == 0) throw std::invalid_argument(family + ": parameter n is required");
    return params.n;
  };
  if (family == "lp_norm") {
    if (!params.p) throw std::invalid_argument("lp_norm: parameter p is required");
    return FunctionDescriptor::lp_norm(*params.p, need_n());
  }
  if (family == "max_abs_coordinate") return FunctionDescriptor::max_abs_coordinate(need_n());
  if (family == "linear_functional") {
    if (!params.direction.empty()) return FunctionDescriptor::linear_functional(params.direction);
    std::vector<double> e1(need_n(), 0.0);
    e1[0] = 1.0;
    return FunctionDescriptor::linear_functional(std::move(e1));
  }
  if (family == "polytope_gauge") {
    if (!params.facets) throw std::invalid_argument("polytope_gauge: facet matrix is required");
    return FunctionDescriptor::polytope_gauge(*params.facets);
  }
  if (family == "gp_sup") {
    if (!params.gp) throw std::invalid_argument("gp_sup: a Gaussian process is required");
    return FunctionDescriptor::gp_sup(*params.gp);
  }
  if (family == "logconvex_1d") return FunctionDescriptor::logconvex_1d();
  if (family == "identity_positive") return FunctionDescriptor::identity_positive(need_n());
  if (family == "softplus_positive") return FunctionDescriptor::softplus_positive(need_n());
  throw std::invalid_argument("unknown function family '" + family + "'");
}

RowMatrix random_facets(std::size_t n, std::size_t m, const StreamSpec& stream) {
  auto block = sample(DistributionKind::gaussian(n), stream, m);
  std::vector<double> data(block.data().begin(), block.data().end());
  for (std::size_t r = 0; r < m; ++r) {
    const double norm = std::sqrt(simd::scalar_kernels().sq_sum(data.data() + r * n, n));
    for (std::size_t j = 0; j < n; ++j) data[r * n + j] /= norm;
  }
  return RowMatrix(m, n, std::move(data));
}

std::vector<double> evaluate(const FunctionDescriptor& f, const SampleBlock& block) {
  if (!block.empty() && block.cols() != f.dimension())
    throw std::invalid_argument(f.name() + ": block has " + std::to_string(block.cols()) +
                                " columns, descriptor dimension is " + std::to_string(f.dimension()));
  std::vector<double> out(block.rows());
  f.evaluate_rows(block.data(), out);
  return out;
}

SphereMax b_max_on_sphere(const FunctionDescriptor& f, const StreamSpec& stream,
                          std::size_t directions) {
  if (!f.is_norm()) throw std::invalid_argument(f.name() + ": b(A) needs a norm");
  const double n = static_cast<double>(f.dimension());
  switch (f.family()) {
    case Family::lp_norm:
      return {f.p() >= 2.0 ? 1.0 : std::pow(n, 1.0 / f.p() - 0.5), false};
    case Family::max_abs_coordinate: return {1.0, false};
    case Family::polytope_gauge:
    case Family::gp_sup: return {f.rows().max_row_norm(), false};
    default: break;
  }
  SphereMax out{0.0, true};
  std::vector<double> e(f.dimension(), 0.0);
  for (std::size_t j = 0; j < f.dimension(); ++j) {
    e[j] = 1.0;
    out.value = std::max(out.value, f(e));
    e[j] = 0.0;
  }
  const auto block = sample(DistributionKind::gaussian(f.dimension()), stream, directions);
  std::vector<double> theta(f.dimension());
  for (std::size_t i = 0; i < block.rows(); ++i) {
    const auto x = block.row(i);
    const double norm = std::sqrt(simd::scalar_kernels().sq_sum(x.data(), x.size()));
    for (std::size_t j = 0; j < x.size(); ++j) theta[j] = x[j] / norm;
    out.value = std::max(out.value, f(theta));
  }
  return out;
}

namespace {

// Random test points: N(0, scale^2 I), folded onto the orthant when the
// function lives there.
SampleBlock test_points(const FunctionDescriptor& f, const StreamSpec& stream, std::size_t count,
                        double scale) {
  auto block = sample(DistributionKind::gaussian(f.dimension()), stream, count);
  for (double& v : block.data()) {
    v *= scale;
    if (f.domain() == Domain::positive_orthant) v = std::fabs(v);
  }
  return block;
}

void record(PropertyReport& rep, double excess) {
  if (excess > 0.0) {
    ++rep.violations;
    rep.max_violation = std::max(rep.max_violation, excess);
  }
}

}  // namespace

PropertyReport check_convexity(const FunctionDescriptor& f, const StreamSpec& stream,
                               std::size_t trials) {
  if (trials == 0) throw std::invalid_argument("check_convexity: trials must be >= 1");
  PropertyReport rep{"convexity", trials, 0, 0.0};
  const auto xs = test_points(f, stream.substream(1), trials, 2.0);
  const auto ys = test_points(f, stream.substream(2), trials, 2.0);
  std::vector<double> mid(f.dimension());
  for (std::size_t i = 0; i < trials; ++i) {
    const double lambda = uniform_at(stream, i);
    const auto x = xs.row(i);
    const auto y = ys.row(i);
    for (std::size_t j = 0; j < mid.size(); ++j) mid[j] = lambda * x[j] + (1.0 - lambda) * y[j];
    const double rhs = lambda * f(x) + (1.0 - lambda) * f(y);
    record(rep, f(mid) - rhs - 1e-9 * std::max(1.0, std::fabs(rhs)));
  }
  return rep;
}

PropertyReport check_unconditional(const FunctionDescriptor& f, const StreamSpec& stream,
                                   std::size_t trials) {
  if (trials == 0) throw std::invalid_argument("check_unconditional: trials must be >= 1");
  PropertyReport rep{"unconditional", trials, 0, 0.0};
  const auto xs = test_points(f, stream.substream(3), trials, 2.0);
  std::vector<double> flipped(f.dimension());
  for (std::size_t i = 0; i < trials; ++i) {
    const auto x = xs.row(i);
    for (std::size_t j = 0; j < flipped.size(); ++j) {
      const bool neg = random_bits(stream, i * flipped.size() + j, 2) & 1u;
      flipped[j] = neg ? -x[j] : x[j];
    }
    const double fx = f(x);
    record(rep, std::fabs(fx - f(flipped)) - 1e-12 * std::max(1.0, std::fabs(fx)));
  }
  return rep;
}

PropertyReport check_lipschitz(const FunctionDescriptor& f, const StreamSpec& stream,
                               std::size_t trials) {
  const auto lip = f.lipschitz_exact();
  if (!lip) throw std::invalid_argument(f.name() + ": no exact Lipschitz constant");
  PropertyReport rep{"lipschitz", trials, 0, 0.0};
  const auto xs = test_points(f, stream.substream(4), trials, 1.0);
  const auto ys = test_points(f, stream.substream(5), trials, 1.0);
  std::vector<double> diff(f.dimension());
  for (std::size_t i = 0; i < trials; ++i) {
    const auto x = xs.row(i);
    const auto y = ys.row(i);
    // Half the pairs are close, to probe local slopes.
    const double shrink = (i % 2 == 0) ? 1.0 : 1e-3;
    std::vector<double> yy(x.begin(), x.end());
    for (std::size_t j = 0; j < yy.size(); ++j) yy[j] = x[j] + shrink * (y[j] - x[j]);
    for (std::size_t j = 0; j < diff.size(); ++j) diff[j] = x[j] - yy[j];
    const double dist = std::sqrt(simd::scalar_kernels().sq_sum(diff.data(), diff.size()));
    record(rep, std::fabs(f(x) - f(yy)) - *lip * dist * (1.0 + 1e-12) - 1e-12);
  }
  return rep;
}

PropertyReport check_norm_axioms(const FunctionDescriptor& f, const StreamSpec& stream,
                                 std::size_t trials) {
  PropertyReport rep{"norm_axioms", trials, 0, 0.0};
  const auto xs = test_points(f, stream.substream(6), trials, 1.5);
  const auto ys = test_points(f, stream.substream(7), trials, 1.5);
  std::vector<double> tmp(f.dimension());
  for (std::size_t i = 0; i < trials; ++i) {
    const auto x = xs.row(i);
    const auto y = ys.row(i);
    const double fx = f(x);
    const double fy = f(y);
    record(rep, -fx);
    const double lambda = 0.1 + 10.0 * uniform_at(stream, i, 3);
    for (std::size_t j = 0; j < tmp.size(); ++j) tmp[j] = lambda * x[j];
    record(rep, std::fabs(f(tmp) - lambda * fx) - 1e-12 * lambda * std::max(fx, 1e-300));
    for (std::size_t j = 0; j < tmp.size(); ++j) tmp[j] = -x[j];
    record(rep, std::fabs(f(tmp) - fx) - 1e-12 * fx);
    for (std::size_t j = 0; j < tmp.size(); ++j) tmp[j] = x[j] + y[j];
    record(rep, f(tmp) - fx - fy - 1e-9);
  }
  return rep;
}

}  // namespace gaussdev

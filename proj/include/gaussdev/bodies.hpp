#pragma once

#include <cstddef>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "gaussdev/randcore.hpp"

namespace gaussdev {

// Dense row-major matrix whose rows may carry trailing zeros; row_len(r) is
// the length of the nonzero prefix, which the gauge kernels exploit for
// triangular loadings.
class RowMatrix {
 public:
  RowMatrix() = default;
  RowMatrix(std::size_t rows, std::size_t cols, std::vector<double> data);

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  std::span<const double> row(std::size_t r) const { return {data_.data() + r * cols_, cols_}; }
  const double* data() const { return data_.data(); }
  const std::size_t* row_lengths() const { return row_len_.data(); }
  std::size_t row_len(std::size_t r) const { return row_len_[r]; }
  double max_row_norm() const;
  // Numerical rank by modified Gram-Schmidt.
  std::size_t rank(double tol = 1e-10) const;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<double> data_;
  std::vector<std::size_t> row_len_;
};

// Finite Gaussian process G_t = <a_t, Z>, Z ~ N(0, I_n); covariance <a_s, a_t>.
struct GPSpec {
  RowMatrix loading;  // one row a_t per index t

  std::size_t index_size() const { return loading.rows(); }
  std::size_t dimension() const { return loading.cols(); }
  // m x m covariance, row-major.
  std::vector<double> covariance() const;

  // Cholesky factorisation of a positive definite covariance matrix.
  static GPSpec from_covariance(std::span<const double> cov, std::size_t m);
  // Brownian motion on the grid t_k = horizon * k / m, k = 1..m (cov min(s, t)).
  static GPSpec brownian(std::size_t m, double horizon = 1.0);
};

enum class Family {
  lp_norm,
  max_abs_coordinate,
  linear_functional,
  polytope_gauge,
  gp_sup,
  logconvex_1d,
  identity_positive,
  softplus_positive,
  custom,
};

std::string to_string(Family family);

enum class Domain { whole_space, positive_orthant };

using Evaluator = std::function<double(std::span<const double>)>;

// Immutable convex test function / norm gauge with its metadata.
class FunctionDescriptor {
 public:
  struct Flags {
    bool is_convex = false;
    bool is_unconditional = false;
    bool is_norm = false;
    bool is_nondecreasing = false;  // coordinatewise, on the positive orthant
  };

  const std::string& name() const { return name_; }
  Family family() const { return family_; }
  std::size_t dimension() const { return dimension_; }
  const Flags& flags() const { return flags_; }
  bool is_convex() const { return flags_.is_convex; }
  bool is_unconditional() const { return flags_.is_unconditional; }
  bool is_norm() const { return flags_.is_norm; }
  Domain domain() const { return domain_; }
  std::optional<double> lipschitz_exact() const { return lipschitz_; }

  double p() const { return p_; }
  const std::vector<double>& direction() const { return direction_; }
  const RowMatrix& rows() const { return rows_; }

  double operator()(std::span<const double> x) const;
  // out[i] = f(rows[i * dimension .. (i + 1) * dimension))
  void evaluate_rows(std::span<const double> rows, std::span<double> out) const;

  static FunctionDescriptor lp_norm(double p, std::size_t n);
  static FunctionDescriptor max_abs_coordinate(std::size_t n);
  static FunctionDescriptor linear_functional(std::vector<double> direction);
  static FunctionDescriptor polytope_gauge(RowMatrix facets);
  static FunctionDescriptor gp_sup(const GPSpec& gp);
  static FunctionDescriptor logconvex_1d();
  static FunctionDescriptor identity_positive(std::size_t k);
  static FunctionDescriptor softplus_positive(std::size_t k);
  static FunctionDescriptor custom(std::string name, std::size_t n, Evaluator fn, Flags flags,
                                   std::optional<double> lipschitz = std::nullopt,
                                   Domain domain = Domain::whole_space);

 private:
  std::string name_;
  Family family_ = Family::custom;
  std::size_t dimension_ = 0;
  Flags flags_;
  Domain domain_ = Domain::whole_space;
  std::optional<double> lipschitz_;
  double p_ = 2.0;
  std::vector<double> direction_;
  RowMatrix rows_;
  Evaluator custom_;
};

// Loose parameter record for building catalog entries by name.
struct BuiltinParams {
  std::optional<double> p;
  std::size_t n = 0;
  std::vector<double> direction;
  std::optional<RowMatrix> facets;
  std::optional<GPSpec> gp;
};

// family in {lp_norm, max_abs_coordinate, linear_functional, polytope_gauge,
// gp_sup, logconvex_1d, identity_positive, softplus_positive}.
FunctionDescriptor make_builtin(const std::string& family, const BuiltinParams& params);

// m facet normals drawn uniformly on the unit sphere of R^n.
RowMatrix random_facets(std::size_t n, std::size_t m, const StreamSpec& stream);

std::vector<double> evaluate(const FunctionDescriptor& f, const SampleBlock& block);

struct SphereMax {
  double value = 0.0;
  bool lower_bound_only = false;
};

// b = max over the Euclidean unit sphere of f. Closed form for builtins,
// otherwise a Monte Carlo lower bound.
SphereMax b_max_on_sphere(const FunctionDescriptor& f, const StreamSpec& stream = {},
                          std::size_t directions = 100000);

struct PropertyReport {
  std::string property;
  std::size_t trials = 0;
  std::size_t violations = 0;
  double max_violation = 0.0;  // largest excess over the tolerance-adjusted bound

  bool passed() const { return violations == 0; }
};

PropertyReport check_convexity(const FunctionDescriptor& f, const StreamSpec& stream,
                               std::size_t trials);
PropertyReport check_unconditional(const FunctionDescriptor& f, const StreamSpec& stream,
                                   std::size_t trials);
// |f(x) - f(y)| <= L |x - y|_2 on random pairs; requires lipschitz_exact.
PropertyReport check_lipschitz(const FunctionDescriptor& f, const StreamSpec& stream,
                               std::size_t trials);
// Positive homogeneity, symmetry and the triangle inequality on random triples.
PropertyReport check_norm_axioms(const FunctionDescriptor& f, const StreamSpec& stream,
                                 std::size_t trials);

}  // namespace gaussdev

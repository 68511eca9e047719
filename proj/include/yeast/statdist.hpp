#pragma once

#include <functional>
#include <vector>

namespace yeast {

/// Settings for fixed-node Gauss-Legendre integration.
///
/// `domain_halfwidth_sigmas` bounds the truncated normal's lower tail when an
/// integral over (-inf, b] has to be replaced by a finite window.
struct QuadratureSpec {
  int node_count = 128;
  double domain_halfwidth_sigmas = 10.0;

  /// Throws DomainError unless node_count >= 16 and halfwidth >= 6.
  void validate() const;
};

/// Nodes and weights of an n-point Gauss-Legendre rule on [-1, 1].
struct GaussLegendreRule {
  std::vector<double> nodes;
  std::vector<double> weights;

  explicit GaussLegendreRule(int node_count);

  int size() const noexcept { return static_cast<int>(nodes.size()); }

  /// Integral of f over [lo, hi] with this rule.
  template <typename F>
  double integrate(F&& f, double lo, double hi) const {
    const double half = 0.5 * (hi - lo);
    const double mid = 0.5 * (hi + lo);
    double sum = 0.0;
    for (std::size_t i = 0; i < nodes.size(); ++i) {
      sum += weights[i] * f(mid + half * nodes[i]);
    }
    return sum * half;
  }
};

double normal_pdf(double x);

/// Standard normal CDF, accurate to ~1e-16 absolute on the whole line.
double normal_cdf(double x);

/// Upper tail 1 - Phi(x) without cancellation for large x.
double normal_sf(double x);

/// Inverse of normal_cdf on (0, 1).
double normal_quantile(double p);

/// Rational approximation to the quantile without refinement (relative error
/// below 1.2e-9); cheap enough for sampling by inversion.
double normal_quantile_fast(double p);

/// Fixed-node Gauss-Legendre estimate of the integral of f over [lo, hi].
double gauss_legendre(const std::function<double(double)>& f, double lo, double hi,
                      const QuadratureSpec& quad = {});

/// CDF at `b_cur` of X + Y where X ~ N(0, var_prev) truncated to X <= b_prev
/// and Y ~ N(0, var_incr) is independent of X:
///
///   J = int_{-inf}^{b_prev} Phi((b_cur - x)/sqrt(var_incr)) phi(x/sqrt(var_prev)) dx
///       / (Z sqrt(var_prev)),   Z = Phi(b_prev/sqrt(var_prev)).
///
/// Evaluated by composite Gauss-Legendre quadrature, once with node_count and
/// once with 2*node_count nodes per panel; a disagreement above 1e-8 raises
/// NumericalError.
double truncated_normal_convolution_cdf(double b_prev, double b_cur, double var_prev, double var_incr,
                                        const QuadratureSpec& quad = {});

/// Same as above with caller-owned rules, for hot loops that evaluate many
/// integrals with one quadrature setting. `fine` must have twice the nodes
/// of `coarse`.
double truncated_normal_convolution_cdf(double b_prev, double b_cur, double var_prev, double var_incr,
                                        double domain_halfwidth_sigmas, const GaussLegendreRule& coarse,
                                        const GaussLegendreRule& fine);

}  // namespace yeast

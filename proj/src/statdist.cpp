#include "yeast/statdist.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "yeast/errors.hpp"

namespace yeast {

namespace {

constexpr double kInvSqrt2Pi = 0.3989422804014326779399461;
constexpr double kInvSqrt2 = 0.7071067811865475244008444;

void require_finite(double x, const char* what) {
  if (!std::isfinite(x)) {
    throw DomainError(std::string(what) + ": argument must be finite");
  }
}

// Acklam's rational approximation to the normal quantile; relative error
// below 1.2e-9 over (0, 1).
double acklam_quantile(double p) {
  static constexpr double a[] = {-3.969683028665376e+01, 2.209460984245205e+02, -2.759285104469687e+02,
                                 1.383577518672690e+02,  -3.066479806614716e+01, 2.506628277459239e+00};
  static constexpr double b[] = {-5.447609879822406e+01, 1.615858368580409e+02, -1.556989798598866e+02,
                                 6.680131188771972e+01,  -1.328068155288572e+01};
  static constexpr double c[] = {-7.784894002430293e-03, -3.223964580411365e-01, -2.400758277161838e+00,
                                 -2.549732539343734e+00, 4.374664141464968e+00,  2.938163982698783e+00};
  static constexpr double d[] = {7.784695709041462e-03, 3.224671290700398e-01, 2.445134137142996e+00,
                                 3.754408661907416e+00};
  constexpr double p_low = 0.02425;
  constexpr double p_high = 1.0 - p_low;

  if (p < p_low) {
    const double q = std::sqrt(-2.0 * std::log(p));
    return (((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) /
           ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1.0);
  }
  if (p <= p_high) {
    const double q = p - 0.5;
    const double r = q * q;
    return (((((a[0] * r + a[1]) * r + a[2]) * r + a[3]) * r + a[4]) * r + a[5]) * q /
           (((((b[0] * r + b[1]) * r + b[2]) * r + b[3]) * r + b[4]) * r + 1.0);
  }
  const double q = std::sqrt(-2.0 * std::log1p(-p));
  return -(((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) /
         ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1.0);
}

}  // namespace

void QuadratureSpec::validate() const {
  if (node_count < 16) {
    throw DomainError("quadrature node_count must be at least 16");
  }
  if (!(domain_halfwidth_sigmas >= 6.0) || !std::isfinite(domain_halfwidth_sigmas)) {
    throw DomainError("quadrature domain half-width must be at least 6 standard deviations");
  }
}

GaussLegendreRule::GaussLegendreRule(int node_count) {
  if (node_count < 1) {
    throw DomainError("Gauss-Legendre rule needs at least one node");
  }
  const int n = node_count;
  nodes.resize(n);
  weights.resize(n);
  // Roots are symmetric; Newton iteration on P_n from the Tricomi initial guess.
  const int m = (n + 1) / 2;
  for (int i = 0; i < m; ++i) {
    double z = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
    double dp = 0.0;
    for (int iter = 0; iter < 100; ++iter) {
      double p0 = 1.0;
      double p1 = z;
      for (int k = 2; k <= n; ++k) {
        const double p2 = ((2.0 * k - 1.0) * z * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = p2;
      }
      dp = n * (z * p1 - p0) / (z * z - 1.0);
      const double step = p1 / dp;
      z -= step;
      if (std::abs(step) < 1e-16) {
        break;
      }
    }
    const double w = 2.0 / ((1.0 - z * z) * dp * dp);
    nodes[i] = -z;
    nodes[n - 1 - i] = z;
    weights[i] = w;
    weights[n - 1 - i] = w;
  }
}

double normal_pdf(double x) {
  require_finite(x, "normal_pdf");
  return kInvSqrt2Pi * std::exp(-0.5 * x * x);
}

double normal_cdf(double x) {
  require_finite(x, "normal_cdf");
  return 0.5 * std::erfc(-x * kInvSqrt2);
}

double normal_sf(double x) {
  require_finite(x, "normal_sf");
  return 0.5 * std::erfc(x * kInvSqrt2);
}

double normal_quantile_fast(double p) { return acklam_quantile(p); }

double normal_quantile(double p) {
  if (!(p > 0.0 && p < 1.0)) {
    throw DomainError("normal_quantile: probability must lie in (0, 1)");
  }
  double x = acklam_quantile(p);
  // Two Newton steps on the CDF. The residual is taken on whichever tail is
  // smaller so it does not cancel near 0 or 1.
  for (int step = 0; step < 2; ++step) {
    const double density = kInvSqrt2Pi * std::exp(-0.5 * x * x);
    if (density == 0.0) {
      break;
    }
    const double residual = (p < 0.5) ? (0.5 * std::erfc(-x * kInvSqrt2) - p)
                                      : ((1.0 - p) - 0.5 * std::erfc(x * kInvSqrt2));
    x -= residual / density;
  }
  return x;
}

double gauss_legendre(const std::function<double(double)>& f, double lo, double hi, const QuadratureSpec& quad) {
  if (!(lo < hi)) {
    throw DomainError("gauss_legendre: lower limit must be below upper limit");
  }
  if (quad.node_count < 1) {
    throw DomainError("gauss_legendre: node_count must be positive");
  }
  const GaussLegendreRule rule(quad.node_count);
  return rule.integrate(f, lo, hi);
}

double truncated_normal_convolution_cdf(double b_prev, double b_cur, double var_prev, double var_incr,
                                        const QuadratureSpec& quad) {
  quad.validate();
  const GaussLegendreRule coarse(quad.node_count);
  const GaussLegendreRule fine(2 * quad.node_count);
  return truncated_normal_convolution_cdf(b_prev, b_cur, var_prev, var_incr, quad.domain_halfwidth_sigmas, coarse,
                                          fine);
}

double truncated_normal_convolution_cdf(double b_prev, double b_cur, double var_prev, double var_incr,
                                        double domain_halfwidth_sigmas, const GaussLegendreRule& coarse,
                                        const GaussLegendreRule& fine) {
  if (!(var_prev > 0.0) || !(var_incr > 0.0) || !std::isfinite(var_prev) || !std::isfinite(var_incr)) {
    throw DomainError("truncated_normal_convolution_cdf: variances must be positive and finite");
  }
  require_finite(b_prev, "truncated_normal_convolution_cdf");
  require_finite(b_cur, "truncated_normal_convolution_cdf");

  const double sd_prev = std::sqrt(var_prev);
  const double sd_incr = std::sqrt(var_incr);
  const double z = normal_cdf(b_prev / sd_prev);
  if (!(z > 1e-300)) {
    throw NumericalError("truncated_normal_convolution_cdf: truncation mass underflows");
  }

  const double lo = std::min(-domain_halfwidth_sigmas, b_prev / sd_prev - domain_halfwidth_sigmas) * sd_prev;
  const double hi = b_prev;

  // Panels split around the step of the inner CDF so that a narrow increment
  // variance does not leave a kink inside a single panel.
  std::vector<double> cuts{lo, hi};
  for (int k = -3; k <= 3; ++k) {
    const double c = b_cur + 3.0 * k * sd_incr;
    if (c > lo && c < hi) {
      cuts.push_back(c);
    }
  }
  std::sort(cuts.begin(), cuts.end());
  cuts.erase(std::unique(cuts.begin(), cuts.end(),
                         [&](double a, double b) { return std::abs(b - a) <= 1e-12 * (hi - lo); }),
             cuts.end());

  const auto integrand = [&](double x) {
    const double t = x / sd_prev;
    return 0.5 * std::erfc(-(b_cur - x) / sd_incr * kInvSqrt2) * kInvSqrt2Pi * std::exp(-0.5 * t * t);
  };

  double coarse_sum = 0.0;
  double fine_sum = 0.0;
  for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
    coarse_sum += coarse.integrate(integrand, cuts[i], cuts[i + 1]);
    fine_sum += fine.integrate(integrand, cuts[i], cuts[i + 1]);
  }
  const double scale = 1.0 / (z * sd_prev);
  const double coarse_value = coarse_sum * scale;
  const double fine_value = fine_sum * scale;
  if (!(std::abs(fine_value - coarse_value) <= 1e-8)) {
    throw NumericalError("truncated_normal_convolution_cdf: quadrature did not converge");
  }
  return std::clamp(fine_value, 0.0, 1.0);
}

}  // namespace yeast

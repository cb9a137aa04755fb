#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <vector>

#include "gml/errors.hpp"
#include "gml/stats.hpp"

namespace gml {

constexpr double kTauMax = 10.0;

// Class weighting for weighted maximum likelihood: unmatching evidence
// weighs 1, matching evidence weighs n_minus / n_plus.
struct ClassWeights {
  std::size_t n_unmatch = 0;
  std::size_t n_match = 0;

  double match_weight() const {
    if (n_match == 0 || n_unmatch == 0) {
      throw NumericError("class weights need evidence of both classes");
    }
    return static_cast<double>(n_unmatch) / static_cast<double>(n_match);
  }
  double weight(bool is_match) const { return is_match ? match_weight() : 1.0; }
};

// Log-odds target for a hard 0/1 label, clamped away from +-infinity.
inline double encode_logit_target(bool is_match, double epsilon) {
  if (!(epsilon > 0.0 && epsilon < 0.5)) {
    throw ConfigError("logit epsilon must lie in (0, 0.5)");
  }
  double magnitude = std::log((1.0 - epsilon) / epsilon);
  return is_match ? magnitude : -magnitude;
}

struct SigmoidModel {
  double alpha = 0.0;
  double tau = 0.0;
  double alpha_lo = 0.0;  // expectation of x over one evidence class
  double alpha_hi = 0.0;  // expectation over the other, ordered lo <= hi

  double influence(double x) const { return logistic(tau * (x - alpha)); }
};

struct RegressionFit {
  double alpha_hat = 0.0;
  double tau_hat = 0.0;
  double sigma2_hat = 0.0;
  double x_bar = 0.0;
  double sum_sq_dev = 0.0;  // unweighted sum of (x_i - x_bar)^2
  std::size_t n_obs = 0;
  bool fittable = false;
  double alpha_lo = 0.0;
  double alpha_hi = 0.0;

  SigmoidModel model() const { return {alpha_hat, tau_hat, alpha_lo, alpha_hi}; }
};

// Streaming per-class moments (Welford).
struct ClassAccumulator {
  std::size_t n = 0;
  double mean = 0.0;
  double m2 = 0.0;

  void add(double x) {
    ++n;
    double d = x - mean;
    mean += d / static_cast<double>(n);
    m2 += d * (x - mean);
  }
};

namespace detail {

inline void finish_fit(RegressionFit& fit, double slope, double intercept, double logit_mag,
                       const ClassAccumulator& unmatch, const ClassAccumulator& match) {
  fit.alpha_lo = std::min(unmatch.mean, match.mean);
  fit.alpha_hi = std::max(unmatch.mean, match.mean);
  fit.tau_hat = std::clamp(slope, 0.0, kTauMax);
  if (fit.tau_hat > 0.0 && std::fabs(slope) > 1e-12) {
    fit.alpha_hat = std::clamp(-intercept / slope, fit.alpha_lo, fit.alpha_hi);
  } else {
    fit.tau_hat = 0.0;
    fit.alpha_hat = 0.5 * (fit.alpha_lo + fit.alpha_hi);
  }

  // Unweighted residual variance under the final (clipped) parameters,
  // n - 2 divisor. Per class the target is constant, so
  // sum r^2 = n_c (l_c + tau*alpha - tau*mean_c)^2 + tau^2 M2_c.
  auto class_rss = [&](const ClassAccumulator& acc, double target) {
    double bias = target + fit.tau_hat * fit.alpha_hat - fit.tau_hat * acc.mean;
    return static_cast<double>(acc.n) * bias * bias + fit.tau_hat * fit.tau_hat * acc.m2;
  };
  double rss = class_rss(unmatch, -logit_mag) + class_rss(match, logit_mag);
  fit.sigma2_hat = std::max(0.0, rss / static_cast<double>(fit.n_obs - 2));
}

}  // namespace detail

// Weighted least squares of the +-L logit targets on x, expressed in closed
// form over per-class moments; algebraically identical to refitting from the
// full evidence list (checked against the direct path in tests).
inline RegressionFit fit_sigmoid_regression(const ClassAccumulator& unmatch,
                                            const ClassAccumulator& match,
                                            const ClassWeights& weights, double logit_epsilon) {
  RegressionFit fit;
  fit.n_obs = unmatch.n + match.n;
  if (fit.n_obs < 3 || unmatch.n == 0 || match.n == 0) return fit;

  double n = static_cast<double>(fit.n_obs);
  double nu = static_cast<double>(unmatch.n), nm = static_cast<double>(match.n);
  fit.x_bar = (nu * unmatch.mean + nm * match.mean) / n;
  fit.sum_sq_dev = unmatch.m2 + match.m2 + nu * (unmatch.mean - fit.x_bar) * (unmatch.mean - fit.x_bar) +
                   nm * (match.mean - fit.x_bar) * (match.mean - fit.x_bar);
  if (!(fit.sum_sq_dev > 0.0)) return fit;

  double L = encode_logit_target(true, logit_epsilon);
  double w = weights.weight(true);
  double W = nu + w * nm;
  double xw = (nu * unmatch.mean + w * nm * match.mean) / W;
  double sxx_w = (unmatch.m2 + nu * (unmatch.mean - xw) * (unmatch.mean - xw)) +
                 w * (match.m2 + nm * (match.mean - xw) * (match.mean - xw));
  if (!(sxx_w > 0.0)) return fit;
  double lw = L * (w * nm - nu) / W;
  double sxy_w = nu * (-L - lw) * (unmatch.mean - xw) + w * nm * (L - lw) * (match.mean - xw);

  double slope = sxy_w / sxx_w;
  double intercept = lw - slope * xw;
  fit.fittable = true;
  detail::finish_fit(fit, slope, intercept, L, unmatch, match);
  return fit;
}

// Direct fit over explicit observations with arbitrary targets; reference
// path for the accumulator form and for fixtures with synthetic targets.
struct RegressionObservation {
  double x = 0.0;
  double target = 0.0;
  double weight = 1.0;
  bool is_match = false;
};

inline RegressionFit fit_sigmoid_regression_direct(const std::vector<RegressionObservation>& obs) {
  RegressionFit fit;
  fit.n_obs = obs.size();
  ClassAccumulator unmatch, match;
  for (const auto& o : obs) (o.is_match ? match : unmatch).add(o.x);
  if (fit.n_obs < 3 || unmatch.n == 0 || match.n == 0) return fit;

  double n = static_cast<double>(fit.n_obs);
  double sx = 0.0;
  for (const auto& o : obs) sx += o.x;
  fit.x_bar = sx / n;
  for (const auto& o : obs) fit.sum_sq_dev += (o.x - fit.x_bar) * (o.x - fit.x_bar);
  if (!(fit.sum_sq_dev > 0.0)) return fit;

  double W = 0.0, xw = 0.0, lw = 0.0;
  for (const auto& o : obs) {
    W += o.weight;
    xw += o.weight * o.x;
    lw += o.weight * o.target;
  }
  xw /= W;
  lw /= W;
  double sxx_w = 0.0, sxy_w = 0.0;
  for (const auto& o : obs) {
    sxx_w += o.weight * (o.x - xw) * (o.x - xw);
    sxy_w += o.weight * (o.x - xw) * (o.target - lw);
  }
  if (!(sxx_w > 0.0)) return fit;

  double slope = sxy_w / sxx_w;
  double intercept = lw - slope * xw;

  fit.fittable = true;
  fit.alpha_lo = std::min(unmatch.mean, match.mean);
  fit.alpha_hi = std::max(unmatch.mean, match.mean);
  fit.tau_hat = std::clamp(slope, 0.0, kTauMax);
  if (fit.tau_hat > 0.0 && std::fabs(slope) > 1e-12) {
    fit.alpha_hat = std::clamp(-intercept / slope, fit.alpha_lo, fit.alpha_hi);
  } else {
    fit.tau_hat = 0.0;
    fit.alpha_hat = 0.5 * (fit.alpha_lo + fit.alpha_hi);
  }
  double rss = 0.0;
  for (const auto& o : obs) {
    double r = o.target - fit.tau_hat * (o.x - fit.alpha_hat);
    rss += r * r;
  }
  fit.sigma2_hat = std::max(0.0, rss / static_cast<double>(fit.n_obs - 2));
  return fit;
}

// Confidence that the regression's influence prediction at x stays within
// +-error_bound on the log-odds scale: theta = 2 F_t(bound / se(x)) - 1 with
// se(x) = sigma * sqrt(1 + 1/n + (x - x_bar)^2 / sum_sq_dev).
// Unfittable features carry no support (theta = 0).
inline double regression_confidence(const RegressionFit& fit, double x, double error_bound) {
  if (!(error_bound > 0.0)) throw ConfigError("error bound must be positive");
  if (!fit.fittable) return 0.0;
  if (fit.sigma2_hat <= 0.0) return 1.0;
  double dev = x - fit.x_bar;
  double se = std::sqrt(fit.sigma2_hat *
                        (1.0 + 1.0 / static_cast<double>(fit.n_obs) + dev * dev / fit.sum_sq_dev));
  double theta = 2.0 * student_t_cdf(error_bound / se, fit.n_obs - 2) - 1.0;
  return std::clamp(theta, 0.0, 1.0);
}

// Confidence-scaled log-odds contribution of one feature on one pair.
inline double factor_weight(const SigmoidModel& model, double x, double theta) {
  return theta * model.tau * (x - model.alpha);
}

}  // namespace gml

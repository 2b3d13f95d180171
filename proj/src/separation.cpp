#include "uhop/separation.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <vector>

namespace uhop {

double lse(double beta, const Vector& z) {
  require(z.size() > 0, errc::invalid_argument, "lse: empty vector");
  require(beta > 0.0, errc::invalid_argument, "lse: beta must be positive");
  const Vector zb = beta * z;
  const double m = zb.maxCoeff();
  return (m + std::log((zb.array() - m).exp().sum())) / beta;
}

Vector softmax(double beta, const Vector& z) {
  require(z.size() > 0, errc::invalid_argument, "softmax: empty vector");
  Vector p = ((beta * z).array() - (beta * z).maxCoeff()).exp();
  return p / p.sum();
}

Vector sparsemax(const Vector& z) {
  const Index n = z.size();
  require(n > 0, errc::invalid_argument, "sparsemax: empty vector");

  std::vector<Index> order(static_cast<std::size_t>(n));
  std::iota(order.begin(), order.end(), Index{0});
  std::stable_sort(order.begin(), order.end(),
                   [&](Index a, Index b) { return z[a] > z[b]; });

  // kappa = max{k : 1 + k*z_(k) > sum_{j<=k} z_(j)}
  double cumsum = 0.0;
  double support_sum = 0.0;
  Index kappa = 0;
  for (Index k = 0; k < n; ++k) {
    const double zk = z[order[static_cast<std::size_t>(k)]];
    cumsum += zk;
    if (1.0 + static_cast<double>(k + 1) * zk > cumsum) {
      kappa = k + 1;
      support_sum = cumsum;
    }
  }
  const double tau = (support_sum - 1.0) / static_cast<double>(kappa);
  return (z.array() - tau).max(0.0);
}

Vector entmax(double alpha, double beta, const Vector& z, double tol, int max_iter) {
  const Index n = z.size();
  require(n > 0, errc::invalid_argument, "entmax: empty vector");
  require(alpha > 1.0 && alpha <= 2.0, errc::alpha_out_of_range,
          "entmax: alpha must lie in (1,2]");
  require(beta > 0.0, errc::invalid_argument, "entmax: beta must be positive");

  const double inv = 1.0 / (alpha - 1.0);
  const Vector y = (alpha - 1.0) * beta * z;

  auto mass = [&](double tau) {
    double s = 0.0;
    for (Index i = 0; i < n; ++i) {
      const double w = y[i] - tau;
      if (w > 0.0) s += std::pow(w, inv);
    }
    return s;
  };

  // sum(p) is continuous and strictly decreasing in tau on this bracket,
  // with mass(lo) >= 1 and mass(hi) = 0.
  double lo = y.minCoeff() - 1.0;
  double hi = y.maxCoeff();
  double tau = 0.5 * (lo + hi);
  double s = mass(tau);
  for (int it = 0; it < max_iter && std::abs(s - 1.0) > tol; ++it) {
    (s > 1.0 ? lo : hi) = tau;
    const double next = 0.5 * (lo + hi);
    if (next == tau) break;  // bracket exhausted at double resolution
    tau = next;
    s = mass(tau);
  }
  require(std::abs(s - 1.0) <= tol, errc::bisection_failure,
          "entmax: bisection did not reach tolerance");

  Vector p(n);
  for (Index i = 0; i < n; ++i) {
    const double w = y[i] - tau;
    p[i] = w > 0.0 ? std::pow(w, inv) : 0.0;
  }
  return p / p.sum();
}

double tsallis_entropy(double alpha, const Vector& p) {
  require(p.size() > 0, errc::invalid_argument, "tsallis_entropy: empty vector");
  require(alpha >= 1.0 && alpha <= 2.0, errc::alpha_out_of_range,
          "tsallis_entropy: alpha must lie in [1,2]");
  if (alpha == 1.0) {
    double h = 0.0;
    for (Index i = 0; i < p.size(); ++i)
      if (p[i] > 0.0) h -= p[i] * std::log(p[i]);
    return h;
  }
  double s = 0.0;
  for (Index i = 0; i < p.size(); ++i) s += p[i] - std::pow(p[i], alpha);
  return s / (alpha * (alpha - 1.0));
}

double psi_star(double alpha, double beta, const Vector& z, double bisection_tol,
                int bisection_max_iter) {
  SeparationFn sep{alpha, bisection_tol, bisection_max_iter};
  const Vector p = sep(beta, z);
  return p.dot(z) + tsallis_entropy(alpha, p) / beta;
}

Vector SeparationFn::operator()(double beta, const Vector& z) const {
  require(alpha >= 1.0 && alpha <= 2.0, errc::alpha_out_of_range,
          "SeparationFn: alpha must lie in [1,2]");
  if (alpha == 1.0) return softmax(beta, z);
  if (alpha == 2.0) return sparsemax(beta * z);
  return entmax(alpha, beta, z, bisection_tol, bisection_max_iter);
}

}  // namespace uhop

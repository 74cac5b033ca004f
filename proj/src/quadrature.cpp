#include "quadrature.hpp"

#include <Eigen/Dense>

#include <cmath>
#include <map>
#include <mutex>
#include <stdexcept>

namespace rdloc {

namespace {

struct Nodes1D {
  std::vector<double> x; // on [-1,1]
  std::vector<double> w;
};

// Golub-Welsch for the Jacobi weight (1-x)^alpha (1+x)^beta on [-1,1].
Nodes1D gauss_jacobi(int n, double alpha, double beta) {
  if (n < 1) throw std::invalid_argument("gauss_jacobi: n must be >= 1");
  Eigen::MatrixXd J = Eigen::MatrixXd::Zero(n, n);
  const double ab = alpha + beta;
  auto diag = [&](int k) -> double {
    if (k == 0) return (beta - alpha) / (ab + 2.0);
    const double s = 2.0 * k + ab;
    return (beta * beta - alpha * alpha) / (s * (s + 2.0));
  };
  auto offdiag_sq = [&](int k) -> double {
    const double s = 2.0 * k + ab;
    return 4.0 * k * (k + alpha) * (k + beta) * (k + ab) /
           (s * s * (s + 1.0) * (s - 1.0));
  };
  for (int k = 0; k < n; ++k) {
    J(k, k) = diag(k);
    if (k + 1 < n) {
      const double b = std::sqrt(offdiag_sq(k + 1));
      J(k, k + 1) = b;
      J(k + 1, k) = b;
    }
  }
  // total mass 2^(a+b+1) B(a+1, b+1)
  const double mu0 = std::pow(2.0, ab + 1.0) *
                     std::exp(std::lgamma(alpha + 1.0) + std::lgamma(beta + 1.0) -
                              std::lgamma(ab + 2.0));
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(J);
  Nodes1D out;
  out.x.resize(n);
  out.w.resize(n);
  for (int i = 0; i < n; ++i) {
    out.x[i] = es.eigenvalues()(i);
    const double v0 = es.eigenvectors()(0, i);
    out.w[i] = mu0 * v0 * v0;
  }
  return out;
}

QuadratureRule make_conical(int exactness) {
  const int n = exactness / 2 + 1; // 2n-1 >= exactness
  const Nodes1D leg = gauss_jacobi(n, 0.0, 0.0);
  const Nodes1D jac = gauss_jacobi(n, 1.0, 0.0);
  QuadratureRule rule;
  rule.exactness = exactness;
  rule.points.reserve(n * n);
  rule.weights.reserve(n * n);
  for (int j = 0; j < n; ++j) {
    const double q = 0.5 * (1.0 + jac.x[j]);
    const double wq = 0.25 * jac.w[j]; // carries the (1-q) factor
    for (int i = 0; i < n; ++i) {
      const double p = 0.5 * (1.0 + leg.x[i]);
      const double wp = 0.5 * leg.w[i];
      rule.points.push_back({p * (1.0 - q), q});
      rule.weights.push_back(wp * wq);
    }
  }
  return rule;
}

} // namespace

const QuadratureRule& QuadratureRule::reference(int exactness) {
  if (exactness < 0) exactness = 0;
  static std::map<int, QuadratureRule> cache;
  static std::mutex mtx;
  std::lock_guard<std::mutex> lock(mtx);
  auto it = cache.find(exactness);
  if (it == cache.end()) it = cache.emplace(exactness, make_conical(exactness)).first;
  return it->second;
}

QuadratureRule QuadratureRule::symmetric(int exactness) {
  QuadratureRule r;
  auto orbit3 = [&](double a, double w) {
    r.points.push_back({a, a});
    r.points.push_back({1.0 - 2.0 * a, a});
    r.points.push_back({a, 1.0 - 2.0 * a});
    r.weights.insert(r.weights.end(), 3, w);
  };
  if (exactness <= 1) {
    r.exactness = 1;
    r.points.push_back({1.0 / 3.0, 1.0 / 3.0});
    r.weights.push_back(0.5);
  } else if (exactness == 2) {
    r.exactness = 2;
    orbit3(1.0 / 6.0, 1.0 / 6.0);
  } else if (exactness == 3) {
    r.exactness = 3;
    r.points.push_back({1.0 / 3.0, 1.0 / 3.0});
    r.weights.push_back(-27.0 / 96.0);
    orbit3(1.0 / 5.0, 25.0 / 96.0);
  } else if (exactness <= 5) {
    r.exactness = 5;
    const double s = std::sqrt(15.0);
    r.points.push_back({1.0 / 3.0, 1.0 / 3.0});
    r.weights.push_back(9.0 / 80.0);
    orbit3((6.0 + s) / 21.0, (155.0 + s) / 2400.0);
    orbit3((6.0 - s) / 21.0, (155.0 - s) / 2400.0);
  } else {
    throw std::invalid_argument("QuadratureRule::symmetric: exactness > 5 not tabulated");
  }
  return r;
}

const SegmentRule& SegmentRule::reference(int npoints) {
  if (npoints < 1) npoints = 1;
  static std::map<int, SegmentRule> cache;
  static std::mutex mtx;
  std::lock_guard<std::mutex> lock(mtx);
  auto it = cache.find(npoints);
  if (it == cache.end()) {
    const Nodes1D leg = gauss_jacobi(npoints, 0.0, 0.0);
    SegmentRule r;
    r.points.resize(npoints);
    r.weights.resize(npoints);
    for (int i = 0; i < npoints; ++i) {
      r.points[i] = 0.5 * (1.0 + leg.x[i]);
      r.weights[i] = 0.5 * leg.w[i];
    }
    it = cache.emplace(npoints, std::move(r)).first;
  }
  return it->second;
}

} // namespace rdloc

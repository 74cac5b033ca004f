#include "integrate.hpp"

#include "error.hpp"
#include "quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <functional>

namespace rdloc {

namespace {

constexpr double kRelTol = 1e-10;
constexpr int kMaxDepth = 10;

// pointwise target evaluator; discrete targets bind one to each fine leaf to
// avoid point location in inner loops
struct PointEval {
  std::function<void(const Vec2&, double&, Vec2&)> fn;
};

PointEval analytic_eval(const TargetFunction& u) {
  return {[&u](const Vec2& p, double& val, Vec2& grad) {
    val = u.value(p);
    grad = u.gradient(p);
  }};
}

PointEval fine_leaf_eval(const TargetFunction& u, int fine_leaf) {
  const FeSpace& space = u.space();
  const ReferenceBasis& basis = ReferenceBasis::get(space.degree());
  const AffineMap map(space.mesh().triangle(fine_leaf));
  const std::vector<int>& dofs = space.element_dofs(fine_leaf);
  const Eigen::VectorXd& c = u.coeffs();
  const int n = basis.size();
  return {[&basis, map, dofs, &c, n](const Vec2& p, double& val, Vec2& grad) {
    const Vec2 r = map.to_reference(p);
    std::vector<double> vals(n);
    std::vector<Vec2> grads(n);
    basis.eval(r, vals.data());
    basis.eval_grad(r, grads.data());
    val = 0.0;
    grad = {0.0, 0.0};
    for (int z = 0; z < n; ++z) {
      val += c[dofs[z]] * vals[z];
      const Vec2 g = map.push_gradient(grads[z]);
      grad.x += c[dofs[z]] * g.x;
      grad.y += c[dofs[z]] * g.y;
    }
  }};
}

// integrand components: [u phi_i (n), grad u . grad phi_i (n), u^2, |grad u|^2, u]
class TriIntegrand {
public:
  TriIntegrand(const Triangle& outer, int degree, const PointEval& eval)
      : basis_(ReferenceBasis::get(degree)), map_(outer), eval_(eval), n_(basis_.size()) {}

  int dim() const { return 2 * n_ + 3; }

  void operator()(const Vec2& p, double* out) const {
    double uval;
    Vec2 ugrad;
    eval_.fn(p, uval, ugrad);
    const Vec2 r = map_.to_reference(p);
    std::vector<double> vals(n_);
    std::vector<Vec2> grads(n_);
    basis_.eval(r, vals.data());
    basis_.eval_grad(r, grads.data());
    for (int i = 0; i < n_; ++i) {
      const Vec2 g = map_.push_gradient(grads[i]);
      out[i] = uval * vals[i];
      out[n_ + i] = ugrad.x * g.x + ugrad.y * g.y;
    }
    out[2 * n_] = uval * uval;
    out[2 * n_ + 1] = dot(ugrad, ugrad);
    out[2 * n_ + 2] = uval;
  }

private:
  const ReferenceBasis& basis_;
  AffineMap map_;
  const PointEval& eval_;
  int n_;
};

template <typename Fn>
void rule_integrate(const Triangle& t, const QuadratureRule& rule, const Fn& f, int dim,
                    double* acc) {
  const AffineMap map(t);
  const double jac = map.det_abs;
  std::vector<double> buf(dim);
  for (std::size_t k = 0; k < rule.points.size(); ++k) {
    const Vec2 p = map.to_physical(rule.points[k]);
    f(p, buf.data());
    const double w = rule.weights[k] * jac;
    for (int i = 0; i < dim; ++i) acc[i] += w * buf[i];
  }
}

std::array<Triangle, 4> split4(const Triangle& t) {
  const Vec2 m01 = midpoint(t[0], t[1]), m12 = midpoint(t[1], t[2]), m20 = midpoint(t[2], t[0]);
  return {Triangle{t[0], m01, m20}, Triangle{m01, t[1], m12}, Triangle{m20, m12, t[2]},
          Triangle{m01, m12, m20}};
}

template <typename Fn>
void adaptive_recurse(const Triangle& t, const Fn& f, int dim, const QuadratureRule& rule,
                      const std::vector<double>& tol_abs, double area_frac, int depth,
                      std::vector<double>& acc) {
  std::vector<double> coarse(dim, 0.0), fine(dim, 0.0);
  rule_integrate(t, rule, f, dim, coarse.data());
  const auto kids = split4(t);
  for (const Triangle& kid : kids) rule_integrate(kid, rule, f, dim, fine.data());

  bool ok = true;
  for (int i = 0; i < dim && ok; ++i)
    if (std::abs(fine[i] - coarse[i]) > tol_abs[i] * area_frac) ok = false;

  if (ok || depth >= kMaxDepth) {
    for (int i = 0; i < dim; ++i) acc[i] += fine[i];
    return;
  }
  for (const Triangle& kid : kids)
    adaptive_recurse(kid, f, dim, rule, tol_abs, 0.25 * area_frac, depth + 1, acc);
}

template <typename Fn>
void integrate_piece(const Triangle& piece, const Fn& f, int dim, int piece_degree, int basis_degree,
                     std::vector<double>& acc) {
  if (piece_degree >= 0) {
    const int exactness = 2 * std::max(piece_degree, basis_degree) + 2;
    rule_integrate(piece, QuadratureRule::reference(exactness), f, dim, acc.data());
    return;
  }
  const QuadratureRule& rule = QuadratureRule::reference(2 * basis_degree + 6);
  // calibrate absolute budgets from a level-1 pass over the whole piece
  std::vector<double> probe(dim, 0.0);
  for (const Triangle& kid : split4(piece)) rule_integrate(kid, rule, f, dim, probe.data());
  std::vector<double> tol_abs(dim);
  for (int i = 0; i < dim; ++i) tol_abs[i] = kRelTol * std::max(std::abs(probe[i]), 1e-30) * 4.0;
  adaptive_recurse(piece, f, dim, rule, tol_abs, 1.0, 0, acc);
}

Polygon clip_to_triangle(const Triangle& subject, const Triangle& window, double snap_tol) {
  Polygon poly{subject[0], subject[1], subject[2]};
  for (int e = 0; e < 3 && poly.size() >= 3; ++e) {
    const Vec2 a = window[e], b = window[(e + 1) % 3];
    const Vec2 d = b - a;
    // interior of a ccw triangle is on the left of each directed edge
    Line line{{-d.y, d.x}, -d.y * a.x + d.x * a.y};
    poly = clip_halfplane(poly, line, +1, snap_tol);
  }
  return poly;
}

template <typename Body>
void for_each_piece(const Triangle& tri, int host, const TargetFunction& u, const Body& body) {
  const double diam = diameter(tri);
  const double snap = 1e-12 * std::max(diam, 1e-30);

  if (!u.is_discrete()) {
    const PointEval eval = analytic_eval(u);
    if (u.kinks().empty()) {
      body(tri, eval, u.piece_degree());
      return;
    }
    for (const Triangle& piece : split_by_lines(tri, u.kinks(), snap))
      body(piece, eval, u.piece_degree());
    return;
  }

  const Mesh& fine = u.space().mesh();
  if (host < 0 || host >= fine.element_count())
    throw Error(ErrorCode::Internal, "discrete-target integration without a valid host element");
  for (int leaf : fine.descendant_leaves(host)) {
    const Polygon poly = clip_to_triangle(fine.triangle(leaf), tri, snap);
    if (poly.size() < 3) continue;
    const PointEval eval = fine_leaf_eval(u, leaf);
    const double scale_sq = area(tri);
    for (std::size_t i = 1; i + 1 < poly.size(); ++i) {
      Triangle piece{poly[0], poly[i], poly[i + 1]};
      if (area(piece) <= 1e-14 * scale_sq) continue;
      body(piece, eval, u.space().degree());
    }
  }
}

} // namespace

TriIntegrals integrate_target(const Triangle& tri, int host, int degree, const TargetFunction& u) {
  const int n = ReferenceBasis::get(degree).size();
  const int dim = 2 * n + 3;
  std::vector<double> acc(dim, 0.0);

  for_each_piece(tri, host, u, [&](const Triangle& piece, const PointEval& eval, int piece_degree) {
    const TriIntegrand f(tri, degree, eval);
    integrate_piece(piece, f, dim, piece_degree, degree, acc);
  });

  TriIntegrals out;
  out.u_phi = Eigen::Map<Eigen::VectorXd>(acc.data(), n);
  out.gu_gphi = Eigen::Map<Eigen::VectorXd>(acc.data() + n, n);
  out.u_sq = acc[2 * n];
  out.gu_sq = acc[2 * n + 1];
  out.u_int = acc[2 * n + 2];
  return out;
}

Eigen::VectorXd dual_node_integrals(const Triangle& tri, int host, int degree,
                                    const TargetFunction& u) {
  const TriIntegrals ints = integrate_target(tri, host, degree, u);
  const DualBasis& dual = DualBasis::get(degree);
  const double jac = 2.0 * area(tri);
  return dual.coeffs * ints.u_phi / jac;
}

SegIntegrals integrate_target_on_edge(const Vec2& a, const Vec2& b, int degree,
                                      const TargetFunction& u) {
  const SegmentBasis& seg = SegmentBasis::get(degree);
  const int n = seg.size();
  const double len = norm(b - a);
  SegIntegrals out;
  out.u_phi = Eigen::VectorXd::Zero(n);

  // split the parameter range at declared kink crossings
  std::vector<double> cuts{0.0, 1.0};
  if (!u.is_discrete()) {
    for (const Line& line : u.kinks()) {
      const double denom = dot(line.normal, b - a);
      if (std::abs(denom) < 1e-300) continue;
      const double t = (line.offset - dot(line.normal, a)) / denom;
      if (t > 1e-12 && t < 1.0 - 1e-12) cuts.push_back(t);
    }
    std::sort(cuts.begin(), cuts.end());
  }

  const int piece_degree = u.is_discrete() ? -1 : u.piece_degree();
  std::vector<double> vals(n);

  std::function<void(double, double, int)> do_piece = [&](double t0, double t1, int depth) {
    auto with_rule = [&](int npts, double lo, double hi, Eigen::VectorXd& phi_acc, double& sq_acc) {
      const SegmentRule& rule = SegmentRule::reference(npts);
      for (std::size_t k = 0; k < rule.points.size(); ++k) {
        const double t = lo + (hi - lo) * rule.points[k];
        const Vec2 p = a + t * (b - a);
        const double w = rule.weights[k] * (hi - lo) * len;
        const double uval = u.value(p);
        seg.eval(t, vals.data());
        for (int i = 0; i < n; ++i) phi_acc[i] += w * uval * vals[i];
        sq_acc += w * uval * uval;
      }
    };
    if (piece_degree >= 0) {
      const int exact = 2 * std::max(piece_degree, degree) + 2;
      with_rule(exact / 2 + 1, t0, t1, out.u_phi, out.u_sq);
      return;
    }
    // adaptive halving
    Eigen::VectorXd phi0 = Eigen::VectorXd::Zero(n), phi1 = Eigen::VectorXd::Zero(n);
    double sq0 = 0.0, sq1 = 0.0;
    with_rule(degree + 4, t0, t1, phi0, sq0);
    const double tm = 0.5 * (t0 + t1);
    with_rule(degree + 4, t0, tm, phi1, sq1);
    with_rule(degree + 4, tm, t1, phi1, sq1);
    const double scale = 1e-30 + phi1.cwiseAbs().maxCoeff() + std::abs(sq1);
    if ((phi1 - phi0).cwiseAbs().maxCoeff() + std::abs(sq1 - sq0) <= kRelTol * scale ||
        depth >= 12) {
      out.u_phi += phi1;
      out.u_sq += sq1;
      return;
    }
    do_piece(t0, tm, depth + 1);
    do_piece(tm, t1, depth + 1);
  };

  for (std::size_t c = 0; c + 1 < cuts.size(); ++c) do_piece(cuts[c], cuts[c + 1], 0);
  return out;
}

} // namespace rdloc

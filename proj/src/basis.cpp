#include "basis.hpp"

#include "quadrature.hpp"

#include <map>
#include <mutex>
#include <stdexcept>

namespace rdloc {

namespace {

ReferenceBasis make_reference_basis(int degree) {
  if (degree < 1 || degree > 3)
    throw std::invalid_argument("ReferenceBasis: degree must be in {1,2,3}");
  ReferenceBasis b;
  b.degree = degree;
  const int l = degree;
  for (int j = 0; j <= l; ++j) {
    for (int i = 0; i + j <= l; ++i) {
      b.nodes.push_back({double(i) / l, double(j) / l});
      const int l0 = l - i - j, l1 = i, l2 = j;
      const int zeros = (l0 == 0) + (l1 == 0) + (l2 == 0);
      if (zeros == 2) {
        b.node_kind.push_back(NodeKind::Vertex);
        b.node_edge.push_back(-1);
      } else if (zeros == 1) {
        b.node_kind.push_back(NodeKind::Edge);
        b.node_edge.push_back(l0 == 0 ? 0 : (l1 == 0 ? 1 : 2));
      } else {
        b.node_kind.push_back(NodeKind::Interior);
        b.node_edge.push_back(-1);
      }
    }
  }
  const int n = b.size();
  for (int px = 0; px <= l; ++px)
    for (int py = 0; py + px <= l; ++py) b.monomials.emplace_back(px, py);

  Eigen::MatrixXd V(n, n);
  for (int z = 0; z < n; ++z)
    for (int m = 0; m < n; ++m)
      V(z, m) = std::pow(b.nodes[z].x, b.monomials[m].first) *
                std::pow(b.nodes[z].y, b.monomials[m].second);
  b.coeffs = V.fullPivLu().inverse().transpose();

  // edge i runs from vertex (i+1)%3 to (i+2)%3; reference vertices are
  // V0=(0,0), V1=(1,0), V2=(0,1)
  const std::array<Vec2, 3> verts{Vec2{0, 0}, Vec2{1, 0}, Vec2{0, 1}};
  for (int e = 0; e < 3; ++e) {
    const Vec2 a = verts[(e + 1) % 3];
    const Vec2 d = verts[(e + 2) % 3] - a;
    std::vector<std::pair<double, int>> on_edge;
    for (int z = 0; z < n; ++z) {
      const Vec2 r = b.nodes[z] - a;
      const double t = dot(r, d) / dot(d, d);
      if (std::abs(cross(r, d)) < 1e-12 && t > -1e-12 && t < 1.0 + 1e-12)
        on_edge.emplace_back(t, z);
    }
    std::sort(on_edge.begin(), on_edge.end());
    for (auto& [t, z] : on_edge) b.edge_node_ids[e].push_back(z);
  }
  return b;
}

template <typename Maker>
const auto& cached(int key, Maker make) {
  using T = decltype(make(key));
  static std::map<int, T> cache;
  static std::mutex mtx;
  std::lock_guard<std::mutex> lock(mtx);
  auto it = cache.find(key);
  if (it == cache.end()) it = cache.emplace(key, make(key)).first;
  return it->second;
}

struct ReferenceMoments {
  Eigen::MatrixXd mass;
  Eigen::MatrixXd gxx, gxy, gyy; // gradient component moments
};

ReferenceMoments make_moments(int degree) {
  const ReferenceBasis& b = ReferenceBasis::get(degree);
  const int n = b.size();
  const QuadratureRule& q = QuadratureRule::reference(2 * degree + 2);
  ReferenceMoments m;
  m.mass = Eigen::MatrixXd::Zero(n, n);
  m.gxx = Eigen::MatrixXd::Zero(n, n);
  m.gxy = Eigen::MatrixXd::Zero(n, n);
  m.gyy = Eigen::MatrixXd::Zero(n, n);
  std::vector<double> vals(n);
  std::vector<Vec2> grads(n);
  for (std::size_t k = 0; k < q.points.size(); ++k) {
    b.eval(q.points[k], vals.data());
    b.eval_grad(q.points[k], grads.data());
    const double w = q.weights[k];
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) {
        m.mass(i, j) += w * vals[i] * vals[j];
        m.gxx(i, j) += w * grads[i].x * grads[j].x;
        m.gxy(i, j) += w * grads[i].x * grads[j].y;
        m.gyy(i, j) += w * grads[i].y * grads[j].y;
      }
  }
  return m;
}

const ReferenceMoments& moments(int degree) {
  return cached(degree, make_moments);
}

SegmentBasis make_segment_basis(int degree) {
  SegmentBasis s;
  s.degree = degree;
  const int n = degree + 1;
  for (int i = 0; i < n; ++i) s.nodes.push_back(double(i) / degree);
  Eigen::MatrixXd V(n, n);
  for (int i = 0; i < n; ++i)
    for (int k = 0; k < n; ++k) V(i, k) = std::pow(s.nodes[i], k);
  s.coeffs = V.fullPivLu().inverse().transpose();

  const SegmentRule& q = SegmentRule::reference(degree + 1);
  s.mass = Eigen::MatrixXd::Zero(n, n);
  std::vector<double> vals(n);
  for (std::size_t k = 0; k < q.points.size(); ++k) {
    s.eval(q.points[k], vals.data());
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) s.mass(i, j) += q.weights[k] * vals[i] * vals[j];
  }
  s.dual_coeffs = s.mass.fullPivLu().inverse();
  return s;
}

} // namespace

const ReferenceBasis& ReferenceBasis::get(int degree) {
  return cached(degree, make_reference_basis);
}

void ReferenceBasis::eval(const Vec2& p, double* values) const {
  const int n = size();
  std::vector<double> mono(n);
  for (int m = 0; m < n; ++m)
    mono[m] = std::pow(p.x, monomials[m].first) * std::pow(p.y, monomials[m].second);
  for (int i = 0; i < n; ++i) {
    double v = 0.0;
    for (int m = 0; m < n; ++m) v += coeffs(i, m) * mono[m];
    values[i] = v;
  }
}

void ReferenceBasis::eval_grad(const Vec2& p, Vec2* grads) const {
  const int n = size();
  std::vector<double> dx(n), dy(n);
  for (int m = 0; m < n; ++m) {
    const int px = monomials[m].first, py = monomials[m].second;
    dx[m] = px == 0 ? 0.0 : px * std::pow(p.x, px - 1) * std::pow(p.y, py);
    dy[m] = py == 0 ? 0.0 : py * std::pow(p.x, px) * std::pow(p.y, py - 1);
  }
  for (int i = 0; i < n; ++i) {
    Vec2 g{0.0, 0.0};
    for (int m = 0; m < n; ++m) {
      g.x += coeffs(i, m) * dx[m];
      g.y += coeffs(i, m) * dy[m];
    }
    grads[i] = g;
  }
}

const DualBasis& DualBasis::get(int degree) {
  return cached(degree, [](int d) {
    DualBasis db;
    db.coeffs = moments(d).mass.fullPivLu().inverse();
    return db;
  });
}

const SegmentBasis& SegmentBasis::get(int degree) {
  return cached(degree, make_segment_basis);
}

void SegmentBasis::eval(double t, double* values) const {
  const int n = size();
  std::vector<double> mono(n);
  mono[0] = 1.0;
  for (int k = 1; k < n; ++k) mono[k] = mono[k - 1] * t;
  for (int i = 0; i < n; ++i) {
    double v = 0.0;
    for (int k = 0; k < n; ++k) v += coeffs(i, k) * mono[k];
    values[i] = v;
  }
}

AffineMap::AffineMap(const Triangle& tri) : origin(tri[0]) {
  B << tri[1].x - tri[0].x, tri[2].x - tri[0].x, tri[1].y - tri[0].y, tri[2].y - tri[0].y;
  const double det = B.determinant();
  det_abs = std::abs(det);
  Binv << B(1, 1) / det, -B(0, 1) / det, -B(1, 0) / det, B(0, 0) / det;
}

Vec2 AffineMap::to_physical(const Vec2& r) const {
  return {origin.x + B(0, 0) * r.x + B(0, 1) * r.y, origin.y + B(1, 0) * r.x + B(1, 1) * r.y};
}

Vec2 AffineMap::to_reference(const Vec2& p) const {
  const Vec2 d = p - origin;
  return {Binv(0, 0) * d.x + Binv(0, 1) * d.y, Binv(1, 0) * d.x + Binv(1, 1) * d.y};
}

Vec2 AffineMap::push_gradient(const Vec2& g) const {
  // B^{-T} g
  return {Binv(0, 0) * g.x + Binv(1, 0) * g.y, Binv(0, 1) * g.x + Binv(1, 1) * g.y};
}

LocalMatrices assemble_local(const Triangle& tri, int degree) {
  const double a = area(tri);
  const double diam = diameter(tri);
  if (a < 1e-14 * diam * diam)
    throw std::domain_error("assemble_local: degenerate element geometry");

  const ReferenceBasis& basis = ReferenceBasis::get(degree);
  const ReferenceMoments& mom = moments(degree);
  const AffineMap map(tri);
  const int n = basis.size();

  LocalMatrices lm;
  lm.mass = map.det_abs * mom.mass;
  const Eigen::Matrix2d C = map.Binv * map.Binv.transpose();
  lm.stiffness = map.det_abs * (C(0, 0) * mom.gxx + C(0, 1) * (mom.gxy + mom.gxy.transpose()) +
                                C(1, 1) * mom.gyy);

  const SegmentBasis& seg = SegmentBasis::get(degree);
  lm.boundary_mass = Eigen::MatrixXd::Zero(n, n);
  for (int e = 0; e < 3; ++e) {
    lm.edge_mass[e] = Eigen::MatrixXd::Zero(n, n);
    const Vec2 pa = tri[(e + 1) % 3], pb = tri[(e + 2) % 3];
    const double len = norm(pb - pa);
    const auto& ids = basis.edge_node_ids[e];
    for (std::size_t i = 0; i < ids.size(); ++i)
      for (std::size_t j = 0; j < ids.size(); ++j)
        lm.edge_mass[e](ids[i], ids[j]) = len * seg.mass(i, j);
    lm.boundary_mass += lm.edge_mass[e];
  }
  return lm;
}

} // namespace rdloc

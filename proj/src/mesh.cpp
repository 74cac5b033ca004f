#include "mesh.hpp"

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <functional>
#include <set>
#include <sstream>

namespace rdloc {

namespace {

std::pair<int, int> edge_key(int a, int b) { return {std::min(a, b), std::max(a, b)}; }

void append_num(std::string& out, double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  out += buf;
}

} // namespace

double Patch::total_area() const {
  double a = 0.0;
  for (const auto& t : tris) a += area(t.xy);
  return a;
}

bool Patch::touches_boundary() const {
  for (const auto& t : tris)
    for (int e = 0; e < 3; ++e)
      if (t.edge_on_boundary[e]) return true;
  return false;
}

Mesh Mesh::from_root(std::vector<Vec2> vertices, const std::vector<std::array<int, 4>>& tris) {
  Mesh m;
  m.vertices_ = std::move(vertices);
  m.root_vertices_ = static_cast<int>(m.vertices_.size());
  if (m.root_vertices_ < 3 || tris.empty())
    throw Error(ErrorCode::InvalidArgument, "mesh root needs >= 3 vertices and >= 1 element");

  double lox = m.vertices_[0].x, hix = lox, loy = m.vertices_[0].y, hiy = loy;
  for (const Vec2& p : m.vertices_) {
    lox = std::min(lox, p.x);
    hix = std::max(hix, p.x);
    loy = std::min(loy, p.y);
    hiy = std::max(hiy, p.y);
  }
  m.root_diameter_ = std::max(1e-300, norm({hix - lox, hiy - loy}));

  for (const auto& t : tris) {
    Element e;
    for (int i = 0; i < 3; ++i) {
      if (t[i] < 0 || t[i] >= m.root_vertices_)
        throw Error(ErrorCode::InvalidArgument, "mesh element references invalid vertex");
      e.v[i] = t[i];
    }
    if (e.v[0] == e.v[1] || e.v[1] == e.v[2] || e.v[0] == e.v[2])
      throw Error(ErrorCode::InvalidArgument, "mesh element has repeated vertices");
    if (t[3] < 0 || t[3] > 2)
      throw Error(ErrorCode::InvalidArgument, "refinement-edge index out of {0,1,2}");
    e.refine_edge = t[3];
    if (signed_area(m.vertices_[e.v[0]], m.vertices_[e.v[1]], m.vertices_[e.v[2]]) <= 0.0)
      throw Error(ErrorCode::InvalidArgument, "mesh element not positively oriented");
    m.elements_.push_back(e);
  }
  m.root_elements_ = static_cast<int>(m.elements_.size());

  for (int id = 0; id < m.root_elements_; ++id) {
    const Element& e = m.elements_[id];
    for (int j = 0; j < 3; ++j) {
      auto& list = m.edge_leaves_[edge_key(e.v[(j + 1) % 3], e.v[(j + 2) % 3])];
      list.push_back(id);
      if (list.size() > 2)
        throw Error(ErrorCode::InvalidArgument, "root edge shared by more than 2 elements");
    }
  }

  // no root vertex may sit strictly inside another element's edge
  const double tol = m.geom_tol();
  for (int w = 0; w < m.root_vertices_; ++w) {
    const Vec2& p = m.vertices_[w];
    for (const auto& [key, list] : m.edge_leaves_) {
      if (key.first == w || key.second == w) continue;
      const Vec2& a = m.vertices_[key.first];
      const Vec2& b = m.vertices_[key.second];
      const Vec2 d = b - a;
      const double t = dot(p - a, d) / dot(d, d);
      if (t > tol && t < 1.0 - tol && std::abs(cross(p - a, d)) / norm(d) < tol)
        throw Error(ErrorCode::InvalidArgument, "root mesh has a hanging vertex");
    }
  }

  m.rebuild_derived();
  return m;
}

Mesh Mesh::unit_square() {
  return from_root({{0, 0}, {1, 0}, {1, 1}, {0, 1}}, {{0, 1, 2, 1}, {0, 2, 3, 2}});
}

Mesh Mesh::counterexample_domain() {
  std::vector<Vec2> verts;
  auto vid = [](int i, int j) { return j * 5 + i; };
  for (int j = 0; j <= 2; ++j)
    for (int i = 0; i <= 4; ++i) verts.push_back({-2.0 + i, -1.0 + j});
  std::vector<std::array<int, 4>> tris;
  for (int j = 0; j < 2; ++j)
    for (int i = 0; i < 4; ++i) {
      const int a = vid(i, j), b = vid(i + 1, j), c = vid(i + 1, j + 1), d = vid(i, j + 1);
      tris.push_back({a, b, c, 1});
      tris.push_back({a, c, d, 2});
    }
  return from_root(std::move(verts), tris);
}

const Element& Mesh::element(int id) const {
  if (id < 0 || id >= element_count())
    throw Error(ErrorCode::InvalidArgument, "unknown element id " + std::to_string(id));
  return elements_[id];
}

Triangle Mesh::triangle(int id) const {
  const Element& e = element(id);
  return {vertices_[e.v[0]], vertices_[e.v[1]], vertices_[e.v[2]]};
}

const Mesh::Face& Mesh::face(int face_id) const {
  if (face_id < 0 || face_id >= face_count())
    throw Error(ErrorCode::InvalidArgument, "unknown face id " + std::to_string(face_id));
  return faces_[face_id];
}

int Mesh::find_face(int va, int vb) const {
  const auto key = edge_key(va, vb);
  auto it = std::lower_bound(faces_.begin(), faces_.end(), key, [](const Face& f, const std::pair<int, int>& k) {
    return std::make_pair(f.v[0], f.v[1]) < k;
  });
  if (it == faces_.end() || it->v[0] != key.first || it->v[1] != key.second) return -1;
  return static_cast<int>(it - faces_.begin());
}

std::array<int, 3> Mesh::element_faces(int id) const {
  const Element& e = element(id);
  std::array<int, 3> out{-1, -1, -1};
  for (int j = 0; j < 3; ++j) out[j] = find_face(e.v[(j + 1) % 3], e.v[(j + 2) % 3]);
  std::sort(out.begin(), out.end());
  return out;
}

int Mesh::midpoint_vertex(int a, int b) {
  const auto key = edge_key(a, b);
  auto it = midpoints_.find(key);
  if (it != midpoints_.end()) return it->second;
  const int id = static_cast<int>(vertices_.size());
  vertices_.push_back(midpoint(vertices_[a], vertices_[b]));
  midpoints_.emplace(key, id);
  return id;
}

void Mesh::split_leaf(int id, int mid_vertex) {
  Element& parent = elements_[id];
  const int r = parent.refine_edge;
  const int A = parent.v[r], B = parent.v[(r + 1) % 3], C = parent.v[(r + 2) % 3];

  for (int j = 0; j < 3; ++j) {
    auto& list = edge_leaves_[edge_key(parent.v[(j + 1) % 3], parent.v[(j + 2) % 3])];
    list.erase(std::remove(list.begin(), list.end(), id), list.end());
  }

  Element c1, c2;
  c1.v = {A, B, mid_vertex};
  c1.refine_edge = 2; // edge opposite the new vertex
  c2.v = {A, mid_vertex, C};
  c2.refine_edge = 1;
  c1.parent = c2.parent = id;
  c1.depth = c2.depth = parent.depth + 1;

  const int id1 = static_cast<int>(elements_.size());
  elements_.push_back(c1);
  const int id2 = static_cast<int>(elements_.size());
  elements_.push_back(c2);
  elements_[id].child = {id1, id2};

  for (int cid : {id1, id2}) {
    const Element& e = elements_[cid];
    for (int j = 0; j < 3; ++j)
      edge_leaves_[edge_key(e.v[(j + 1) % 3], e.v[(j + 2) % 3])].push_back(cid);
  }
}

int Mesh::leaf_across_edge(int a, int b, int self) const {
  auto it = edge_leaves_.find(edge_key(a, b));
  if (it == edge_leaves_.end()) return -1;
  for (int id : it->second)
    if (id != self) return id;
  return -1;
}

void Mesh::bisect_with_closure(int id, int& cascade_budget) {
  if (--cascade_budget < 0)
    throw Error(ErrorCode::InvalidArgument,
                "bisection closure did not terminate; root tags violate the matching condition");
  const Element& K = elements_[id];
  const int r = K.refine_edge;
  const int a = K.v[(r + 1) % 3], b = K.v[(r + 2) % 3];

  int nb = leaf_across_edge(a, b, id);
  if (nb >= 0) {
    const Element& N = elements_[nb];
    const int nr = N.refine_edge;
    if (edge_key(N.v[(nr + 1) % 3], N.v[(nr + 2) % 3]) != edge_key(a, b)) {
      bisect_with_closure(nb, cascade_budget);
      nb = leaf_across_edge(a, b, id);
      if (nb >= 0) {
        const Element& N2 = elements_[nb];
        const int nr2 = N2.refine_edge;
        if (edge_key(N2.v[(nr2 + 1) % 3], N2.v[(nr2 + 2) % 3]) != edge_key(a, b))
          throw Error(ErrorCode::Internal, "closure produced an incompatible neighbor");
      }
    }
  }

  const int m = midpoint_vertex(a, b);
  split_leaf(id, m);
  if (nb >= 0) split_leaf(nb, m);
}

Mesh Mesh::bisect_conforming(int element_id) const {
  const Element& e = element(element_id); // validates id
  if (!e.is_leaf())
    throw Error(ErrorCode::InvalidArgument,
                "element " + std::to_string(element_id) + " is not a leaf");
  Mesh out = *this;
  out.log_.push_back(element_id);
  int budget = root_elements_ * 64;
  out.bisect_with_closure(element_id, budget);
  out.rebuild_derived();
  return out;
}

Mesh Mesh::uniform_refine(int rounds) const {
  if (rounds < 0) throw Error(ErrorCode::InvalidArgument, "uniform_refine: rounds must be >= 0");
  Mesh out = *this;
  for (int round = 0; round < rounds; ++round) {
    std::vector<int> snapshot;
    for (int id = 0; id < out.element_count(); ++id)
      if (out.elements_[id].is_leaf()) snapshot.push_back(id);
    for (int id : snapshot) {
      if (!out.elements_[id].is_leaf()) continue; // bisected by an earlier closure
      out.log_.push_back(id);
      int budget = root_elements_ * 64;
      out.bisect_with_closure(id, budget);
    }
  }
  out.rebuild_derived();
  return out;
}

void Mesh::rebuild_derived() {
  leaves_.clear();
  for (int id = 0; id < element_count(); ++id)
    if (elements_[id].is_leaf()) leaves_.push_back(id);

  faces_.clear();
  interior_faces_ = 0;
  for (const auto& [key, list] : edge_leaves_) {
    if (list.empty()) continue;
    Face f;
    f.v = {key.first, key.second};
    std::vector<int> inc(list);
    std::sort(inc.begin(), inc.end());
    f.elem[0] = inc[0];
    f.elem[1] = inc.size() > 1 ? inc[1] : -1;
    for (int s = 0; s < 2; ++s) {
      if (f.elem[s] < 0) continue;
      const Element& e = elements_[f.elem[s]];
      for (int j = 0; j < 3; ++j)
        if (edge_key(e.v[(j + 1) % 3], e.v[(j + 2) % 3]) == key) f.local_edge[s] = j;
    }
    if (!f.boundary()) ++interior_faces_;
    faces_.push_back(f);
  }

  boundary_vertex_.assign(vertices_.size(), false);
  for (const Face& f : faces_)
    if (f.boundary()) {
      boundary_vertex_[f.v[0]] = true;
      boundary_vertex_[f.v[1]] = true;
    }
}

PatchTri Mesh::make_patch_tri(int elem_id) const {
  PatchTri t;
  t.xy = triangle(elem_id);
  t.host = elem_id;
  const Element& e = elements_[elem_id];
  for (int j = 0; j < 3; ++j) {
    auto it = edge_leaves_.find(edge_key(e.v[(j + 1) % 3], e.v[(j + 2) % 3]));
    t.edge_on_boundary[j] = it != edge_leaves_.end() && it->second.size() == 1;
    t.vertex_on_boundary[j] = boundary_vertex_[e.v[j]];
  }
  return t;
}

PatchTri Mesh::make_virtual_child(int elem_id, int fa, int fb) const {
  const Element& e = elements_[elem_id];
  const int r = e.refine_edge;
  const int A = e.v[r], B = e.v[(r + 1) % 3], C = e.v[(r + 2) % 3];
  const Vec2 M = midpoint(vertices_[B], vertices_[C]);
  const auto want = edge_key(fa, fb);

  auto parent_edge_on_boundary = [&](int j) {
    auto it = edge_leaves_.find(edge_key(e.v[(j + 1) % 3], e.v[(j + 2) % 3]));
    return it != edge_leaves_.end() && it->second.size() == 1;
  };
  const bool refine_edge_bdy = parent_edge_on_boundary(r);

  PatchTri t;
  t.host = elem_id;
  if (want == edge_key(A, B)) {
    // child (A,B,M); the face is its edge 2
    t.xy = {vertices_[A], vertices_[B], M};
    t.edge_on_boundary = {refine_edge_bdy, false, parent_edge_on_boundary((r + 2) % 3)};
    t.vertex_on_boundary = {boundary_vertex_[A], boundary_vertex_[B], refine_edge_bdy};
  } else if (want == edge_key(A, C)) {
    // child (A,M,C); the face is its edge 1
    t.xy = {vertices_[A], M, vertices_[C]};
    t.edge_on_boundary = {refine_edge_bdy, parent_edge_on_boundary((r + 1) % 3), false};
    t.vertex_on_boundary = {boundary_vertex_[A], refine_edge_bdy, boundary_vertex_[C]};
  } else {
    throw Error(ErrorCode::Internal, "virtual child requested across the refinement edge");
  }
  return t;
}

Patch Mesh::pair_patch(int face_id) const {
  const Face& f = face(face_id);
  Patch p;
  p.face_id = face_id;
  p.face_a = vertices_[f.v[0]];
  p.face_b = vertices_[f.v[1]];
  p.kind = f.boundary() ? PatchKind::SingleElement : PatchKind::Pair;
  for (int s = 0; s < 2; ++s) {
    if (f.elem[s] < 0) continue;
    p.tris.push_back(make_patch_tri(f.elem[s]));
    p.shared_local_edge[s] = f.local_edge[s];
  }
  return p;
}

Patch Mesh::minimal_pair_patch(int face_id) const {
  const Face& f = face(face_id);
  Patch p;
  p.face_id = face_id;
  p.face_a = vertices_[f.v[0]];
  p.face_b = vertices_[f.v[1]];
  p.kind = PatchKind::MinimalPair;
  for (int s = 0; s < 2; ++s) {
    if (f.elem[s] < 0) continue;
    const Element& e = elements_[f.elem[s]];
    const int r = e.refine_edge;
    if (edge_key(e.v[(r + 1) % 3], e.v[(r + 2) % 3]) == edge_key(f.v[0], f.v[1])) {
      p.tris.push_back(make_patch_tri(f.elem[s]));
      p.shared_local_edge[s] = f.local_edge[s];
    } else {
      p.tris.push_back(make_virtual_child(f.elem[s], f.v[0], f.v[1]));
      // face-local edge index follows from the child construction
      p.shared_local_edge[s] = edge_key(e.v[r], e.v[(r + 1) % 3]) == edge_key(f.v[0], f.v[1]) ? 2 : 1;
    }
  }
  return p;
}

MeshStats Mesh::stats() const {
  MeshStats s;
  std::map<int, std::vector<int>> at_vertex;
  for (int id : leaves_)
    for (int v : elements_[id].v) at_vertex[v].push_back(id);

  s.nbar = 0;
  for (const auto& [v, list] : at_vertex) s.nbar = std::max(s.nbar, static_cast<int>(list.size()));

  s.mu = 1.0;
  s.sigma = 1.0;
  for (int id : leaves_) {
    const Triangle tk = triangle(id);
    const double ak = area(tk);
    const double rho = inscribed_diameter(tk);
    std::set<int> touching;
    for (int v : elements_[id].v)
      for (int other : at_vertex[v]) touching.insert(other);
    for (int other : touching) {
      const Triangle to = triangle(other);
      s.mu = std::max(s.mu, std::sqrt(ak / area(to)));
      s.sigma = std::max(s.sigma, diameter(to) / rho);
    }
  }

  s.face_connected = true;
  for (const auto& [z, list] : at_vertex) {
    if (list.size() <= 1) continue;
    std::map<int, int> index;
    for (std::size_t i = 0; i < list.size(); ++i) index[list[i]] = static_cast<int>(i);
    std::vector<bool> seen(list.size(), false);
    std::vector<int> stack{0};
    seen[0] = true;
    std::size_t reached = 1;
    while (!stack.empty()) {
      const int cur = list[stack.back()];
      stack.pop_back();
      const Element& e = elements_[cur];
      for (int j = 0; j < 3; ++j) {
        const int a = e.v[(j + 1) % 3], b = e.v[(j + 2) % 3];
        if (a != z && b != z) continue; // only faces containing z
        const int other = leaf_across_edge(a, b, cur);
        if (other < 0) continue;
        auto it = index.find(other);
        if (it != index.end() && !seen[it->second]) {
          seen[it->second] = true;
          ++reached;
          stack.push_back(it->second);
        }
      }
    }
    if (reached != list.size()) {
      s.face_connected = false;
      break;
    }
  }
  return s;
}

void Mesh::audit_conformity() const {
  for (int id : leaves_) {
    const Element& e = elements_[id];
    if (signed_area(vertices_[e.v[0]], vertices_[e.v[1]], vertices_[e.v[2]]) <= 0.0)
      throw Error(ErrorCode::Internal, "conformity audit: non-positive leaf area");
    if (e.refine_edge < 0 || e.refine_edge > 2)
      throw Error(ErrorCode::Internal, "conformity audit: bad refinement edge");
  }
  std::function<bool(int, int)> has_leaf_subedge = [&](int a, int b) -> bool {
    auto it = edge_leaves_.find(edge_key(a, b));
    if (it != edge_leaves_.end() && !it->second.empty()) return true;
    auto mid = midpoints_.find(edge_key(a, b));
    if (mid == midpoints_.end()) return false;
    return has_leaf_subedge(a, mid->second) || has_leaf_subedge(mid->second, b);
  };
  for (const auto& [key, list] : edge_leaves_) {
    if (list.size() > 2)
      throw Error(ErrorCode::Internal, "conformity audit: edge with more than 2 incidences");
    for (int id : list)
      if (!elements_[id].is_leaf())
        throw Error(ErrorCode::Internal, "conformity audit: stale incidence entry");
    if (list.size() == 1) {
      // single-sided edge must be genuinely on the boundary, not hanging
      auto mid = midpoints_.find(key);
      if (mid != midpoints_.end() &&
          (has_leaf_subedge(key.first, mid->second) || has_leaf_subedge(mid->second, key.second)))
        throw Error(ErrorCode::Internal, "conformity audit: hanging node detected");
    }
  }
}

bool Mesh::closure_terminates() const {
  for (int id : leaves_) {
    Mesh scratch = *this;
    int budget = root_elements_ * 64;
    try {
      scratch.bisect_with_closure(id, budget);
    } catch (const Error&) {
      return false;
    }
  }
  return true;
}

std::string Mesh::serialize() const {
  std::string out = "rdmesh 1\n";
  for (int i = 0; i < root_vertices_; ++i) {
    out += "v ";
    append_num(out, vertices_[i].x);
    out += ' ';
    append_num(out, vertices_[i].y);
    out += '\n';
  }
  for (int i = 0; i < root_elements_; ++i) {
    const Element& e = elements_[i];
    out += "t " + std::to_string(e.v[0]) + ' ' + std::to_string(e.v[1]) + ' ' +
           std::to_string(e.v[2]) + ' ' + std::to_string(e.refine_edge) + '\n';
  }
  for (int id : log_) out += "b " + std::to_string(id) + '\n';
  return out;
}

void Mesh::save(const std::string& path) const {
  std::ofstream f(path);
  if (!f) throw Error(ErrorCode::Io, "cannot open '" + path + "' for writing");
  f << serialize();
  if (!f) throw Error(ErrorCode::Io, "write failed for '" + path + "'");
}

Mesh Mesh::parse(std::istream& in, const std::string& origin) {
  std::vector<Vec2> verts;
  std::vector<std::array<int, 4>> tris;
  std::vector<int> replay;
  std::string line;
  int lineno = 0;
  bool header_seen = false;
  auto fail = [&](const std::string& msg) -> void {
    throw Error(ErrorCode::Io, origin + ":" + std::to_string(lineno) + ": " + msg);
  };
  while (std::getline(in, line)) {
    ++lineno;
    std::istringstream ls(line);
    std::string tag;
    if (!(ls >> tag)) continue; // blank line
    if (tag == "#") continue;
    if (!header_seen) {
      int version = 0;
      if (tag != "rdmesh" || !(ls >> version) || version != 1)
        fail("expected header 'rdmesh 1'");
      header_seen = true;
      continue;
    }
    if (tag == "v") {
      Vec2 p;
      if (!(ls >> p.x >> p.y)) fail("malformed vertex line");
      verts.push_back(p);
    } else if (tag == "t") {
      std::array<int, 4> t{};
      if (!(ls >> t[0] >> t[1] >> t[2] >> t[3])) fail("malformed element line");
      tris.push_back(t);
    } else if (tag == "b") {
      int id;
      if (!(ls >> id)) fail("malformed bisection line");
      replay.push_back(id);
    } else {
      fail("unknown record '" + tag + "'");
    }
  }
  if (!header_seen) throw Error(ErrorCode::Io, origin + ": missing 'rdmesh 1' header");

  Mesh m = from_root(std::move(verts), tris);
  for (int id : replay) {
    if (id < 0 || id >= m.element_count() || !m.elements_[id].is_leaf())
      throw Error(ErrorCode::Io, origin + ": bisection log names a non-leaf element " +
                                     std::to_string(id));
    m.log_.push_back(id);
    int budget = m.root_elements_ * 64;
    m.bisect_with_closure(id, budget);
  }
  m.rebuild_derived();
  return m;
}

Mesh Mesh::load(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw Error(ErrorCode::Io, "cannot open mesh file '" + path + "'");
  return parse(f, path);
}

uint64_t Mesh::content_hash() const {
  const std::string s = serialize();
  uint64_t h = 1469598103934665603ull;
  for (unsigned char c : s) {
    h ^= c;
    h *= 1099511628211ull;
  }
  return h;
}

bool Mesh::is_descendant_of(int id, int ancestor) const {
  element(ancestor);
  int cur = element(id).parent;
  if (id == ancestor) return true;
  while (cur >= 0) {
    if (cur == ancestor) return true;
    cur = elements_[cur].parent;
  }
  return false;
}

std::vector<int> Mesh::descendant_leaves(int id) const {
  element(id);
  std::vector<int> out, stack{id};
  while (!stack.empty()) {
    const int cur = stack.back();
    stack.pop_back();
    const Element& e = elements_[cur];
    if (e.is_leaf()) {
      out.push_back(cur);
    } else {
      stack.push_back(e.child[1]);
      stack.push_back(e.child[0]);
    }
  }
  std::sort(out.begin(), out.end());
  return out;
}

int Mesh::locate_leaf(const Vec2& p) const {
  const double tol = 64.0 * geom_tol() / root_diameter_; // barycentric scale
  for (int root = 0; root < root_elements_; ++root) {
    if (!contains(triangle(root), p, tol)) continue;
    int cur = root;
    while (!elements_[cur].is_leaf()) {
      const int c0 = elements_[cur].child[0], c1 = elements_[cur].child[1];
      const auto l0 = barycentric(triangle(c0), p);
      const auto l1 = barycentric(triangle(c1), p);
      const double m0 = std::min({l0[0], l0[1], l0[2]});
      const double m1 = std::min({l1[0], l1[1], l1[2]});
      cur = m0 >= m1 ? c0 : c1;
    }
    if (contains(triangle(cur), p, tol)) return cur;
  }
  return -1;
}

} // namespace rdloc

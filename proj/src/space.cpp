#include "space.hpp"

#include <tuple>

namespace rdloc {

FeSpace::FeSpace(std::shared_ptr<const Mesh> mesh, int degree)
    : mesh_(std::move(mesh)), degree_(degree) {
  const ReferenceBasis& basis = ReferenceBasis::get(degree_);
  local_size_ = basis.size();

  // dof keys: (0, vertex, 0) vertices; (1, face, k) edge nodes with k the
  // index along the ascending-vertex direction; (2, element, node) interior
  std::map<std::tuple<int, int, int>, int> ids;
  std::vector<std::tuple<int, int, int>> key_of_dof;

  for (int leaf : mesh_->leaves()) {
    const Element& e = mesh_->element(leaf);
    const AffineMap map(mesh_->triangle(leaf));
    std::vector<int>& dofs = elem_dofs_[leaf];
    dofs.assign(local_size_, -1);
    // local 1D index of each edge node, counted from endpoint (j+1)%3
    std::array<std::map<int, int>, 3> edge_pos;
    for (int j = 0; j < 3; ++j)
      for (std::size_t k = 0; k < basis.edge_node_ids[j].size(); ++k)
        edge_pos[j][basis.edge_node_ids[j][k]] = static_cast<int>(k);

    for (int z = 0; z < local_size_; ++z) {
      std::tuple<int, int, int> key;
      switch (basis.node_kind[z]) {
        case NodeKind::Vertex: {
          // reference vertices are nodes at the lattice corners
          const Vec2& r = basis.nodes[z];
          int lv = r.x > 0.5 ? 1 : (r.y > 0.5 ? 2 : 0);
          key = {0, e.v[lv], 0};
          break;
        }
        case NodeKind::Edge: {
          const int j = basis.node_edge[z];
          const int a = e.v[(j + 1) % 3], b = e.v[(j + 2) % 3];
          const int pos = edge_pos[j][z]; // 1..degree-1 along a->b
          const int k = a < b ? pos : degree_ - pos;
          const int fid = mesh_->find_face(a, b);
          key = {1, fid, k};
          break;
        }
        case NodeKind::Interior:
          key = {2, leaf, z};
          break;
      }
      auto [it, inserted] = ids.emplace(key, static_cast<int>(key_of_dof.size()));
      if (inserted) {
        key_of_dof.push_back(key);
        dof_point_.push_back(map.to_physical(basis.nodes[z]));
      }
      dofs[z] = it->second;
    }
  }
  dof_count_ = static_cast<int>(key_of_dof.size());

  dof_boundary_.assign(dof_count_, false);
  for (int d = 0; d < dof_count_; ++d) {
    const auto& [kind, id, k] = key_of_dof[d];
    if (kind == 0)
      dof_boundary_[d] = mesh_->vertex_on_boundary(id);
    else if (kind == 1)
      dof_boundary_[d] = mesh_->face(id).boundary();
  }
}

const std::vector<int>& FeSpace::element_dofs(int leaf_id) const {
  auto it = elem_dofs_.find(leaf_id);
  if (it == elem_dofs_.end())
    throw Error(ErrorCode::InvalidArgument,
                "element " + std::to_string(leaf_id) + " is not a leaf of the space's mesh");
  return it->second;
}

int FeSpace::boundary_dof_count() const {
  int n = 0;
  for (bool b : dof_boundary_) n += b ? 1 : 0;
  return n;
}

double FeSpace::eval(const Eigen::VectorXd& coeffs, const Vec2& p) const {
  const int leaf = mesh_->locate_leaf(p);
  if (leaf < 0) throw Error(ErrorCode::InvalidArgument, "evaluation point outside the mesh");
  const ReferenceBasis& basis = ReferenceBasis::get(degree_);
  const AffineMap map(mesh_->triangle(leaf));
  std::vector<double> vals(local_size_);
  basis.eval(map.to_reference(p), vals.data());
  const auto& dofs = element_dofs(leaf);
  double out = 0.0;
  for (int z = 0; z < local_size_; ++z) out += coeffs[dofs[z]] * vals[z];
  return out;
}

Vec2 FeSpace::eval_gradient(const Eigen::VectorXd& coeffs, const Vec2& p) const {
  const int leaf = mesh_->locate_leaf(p);
  if (leaf < 0) throw Error(ErrorCode::InvalidArgument, "evaluation point outside the mesh");
  const ReferenceBasis& basis = ReferenceBasis::get(degree_);
  const AffineMap map(mesh_->triangle(leaf));
  std::vector<Vec2> grads(local_size_);
  basis.eval_grad(map.to_reference(p), grads.data());
  const auto& dofs = element_dofs(leaf);
  Vec2 out{0.0, 0.0};
  for (int z = 0; z < local_size_; ++z) {
    const Vec2 g = map.push_gradient(grads[z]);
    out.x += coeffs[dofs[z]] * g.x;
    out.y += coeffs[dofs[z]] * g.y;
  }
  return out;
}

} // namespace rdloc

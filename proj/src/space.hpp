#ifndef RDLOC_SPACE_HPP
#define RDLOC_SPACE_HPP

#include "basis.hpp"
#include "mesh.hpp"

#include <Eigen/Dense>

#include <map>
#include <memory>
#include <vector>

namespace rdloc {

/// Global continuous space S^{l,0} over the leaves of a mesh. Degrees of
/// freedom are glued combinatorially (vertex / edge / interior node keys), so
/// continuity is exact by construction. Dirichlet handling is a boundary mask
/// consumed by the solvers.
class FeSpace {
public:
  FeSpace(std::shared_ptr<const Mesh> mesh, int degree);

  const Mesh& mesh() const { return *mesh_; }
  std::shared_ptr<const Mesh> mesh_ptr() const { return mesh_; }
  int degree() const { return degree_; }
  int dof_count() const { return dof_count_; }
  int local_size() const { return local_size_; }

  /// Global dof ids of the local nodes of a leaf element.
  const std::vector<int>& element_dofs(int leaf_id) const;
  bool dof_on_boundary(int dof) const { return dof_boundary_[dof]; }
  int boundary_dof_count() const;
  const Vec2& dof_point(int dof) const { return dof_point_[dof]; }

  double eval(const Eigen::VectorXd& coeffs, const Vec2& p) const;
  Vec2 eval_gradient(const Eigen::VectorXd& coeffs, const Vec2& p) const;

private:
  std::shared_ptr<const Mesh> mesh_;
  int degree_;
  int dof_count_ = 0;
  int local_size_ = 0;
  std::map<int, std::vector<int>> elem_dofs_; // keyed by leaf element id
  std::vector<bool> dof_boundary_;
  std::vector<Vec2> dof_point_;
};

/// A member of S^{l,0}: a space plus coefficients.
struct FeFunction {
  std::shared_ptr<const FeSpace> space;
  Eigen::VectorXd coeffs;

  double value(const Vec2& p) const { return space->eval(coeffs, p); }
  Vec2 gradient(const Vec2& p) const { return space->eval_gradient(coeffs, p); }
};

} // namespace rdloc

#endif

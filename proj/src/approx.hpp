#ifndef RDLOC_APPROX_HPP
#define RDLOC_APPROX_HPP

#include "integrate.hpp"
#include "mesh.hpp"
#include "space.hpp"
#include "target.hpp"

#include <Eigen/Dense>

#include <memory>

namespace rdloc {

/// epsilon >= 0 weighs the gradient part of |||v|||^2 = ||v||^2 + eps||grad v||^2.
struct RDContext {
  double epsilon = 0.0;
  int degree = 1;
  bool dirichlet = false;

  void validate() const;
};

/// Continuous piecewise-P_l space over the triangles of a patch, glued across
/// the shared face; constrained nodes (Dirichlet on the domain boundary)
/// carry dof -1 and are fixed to zero.
struct PatchSpace {
  int degree = 1;
  int dof_count = 0;
  std::vector<std::vector<int>> tri_dofs;
  std::vector<Vec2> dof_points;
};

PatchSpace build_patch_space(const Patch& patch, int degree, bool constrain_boundary, double tol);

struct PatchFunction {
  Patch patch;
  PatchSpace space;
  Eigen::VectorXd coeffs;

  double eval_in_tri(int tri_index, const Vec2& p) const;
};

struct ElementBest {
  Eigen::VectorXd coeffs; // nodal basis of the element
  double error_sq = 0.0;
  double norm_u_sq = 0.0;
  Eigen::VectorXd residual; // rhs - (M + eps A) c, for orthogonality audits
};

struct PatchBest {
  PatchFunction fn;
  double error_sq = 0.0;
  double norm_u_sq = 0.0;
  double integral_u = 0.0; // \int_patch u
  double integral_P = 0.0; // \int_patch P
  Eigen::VectorXd residual;
};

struct GlobalBest {
  FeFunction fn;
  double error_sq = 0.0;
  double norm_u_sq = 0.0;
  int iterations = 0;
};

/// Best approximation by P_l(K) in the reaction-diffusion norm; the small
/// SPD system (M + eps A)c = rhs. error_sq = |||u|||^2 - c.rhs, clamped at
/// -1e-12 (more negative raises Error).
ElementBest best_on_element(const TargetFunction& u, const Mesh& mesh, int elem,
                            const RDContext& ctx);

/// Best approximation in the glued patch space. In Dirichlet mode the patch
/// space loses its boundary nodes whenever the patch has a face on the
/// domain boundary.
PatchBest best_on_patch(const TargetFunction& u, const Mesh& mesh, const Patch& patch,
                        const RDContext& ctx);

/// Minimizes ||grad(u-P)|| over the patch space subject to matching means
/// (Lagrange multiplier solve). Interior-face patches only.
PatchBest best_seminorm_on_patch(const TargetFunction& u, const Mesh& mesh, const Patch& patch,
                                 int degree);

/// Global best approximation in S^{l,0} (or its H^1_0 subspace) by
/// Jacobi-preconditioned CG to relative residual 1e-12. error_sq clamped at
/// -1e-10.
GlobalBest global_best(const TargetFunction& u, std::shared_ptr<const Mesh> mesh,
                       const RDContext& ctx);

/// Quasi-interpolation: element-interior nodes take the value of the pair
/// best approximation R_{F_K} u, skeleton nodes take the dual average over
/// the lowest-indexed containing element; Dirichlet mode suppresses boundary
/// nodes.
FeFunction quasi_interpolate(const TargetFunction& u, std::shared_ptr<const Mesh> mesh,
                             const RDContext& ctx);

/// \int_K u psi_z^K for one node of a leaf element.
double dual_eval(const TargetFunction& u, const Mesh& mesh, int elem, int node, int degree);

/// |||u - v|||^2 over the whole mesh of v's space.
double error_norm_sq(const TargetFunction& u, const FeFunction& v, double eps);

/// |||u|||^2 over the mesh.
double target_norm_sq(const TargetFunction& u, const Mesh& mesh, double eps);

/// Verifies that `fine` extends `coarse` in the master tree (same roots,
/// element-id-stable refinement). Throws on mismatch.
void require_extends(const Mesh& fine, const Mesh& coarse);

/// Snap tiny negative error squares to zero, reject assembly-scale negatives.
double clamp_error_sq(double value, double threshold);

} // namespace rdloc

#endif

#ifndef RDLOC_INTEGRATE_HPP
#define RDLOC_INTEGRATE_HPP

#include "basis.hpp"
#include "target.hpp"

#include <Eigen/Dense>

namespace rdloc {

/// Integrals of a target against the Lagrange basis of `tri`, plus the
/// target's own quadratic integrals, all over `tri`.
///
/// Analytic targets are split along their declared kink lines; pieces with a
/// declared polynomial degree are integrated with a single rule of sufficient
/// exactness, other pieces by recursive element subdivision until two levels
/// agree within relative 1e-10 (depth cap 10). Discrete targets are clipped
/// against the fine-mesh leaves below `host`, which makes them quadrature
/// exact; `host` must be a fine-mesh element whose triangle contains `tri`.
struct TriIntegrals {
  Eigen::VectorXd u_phi;   // \int u phi_i
  Eigen::VectorXd gu_gphi; // \int grad u . grad phi_i
  double u_sq = 0.0;       // \int u^2
  double gu_sq = 0.0;      // \int |grad u|^2
  double u_int = 0.0;      // \int u
};

TriIntegrals integrate_target(const Triangle& tri, int host, int degree, const TargetFunction& u);

/// \int_K u psi_z^K for every node z of the element (degree-many entries).
Eigen::VectorXd dual_node_integrals(const Triangle& tri, int host, int degree,
                                    const TargetFunction& u);

/// Line-integral analog on the segment [a,b]: u against the 1D Lagrange
/// basis (degree+1 nodes, parameterized from a to b) and \int u^2 ds.
struct SegIntegrals {
  Eigen::VectorXd u_phi;
  double u_sq = 0.0;
};

SegIntegrals integrate_target_on_edge(const Vec2& a, const Vec2& b, int degree,
                                      const TargetFunction& u);

} // namespace rdloc

#endif

#ifndef RDLOC_BASIS_HPP
#define RDLOC_BASIS_HPP

#include "geometry.hpp"

#include <Eigen/Dense>

#include <array>
#include <utility>
#include <vector>

namespace rdloc {

enum class NodeKind { Vertex, Edge, Interior };

/// Lagrange basis of degree 1..3 on the reference triangle, nodes on the
/// lexicographic barycentric lattice. Basis functions are stored in the
/// monomial basis (Vandermonde inverse), which keeps the code uniform in the
/// degree.
///
/// Reference vertices are V0=(0,0), V1=(1,0), V2=(0,1); edge i is the edge
/// opposite vertex i.
struct ReferenceBasis {
  int degree = 1;
  std::vector<Vec2> nodes;
  std::vector<NodeKind> node_kind;
  std::vector<int> node_edge; // containing edge for Edge nodes, else -1
  std::vector<std::pair<int, int>> monomials;
  Eigen::MatrixXd coeffs; // coeffs(i,m): basis i in the monomial basis
  std::array<std::vector<int>, 3> edge_node_ids; // ordered from vertex (i+1)%3 to (i+2)%3

  static const ReferenceBasis& get(int degree);

  int size() const { return static_cast<int>(nodes.size()); }
  void eval(const Vec2& p, double* values) const;
  void eval_grad(const Vec2& p, Vec2* grads) const;
};

/// L2(K)-dual basis on the reference element: psi_z = sum_y coeffs(z,y) phi_y
/// with coeffs the inverse reference mass matrix. On a physical element the
/// dual functions carry an extra 1/(2|K|) factor.
struct DualBasis {
  Eigen::MatrixXd coeffs;

  static const DualBasis& get(int degree);
};

/// 1D Lagrange basis on [0,1] with degree+1 equispaced nodes, its mass matrix
/// and the face dual basis (mass inverse).
struct SegmentBasis {
  int degree = 1;
  std::vector<double> nodes;
  Eigen::MatrixXd coeffs; // basis i in the 1D monomial basis
  Eigen::MatrixXd mass;
  Eigen::MatrixXd dual_coeffs;

  static const SegmentBasis& get(int degree);

  int size() const { return static_cast<int>(nodes.size()); }
  void eval(double t, double* values) const;
};

/// Affine reference-to-physical map of a triangle.
struct AffineMap {
  Vec2 origin;
  Eigen::Matrix2d B;
  Eigen::Matrix2d Binv;
  double det_abs = 0.0;

  explicit AffineMap(const Triangle& tri);

  Vec2 to_physical(const Vec2& ref) const;
  Vec2 to_reference(const Vec2& phys) const;
  /// Physical gradient from a reference gradient: B^{-T} g.
  Vec2 push_gradient(const Vec2& ref_grad) const;
};

/// Mass, stiffness, boundary-mass and per-edge face mass matrices of one
/// physical element, quadrature-exact.
struct LocalMatrices {
  Eigen::MatrixXd mass;
  Eigen::MatrixXd stiffness;
  Eigen::MatrixXd boundary_mass;
  std::array<Eigen::MatrixXd, 3> edge_mass;
};

/// Throws on degenerate geometry (area < 1e-14 * diam^2).
LocalMatrices assemble_local(const Triangle& tri, int degree);

} // namespace rdloc

#endif

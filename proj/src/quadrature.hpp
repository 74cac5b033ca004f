#ifndef RDLOC_QUADRATURE_HPP
#define RDLOC_QUADRATURE_HPP

#include "geometry.hpp"

#include <vector>

namespace rdloc {

/// Quadrature on the reference triangle conv{(0,0),(1,0),(0,1)}.
/// Weights sum to the reference area 1/2.
struct QuadratureRule {
  std::vector<Vec2> points;
  std::vector<double> weights;
  int exactness = 0;

  /// Default rule: conical product of Gauss-Legendre and Gauss-Jacobi(1,0)
  /// factors, exact for all polynomials of total degree <= exactness.
  /// Cached per exactness degree.
  static const QuadratureRule& reference(int exactness);

  /// Symmetric rules with closed-form points/weights (degrees 1,2,3,5).
  /// Requests in between round up. Used as an independent cross-check of
  /// the conical rules; exactness > 5 is not available here.
  static QuadratureRule symmetric(int exactness);
};

/// Gauss-Legendre rule on [0,1]; weights sum to 1. Exact for degree 2n-1.
struct SegmentRule {
  std::vector<double> points;
  std::vector<double> weights;

  static const SegmentRule& reference(int npoints);
};

} // namespace rdloc

#endif

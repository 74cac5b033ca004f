#ifndef RDLOC_TARGET_HPP
#define RDLOC_TARGET_HPP

#include "geometry.hpp"
#include "space.hpp"

#include <functional>
#include <memory>
#include <string>
#include <vector>

namespace rdloc {

/// The function u being approximated. Either an analytic callable with
/// gradient and declared kink lines (lines where the gradient, or the value,
/// jumps -- quadrature splits along them), or a finite element function on a
/// mesh refining the working mesh.
class TargetFunction {
public:
  using ValueFn = std::function<double(double, double)>;
  using GradFn = std::function<Vec2(double, double)>;

  /// piece_degree >= 0 declares that u is a polynomial of that degree between
  /// the kink lines, enabling exact quadrature; -1 requests adaptive
  /// integration.
  static TargetFunction analytic(ValueFn value, GradFn gradient, std::vector<Line> kinks = {},
                                 int piece_degree = -1, std::string name = "analytic");

  static TargetFunction discrete(std::shared_ptr<const FeSpace> space, Eigen::VectorXd coeffs,
                                 std::string name = "discrete");

  /// Built-in targets: "counterexample-u_eps", "step", "smooth-sine",
  /// "boundary-layer", "polynomial". The domain mesh provides the bounding
  /// box for the boundary-layer target; epsilon parameterizes u_eps and the
  /// layer width; seed drives the polynomial coefficients.
  static TargetFunction builtin(const std::string& name, double epsilon, const Mesh& domain,
                                uint64_t seed, int degree);

  /// Random polynomial of total degree `degree` with coefficients in [-1,1].
  static TargetFunction random_polynomial(int degree, uint64_t seed);

  bool is_discrete() const { return space_ != nullptr; }
  double value(const Vec2& p) const;
  Vec2 gradient(const Vec2& p) const;
  const std::vector<Line>& kinks() const { return kinks_; }
  int piece_degree() const { return piece_degree_; }
  const std::string& name() const { return name_; }

  const FeSpace& space() const { return *space_; }
  std::shared_ptr<const FeSpace> space_ptr() const { return space_; }
  const Eigen::VectorXd& coeffs() const { return coeffs_; }

  /// Checks the analytic gradient against central finite differences at
  /// seeded random points inside the bounding box, skipping points near kink
  /// lines. Throws Error on mismatch > 1e-6 absolute (scaled).
  void audit_gradient(const Vec2& lo, const Vec2& hi, uint64_t seed = 7) const;

private:
  ValueFn value_;
  GradFn gradient_;
  std::vector<Line> kinks_;
  int piece_degree_ = -1;
  std::string name_;
  std::shared_ptr<const FeSpace> space_;
  Eigen::VectorXd coeffs_;
};

} // namespace rdloc

#endif

#include "target.hpp"

#include "error.hpp"

#include <cmath>
#include <random>

namespace rdloc {

TargetFunction TargetFunction::analytic(ValueFn value, GradFn gradient, std::vector<Line> kinks,
                                        int piece_degree, std::string name) {
  TargetFunction t;
  t.value_ = std::move(value);
  t.gradient_ = std::move(gradient);
  t.kinks_ = std::move(kinks);
  t.piece_degree_ = piece_degree;
  t.name_ = std::move(name);
  return t;
}

TargetFunction TargetFunction::discrete(std::shared_ptr<const FeSpace> space,
                                        Eigen::VectorXd coeffs, std::string name) {
  if (!space) throw Error(ErrorCode::InvalidArgument, "discrete target needs a space");
  if (coeffs.size() != space->dof_count())
    throw Error(ErrorCode::InvalidArgument, "discrete target coefficient length mismatch");
  TargetFunction t;
  t.space_ = std::move(space);
  t.coeffs_ = std::move(coeffs);
  t.name_ = std::move(name);
  t.piece_degree_ = t.space_->degree();
  return t;
}

double TargetFunction::value(const Vec2& p) const {
  if (space_) return space_->eval(coeffs_, p);
  return value_(p.x, p.y);
}

Vec2 TargetFunction::gradient(const Vec2& p) const {
  if (space_) return space_->eval_gradient(coeffs_, p);
  return gradient_(p.x, p.y);
}

TargetFunction TargetFunction::random_polynomial(int degree, uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> dist(-1.0, 1.0);
  std::vector<std::array<int, 2>> monos;
  std::vector<double> c;
  for (int px = 0; px <= degree; ++px)
    for (int py = 0; py + px <= degree; ++py) {
      monos.push_back({px, py});
      c.push_back(dist(rng));
    }
  auto val = [monos, c](double x, double y) {
    double v = 0.0;
    for (std::size_t m = 0; m < monos.size(); ++m)
      v += c[m] * std::pow(x, monos[m][0]) * std::pow(y, monos[m][1]);
    return v;
  };
  auto grad = [monos, c](double x, double y) {
    Vec2 g{0.0, 0.0};
    for (std::size_t m = 0; m < monos.size(); ++m) {
      const int px = monos[m][0], py = monos[m][1];
      if (px > 0) g.x += c[m] * px * std::pow(x, px - 1) * std::pow(y, py);
      if (py > 0) g.y += c[m] * py * std::pow(x, px) * std::pow(y, py - 1);
    }
    return g;
  };
  return analytic(val, grad, {}, degree, "polynomial");
}

TargetFunction TargetFunction::builtin(const std::string& name, double epsilon, const Mesh& domain,
                                       uint64_t seed, int degree) {
  double lox = domain.vertex(0).x, hix = lox, loy = domain.vertex(0).y, hiy = loy;
  for (int i = 0; i < domain.vertex_count(); ++i) {
    lox = std::min(lox, domain.vertex(i).x);
    hix = std::max(hix, domain.vertex(i).x);
    loy = std::min(loy, domain.vertex(i).y);
    hiy = std::max(hiy, domain.vertex(i).y);
  }

  if (name == "counterexample-u_eps") {
    if (epsilon <= 0.0)
      throw Error(ErrorCode::InvalidArgument, "counterexample-u_eps requires epsilon > 0");
    const double s = std::sqrt(epsilon);
    auto val = [s](double x, double) {
      if (x < -s) return -1.0;
      if (x > s) return 1.0;
      return x / s;
    };
    auto grad = [s](double x, double) {
      return (x > -s && x < s) ? Vec2{1.0 / s, 0.0} : Vec2{0.0, 0.0};
    };
    return analytic(val, grad, {Line::vertical(-s), Line::vertical(s)}, 1, name);
  }
  if (name == "step") {
    auto val = [](double x, double) { return x < 0.0 ? -1.0 : 1.0; };
    auto grad = [](double, double) { return Vec2{0.0, 0.0}; };
    return analytic(val, grad, {Line::vertical(0.0)}, 0, name);
  }
  if (name == "smooth-sine") {
    const double pi = 3.14159265358979323846;
    auto val = [pi](double x, double y) { return std::sin(pi * x) * std::sin(pi * y); };
    auto grad = [pi](double x, double y) {
      return Vec2{pi * std::cos(pi * x) * std::sin(pi * y),
                  pi * std::sin(pi * x) * std::cos(pi * y)};
    };
    return analytic(val, grad, {}, -1, name);
  }
  if (name == "boundary-layer" || name == "boundary-layer-surrogate") {
    if (epsilon <= 0.0)
      throw Error(ErrorCode::InvalidArgument, "boundary-layer requires epsilon > 0");
    const double w = std::sqrt(epsilon);
    auto g = [w](double t, double a, double b) {
      return std::tanh((t - a) / w) * std::tanh((b - t) / w);
    };
    auto dg = [w](double t, double a, double b) {
      const double ta = std::tanh((t - a) / w), tb = std::tanh((b - t) / w);
      return ((1.0 - ta * ta) * tb - ta * (1.0 - tb * tb)) / w;
    };
    auto val = [=](double x, double y) { return g(x, lox, hix) * g(y, loy, hiy); };
    auto grad = [=](double x, double y) {
      return Vec2{dg(x, lox, hix) * g(y, loy, hiy), g(x, lox, hix) * dg(y, loy, hiy)};
    };
    return analytic(val, grad, {}, -1, name);
  }
  if (name == "polynomial") {
    TargetFunction t = random_polynomial(degree, seed);
    return t;
  }
  throw Error(ErrorCode::InvalidArgument, "unknown target '" + name + "'");
}

void TargetFunction::audit_gradient(const Vec2& lo, const Vec2& hi, uint64_t seed) const {
  const double diam = std::max(hi.x - lo.x, hi.y - lo.y);
  const double h = 1e-5 * diam;
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> dx(lo.x + 2 * h, hi.x - 2 * h);
  std::uniform_real_distribution<double> dy(lo.y + 2 * h, hi.y - 2 * h);
  int checked = 0;
  for (int trial = 0; trial < 400 && checked < 32; ++trial) {
    const Vec2 p{dx(rng), dy(rng)};
    bool near_kink = false;
    for (const Line& line : kinks_)
      if (std::abs(line.dist(p)) / norm(line.normal) < 8.0 * h) near_kink = true;
    if (near_kink) continue;
    const Vec2 g = gradient(p);
    const double fd_x = (value({p.x + h, p.y}) - value({p.x - h, p.y})) / (2 * h);
    const double fd_y = (value({p.x, p.y + h}) - value({p.x, p.y - h})) / (2 * h);
    const double scale = 1.0 + std::abs(g.x) + std::abs(g.y);
    if (std::abs(fd_x - g.x) > 1e-6 * scale || std::abs(fd_y - g.y) > 1e-6 * scale)
      throw Error(ErrorCode::InvalidArgument,
                  "target '" + name_ + "': gradient disagrees with finite differences");
    ++checked;
  }
}

} // namespace rdloc

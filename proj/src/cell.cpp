#include "gapcert/cell.hpp"

#include <cmath>
#include <limits>
#include <sstream>

#include "gapcert/errors.hpp"

namespace gapcert {

namespace {
constexpr double kInf = std::numeric_limits<double>::infinity();
}

Cell Cell::ball(Eigen::VectorXd center, double radius) {
  if (!(radius > 0)) fail(ErrorKind::SchemaError, "ball radius must be positive");
  Cell c;
  c.shape = Shape::Ball;
  c.dim = static_cast<int>(center.size());
  c.center = std::move(center);
  c.radius = radius;
  return c;
}

Cell Cell::ball0(int dim, double radius) {
  return ball(Eigen::VectorXd::Zero(dim), radius);
}

Cell Cell::ball_complement(int dim, double radius) {
  if (!(radius > 0)) fail(ErrorKind::SchemaError, "ball radius must be positive");
  Cell c;
  c.shape = Shape::BallComplement;
  c.dim = dim;
  c.radius = radius;
  return c;
}

Cell Cell::annulus(int dim, double r_in, double r_out) {
  if (!(0 <= r_in && r_in < r_out))
    fail(ErrorKind::SchemaError, "annulus requires 0 <= r_in < r_out");
  Cell c;
  c.shape = Shape::Annulus;
  c.dim = dim;
  c.r_in = r_in;
  c.r_out = r_out;
  return c;
}

Cell Cell::box(Eigen::VectorXd lo, Eigen::VectorXd hi) {
  if (lo.size() != hi.size()) fail(ErrorKind::SchemaError, "box corner dims differ");
  for (int i = 0; i < lo.size(); ++i)
    if (!(lo[i] < hi[i])) fail(ErrorKind::SchemaError, "box requires lo < hi componentwise");
  Cell c;
  c.shape = Shape::Box;
  c.dim = static_cast<int>(lo.size());
  c.lo = std::move(lo);
  c.hi = std::move(hi);
  return c;
}

Cell Cell::full_space(int dim) { return ball0(dim, kInf); }

bool Cell::is_full_space() const {
  return shape == Shape::Ball && std::isinf(radius);
}

bool Cell::contains(const Eigen::VectorXd& x) const {
  switch (shape) {
    case Shape::Ball:
      return (x - center).norm() <= radius;
    case Shape::BallComplement:
      return x.norm() >= radius;
    case Shape::Annulus: {
      const double r = x.norm();
      return r >= r_in && r <= r_out;
    }
    case Shape::Box:
      for (int i = 0; i < dim; ++i)
        if (x[i] < lo[i] || x[i] > hi[i]) return false;
      return true;
  }
  return false;
}

bool Cell::origin_centered() const {
  switch (shape) {
    case Shape::Ball:
      return center.size() == 0 || center.norm() == 0.0;
    case Shape::BallComplement:
    case Shape::Annulus:
      return true;
    case Shape::Box:
      return dim == 1 && lo[0] == -hi[0] && hi[0] > 0;
  }
  return false;
}

std::pair<double, double> Cell::radial_range() const {
  if (!origin_centered())
    fail(ErrorKind::UnsupportedGeometry, "cell has no radial range: " + describe());
  switch (shape) {
    case Shape::Ball:
      return {0.0, radius};
    case Shape::BallComplement:
      return {radius, kInf};
    case Shape::Annulus:
      return {r_in, r_out};
    case Shape::Box:
      return {0.0, hi[0]};
  }
  return {0.0, kInf};
}

std::string Cell::describe() const {
  std::ostringstream os;
  switch (shape) {
    case Shape::Ball:
      os << "Ball(r=" << radius << ", |center|=" << (center.size() ? center.norm() : 0.0)
         << ", dim=" << dim << ")";
      break;
    case Shape::BallComplement:
      os << "BallComplement(r=" << radius << ", dim=" << dim << ")";
      break;
    case Shape::Annulus:
      os << "Annulus(" << r_in << ", " << r_out << ", dim=" << dim << ")";
      break;
    case Shape::Box:
      os << "Box(dim=" << dim << ")";
      break;
  }
  return os.str();
}

} // namespace gapcert

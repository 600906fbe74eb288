#pragma once

#include <Eigen/Core>
#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>
#include <vector>

#include "semicouple/errors.hpp"

namespace semicouple {

template <typename Scalar>
using Vec2 = Eigen::Matrix<Scalar, 2, 1>;

// { x : normal . x <= offset }
template <typename Scalar>
struct HalfPlane {
  Vec2<Scalar> normal;
  Scalar offset;
};

template <typename Scalar>
struct Disk {
  Vec2<Scalar> center;
  Scalar radius;
};

// Boundary vertex; the piece from this vertex to the next one is a straight
// segment or, if arc_to_next, a counter-clockwise arc of the cell's disk.
template <typename Scalar>
struct BoundaryVertex {
  Vec2<Scalar> point;
  bool arc_to_next = false;
};

namespace detail {

template <typename Scalar>
Scalar cross(const Vec2<Scalar>& a, const Vec2<Scalar>& b) {
  return a.x() * b.y() - a.y() * b.x();
}

template <typename Scalar>
std::vector<Vec2<Scalar>> clip(const std::vector<Vec2<Scalar>>& poly, const HalfPlane<Scalar>& h) {
  std::vector<Vec2<Scalar>> out;
  if (poly.empty()) return out;
  out.reserve(poly.size() + 1);
  const std::size_t n = poly.size();
  for (std::size_t i = 0; i < n; ++i) {
    const Vec2<Scalar>& a = poly[i];
    const Vec2<Scalar>& b = poly[(i + 1) % n];
    const Scalar fa = h.normal.dot(a) - h.offset;
    const Scalar fb = h.normal.dot(b) - h.offset;
    if (fa <= 0) out.push_back(a);
    if ((fa < 0 && fb > 0) || (fa > 0 && fb < 0)) {
      const Scalar t = fa / (fa - fb);
      out.push_back(a + t * (b - a));
    }
  }
  return out;
}

// Parameters t in (0, 1) where a + t (b - a) crosses the circle |x| = r.
template <typename Scalar>
int circle_crossings(const Vec2<Scalar>& a, const Vec2<Scalar>& b, Scalar r, Scalar t[2]) {
  const Vec2<Scalar> d = b - a;
  const Scalar qa = d.squaredNorm();
  if (qa == 0) return 0;
  const Scalar qb = a.dot(d);
  const Scalar qc = a.squaredNorm() - r * r;
  const Scalar disc = qb * qb - qa * qc;
  if (disc <= 0) return 0;
  const Scalar sq = std::sqrt(disc);
  // stable roots of qa t^2 + 2 qb t + qc
  const Scalar q = (qb >= 0) ? -(qb + sq) : -(qb - sq);
  Scalar t0 = q / qa;
  Scalar t1 = (q != 0) ? qc / q : t0;
  if (t0 > t1) std::swap(t0, t1);
  int k = 0;
  const Scalar eps = Scalar(64) * std::numeric_limits<Scalar>::epsilon();
  if (t0 > eps && t0 < 1 - eps) t[k++] = t0;
  if (t1 > eps && t1 < 1 - eps && t1 != t0) t[k++] = t1;
  return k;
}

// Signed area and signed second moment (about the origin) of the triangle
// (0, a, b) intersected with the disk |x| <= r.
template <typename Scalar>
void disk_triangle(const Vec2<Scalar>& a, const Vec2<Scalar>& b, Scalar r, Scalar& area, Scalar& moment) {
  Scalar ts[2];
  const int k = circle_crossings(a, b, r, ts);
  Scalar params[4] = {Scalar(0), Scalar(0), Scalar(0), Scalar(1)};
  int np = 1;
  for (int i = 0; i < k; ++i) params[np++] = ts[i];
  params[np++] = Scalar(1);
  area = 0;
  moment = 0;
  const Scalar r2 = r * r;
  for (int i = 0; i + 1 < np; ++i) {
    const Vec2<Scalar> p = a + params[i] * (b - a);
    const Vec2<Scalar> q = a + params[i + 1] * (b - a);
    // without crossings the whole edge is on one side; a tangent edge counts as outside
    const bool inside = k == 0 ? std::max(a.squaredNorm(), b.squaredNorm()) <= r2 * (1 + Scalar(1e-12))
                               : (Scalar(0.5) * (p + q)).squaredNorm() <= r2;
    if (inside) {
      const Scalar tri = Scalar(0.5) * cross(p, q);
      area += tri;
      moment += tri / Scalar(6) * (p.squaredNorm() + q.squaredNorm() + p.dot(q));
    } else {
      const Scalar angle = std::atan2(cross(p, q), p.dot(q));
      area += Scalar(0.5) * r2 * angle;
      moment += Scalar(0.25) * r2 * r2 * angle;
    }
  }
}

}  // namespace detail

// Convex cell: intersection of half-planes, optionally clipped by one disk.
template <typename Scalar>
class ConvexCell {
 public:
  using Point = Vec2<Scalar>;

  ConvexCell() = default;
  ConvexCell(std::vector<HalfPlane<Scalar>> halfplanes, std::optional<Disk<Scalar>> disk)
      : halfplanes_(std::move(halfplanes)), disk_(std::move(disk)) {
    rebuild();
  }

  const std::vector<HalfPlane<Scalar>>& halfplanes() const { return halfplanes_; }
  const std::optional<Disk<Scalar>>& disk() const { return disk_; }
  // The half-plane polygon (clipped to a square around the disk when a disk is present).
  const std::vector<Point>& polygon() const { return polygon_; }
  bool bounded() const { return bounded_; }
  bool empty() const { return area() <= 0; }

  Scalar area() const {
    require_bounded();
    if (polygon_.size() < 3) return 0;
    if (!disk_) {
      Scalar acc = 0;
      for (std::size_t i = 0; i < polygon_.size(); ++i) {
        acc += detail::cross(polygon_[i], polygon_[(i + 1) % polygon_.size()]);
      }
      return std::max(Scalar(0), Scalar(0.5) * acc);
    }
    Scalar area = 0, moment = 0;
    integrate(area, moment);
    return std::max(Scalar(0), area);
  }

  // int_cell |x - disk center|^2 dx, or about `about` for a disk-free polygon.
  Scalar second_moment(const Point& about) const {
    require_bounded();
    if (polygon_.size() < 3) return 0;
    if (disk_) {
      if ((about - disk_->center).norm() > 0) {
        throw ArgumentError("second moment of a disk-clipped cell is taken about the disk center");
      }
      Scalar area = 0, moment = 0;
      integrate(area, moment);
      return std::max(Scalar(0), moment);
    }
    Scalar acc = 0;
    for (std::size_t i = 0; i < polygon_.size(); ++i) {
      const Point p = polygon_[i] - about;
      const Point q = polygon_[(i + 1) % polygon_.size()] - about;
      acc += Scalar(0.5) * detail::cross(p, q) / Scalar(6) * (p.squaredNorm() + q.squaredNorm() + p.dot(q));
    }
    return acc;
  }

  // Disk lies entirely inside the half-planes: the boundary is the full circle.
  bool full_disk() const {
    if (!disk_ || polygon_.size() < 3) return false;
    for (const auto& h : halfplanes_) {
      if (h.normal.dot(disk_->center) + disk_->radius * h.normal.norm() > h.offset) return false;
    }
    return true;
  }

  // Counter-clockwise boundary of (polygon ∩ disk). Empty for empty cells and
  // for full disks (see full_disk()).
  std::vector<BoundaryVertex<Scalar>> boundary() const {
    require_bounded();
    std::vector<BoundaryVertex<Scalar>> out;
    if (polygon_.size() < 3) return out;
    if (!disk_) {
      for (const auto& p : polygon_) out.push_back({p, false});
      return out;
    }
    if (full_disk()) return out;
    const Point c = disk_->center;
    const Scalar r = disk_->radius;
    const Scalar r2 = r * r * (1 + Scalar(1e-12));
    struct Mark {
      Point p;
      Scalar s;
    };
    std::vector<Mark> marks;
    const std::size_t n = polygon_.size();
    for (std::size_t i = 0; i < n; ++i) {
      const Point a = polygon_[i] - c;
      const Point b = polygon_[(i + 1) % n] - c;
      if (a.squaredNorm() <= r2) marks.push_back({polygon_[i], Scalar(i)});
      Scalar ts[2];
      const int k = detail::circle_crossings(a, b, r, ts);
      for (int j = 0; j < k; ++j) marks.push_back({c + a + ts[j] * (b - a), Scalar(i) + ts[j]});
    }
    if (marks.empty()) return out;
    for (std::size_t i = 0; i < marks.size(); ++i) {
      const Mark& cur = marks[i];
      const Mark& nxt = marks[(i + 1) % marks.size()];
      const bool same_edge = marks.size() > 1 && std::floor(cur.s) == std::floor(nxt.s) && nxt.s > cur.s;
      const auto next_edge = (static_cast<std::size_t>(std::floor(cur.s)) + 1) % n;
      const bool next_is_vertex = nxt.s == std::floor(nxt.s) && static_cast<std::size_t>(nxt.s) == next_edge;
      bool arc = true;
      if (same_edge || next_is_vertex) {
        arc = (Scalar(0.5) * (cur.p + nxt.p) - c).squaredNorm() > r2;
      }
      out.push_back({cur.p, arc});
    }
    return out;
  }

  // Every boundary turn is one-signed (left) and arcs bulge outward.
  bool is_convex(Scalar tol = Scalar(1e-9)) const {
    const auto bnd = boundary();
    if (bnd.size() < 2) return true;
    const std::size_t n = bnd.size();
    auto tangents = [&](std::size_t i, Point& start, Point& end) {
      const Point p = bnd[i].point;
      const Point q = bnd[(i + 1) % n].point;
      if (bnd[i].arc_to_next) {
        const Point u = p - disk_->center, v = q - disk_->center;
        start = Point(-u.y(), u.x());
        end = Point(-v.y(), v.x());
      } else {
        start = end = q - p;
      }
    };
    for (std::size_t i = 0; i < n; ++i) {
      Point s0, e0, s1, e1;
      tangents(i, s0, e0);
      tangents((i + 1) % n, s1, e1);
      if (e0.squaredNorm() == 0 || s1.squaredNorm() == 0) continue;
      if (detail::cross(e0, s1) < -tol * e0.norm() * s1.norm()) return false;
    }
    return true;
  }

 private:
  void require_bounded() const {
    if (!bounded_) throw ArgumentError("cell is unbounded and has no disk");
  }

  void integrate(Scalar& area, Scalar& moment) const {
    area = 0;
    moment = 0;
    const Point c = disk_->center;
    for (std::size_t i = 0; i < polygon_.size(); ++i) {
      Scalar a, m;
      detail::disk_triangle<Scalar>(polygon_[i] - c, polygon_[(i + 1) % polygon_.size()] - c, disk_->radius, a, m);
      area += a;
      moment += m;
    }
  }

  void rebuild() {
    Point lo, hi;
    const Scalar big = Scalar(1e7);
    if (disk_) {
      if (!(disk_->radius >= 0)) throw ArgumentError("disk radius must be nonnegative");
      lo = disk_->center.array() - 2 * disk_->radius;
      hi = disk_->center.array() + 2 * disk_->radius;
    } else {
      lo = Point(-big, -big);
      hi = Point(big, big);
    }
    polygon_ = {lo, Point(hi.x(), lo.y()), hi, Point(lo.x(), hi.y())};
    for (const auto& h : halfplanes_) polygon_ = detail::clip(polygon_, h);
    bounded_ = true;
    if (!disk_) {
      for (const auto& p : polygon_) {
        if (std::abs(p.x()) >= big * Scalar(0.999) || std::abs(p.y()) >= big * Scalar(0.999)) bounded_ = false;
      }
    }
  }

  std::vector<HalfPlane<Scalar>> halfplanes_;
  std::optional<Disk<Scalar>> disk_;
  std::vector<Point> polygon_;
  bool bounded_ = true;
};

// Exact area of (∩ half-planes) ∩ disk. Throws ArgumentError for unbounded cells.
template <typename Scalar>
Scalar polygon_disk_area(const ConvexCell<Scalar>& cell) {
  return cell.area();
}

}  // namespace semicouple

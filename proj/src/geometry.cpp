#include "semicouple/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>

#include "semicouple/errors.hpp"

namespace semicouple {

bool Box::contains(const Eigen::Ref<const Vector>& x) const {
  for (int k = 0; k < dim(); ++k) {
    if (x[k] < lower[k] || x[k] >= lower[k] + extent[k]) return false;
  }
  return true;
}

bool Box::contains(const Box& other) const {
  for (int k = 0; k < dim(); ++k) {
    if (other.lower[k] < lower[k] || other.lower[k] + other.extent[k] > lower[k] + extent[k]) return false;
  }
  return true;
}

bool Box::intersects(const Box& other) const {
  for (int k = 0; k < dim(); ++k) {
    if (other.lower[k] >= lower[k] + extent[k] || lower[k] >= other.lower[k] + other.extent[k]) return false;
  }
  return true;
}

bool operator==(const Box& a, const Box& b) {
  return a.lower.size() == b.lower.size() && a.lower == b.lower && a.extent == b.extent;
}

IntVector DyadicBox::lower_corner() const {
  IntVector corner = z;
  for (int k = 1; k <= n; ++k) corner -= (1 << (k - 1)) * gamma[static_cast<std::size_t>(k - 1)];
  return corner;
}

Box DyadicBox::box() const {
  return Box::cube(lower_corner().cast<double>(), static_cast<double>(edge()));
}

DyadicBox doubling_box(const IntVector& z, const std::vector<IntVector>& gamma, int n) {
  if (n < 0) throw ArgumentError("doubling_box needs n >= 0");
  if (static_cast<int>(gamma.size()) < n) throw ArgumentError("doubling word shorter than generation");
  if (n > 30) throw ArgumentError("doubling_box generation too large");
  for (int k = 0; k < n; ++k) {
    const auto& w = gamma[static_cast<std::size_t>(k)];
    if (w.size() != z.size()) throw ArgumentError("doubling word dimension mismatch");
    if ((w.array() < 0).any() || (w.array() > 1).any()) throw ArgumentError("doubling word entries must be 0 or 1");
  }
  return DyadicBox{z, n, std::vector<IntVector>(gamma.begin(), gamma.begin() + n)};
}

std::vector<DyadicBox> subdivide(const DyadicBox& box) {
  if (box.n < 1) throw ArgumentError("cannot subdivide a generation-0 box");
  const int d = box.dim();
  const IntVector corner = box.lower_corner();
  const int half = 1 << (box.n - 1);
  std::vector<IntVector> prefix(box.gamma.begin(), box.gamma.end() - 1);
  IntVector shift = IntVector::Zero(d);
  for (int k = 1; k < box.n; ++k) shift += (1 << (k - 1)) * prefix[static_cast<std::size_t>(k - 1)];
  std::vector<DyadicBox> children;
  children.reserve(std::size_t{1} << d);
  for (int idx = 0; idx < (1 << d); ++idx) {
    IntVector child_corner = corner;
    for (int k = 0; k < d; ++k) {
      if (idx & (1 << k)) child_corner[k] += half;
    }
    children.push_back(DyadicBox{child_corner + shift, box.n - 1, prefix});
  }
  return children;
}

std::vector<Box> subdivide(const Box& box) {
  const int d = box.dim();
  std::vector<Box> children;
  const Vector half = 0.5 * box.extent;
  for (int idx = 0; idx < (1 << d); ++idx) {
    Vector lo = box.lower;
    for (int k = 0; k < d; ++k) {
      if (idx & (1 << k)) lo[k] += half[k];
    }
    children.push_back(Box{lo, half});
  }
  return children;
}

std::pair<Box, Box> cuboid_chain(const Box& box, int axis) {
  if (axis < 1 || axis > box.dim()) throw ArgumentError("cuboid_chain axis out of range");
  const int k = axis - 1;
  Box first = box;
  first.extent[k] *= 0.5;
  Box second = first;
  second.lower[k] += first.extent[k];
  return {first, second};
}

PointPattern::PointPattern(Box domain) : points_(domain.dim(), 0), domain_(std::move(domain)) {}

PointPattern::PointPattern(PointMatrix points, Box domain)
    : PointPattern(std::move(points), {}, std::move(domain), 1) {}

PointPattern::PointPattern(PointMatrix points, std::vector<int> multiplicities, Box domain, int denominator)
    : domain_(std::move(domain)), denom_(denominator) {
  if (denominator < 1) throw ArgumentError("mass denominator must be positive");
  if (points.rows() != domain_.dim()) throw ArgumentError("point dimension does not match domain");
  if (multiplicities.empty()) multiplicities.assign(static_cast<std::size_t>(points.cols()), 1);
  if (static_cast<Eigen::Index>(multiplicities.size()) != points.cols()) {
    throw ArgumentError("one multiplicity per point required");
  }
  // duplicates merge into multiplicity, first occurrence keeps its slot
  std::map<std::vector<double>, int> slot;
  std::vector<int> keep;
  for (Eigen::Index i = 0; i < points.cols(); ++i) {
    const int k = multiplicities[static_cast<std::size_t>(i)];
    if (k < 1) throw ArgumentError("multiplicities must be positive");
    if (!domain_.contains(points.col(i))) throw ArgumentError("point outside pattern domain");
    std::vector<double> key(points.col(i).data(), points.col(i).data() + points.rows());
    auto [it, inserted] = slot.emplace(std::move(key), static_cast<int>(keep.size()));
    if (inserted) {
      keep.push_back(static_cast<int>(i));
      mult_.push_back(k);
    } else {
      mult_[static_cast<std::size_t>(it->second)] += k;
    }
  }
  points_.resize(points.rows(), static_cast<Eigen::Index>(keep.size()));
  for (std::size_t j = 0; j < keep.size(); ++j) points_.col(static_cast<Eigen::Index>(j)) = points.col(keep[j]);
}

long long PointPattern::total_multiplicity() const {
  return std::accumulate(mult_.begin(), mult_.end(), 0LL);
}

PointPattern PointPattern::restricted(const Box& region, std::vector<int>* index_map) const {
  std::vector<int> idx;
  for (int i = 0; i < size(); ++i) {
    if (region.contains(point(i))) idx.push_back(i);
  }
  PointMatrix pts(dim(), static_cast<Eigen::Index>(idx.size()));
  std::vector<int> mult;
  for (std::size_t j = 0; j < idx.size(); ++j) {
    pts.col(static_cast<Eigen::Index>(j)) = point(idx[j]);
    mult.push_back(multiplicity(idx[j]));
  }
  if (index_map) *index_map = idx;
  PointPattern out(region);
  out.points_ = std::move(pts);
  out.mult_ = std::move(mult);
  out.denom_ = denom_;
  return out;
}

PointPattern PointPattern::translated(const Vector& shift) const {
  PointPattern out = *this;
  out.points_.colwise() += shift;
  out.domain_ = domain_.translated(shift);
  return out;
}

PointPattern PointPattern::with_domain(Box domain) const {
  for (int i = 0; i < size(); ++i) {
    if (!domain.contains(point(i))) throw ArgumentError("point outside new pattern domain");
  }
  PointPattern out = *this;
  out.domain_ = std::move(domain);
  return out;
}

GridMeasure::GridMeasure(const Box& window, int m) : lower_(window.lower), m_(m) {
  if (m < 1) throw ArgumentError("grid resolution must be positive");
  const int d = window.dim();
  if (d < 1 || d > 3) throw ArgumentError("grid dimension must be 1, 2 or 3");
  counts_.resize(static_cast<std::size_t>(d));
  strides_.resize(static_cast<std::size_t>(d));
  num_cells_ = 1;
  for (int k = 0; k < d; ++k) {
    const double cells = window.extent[k] * m;
    const double rounded = std::round(cells);
    if (rounded < 1 || std::abs(cells - rounded) > 1e-9 * std::max(1.0, cells)) {
      throw ArgumentError("window extent is not a whole number of grid cells");
    }
    counts_[static_cast<std::size_t>(k)] = static_cast<int>(rounded);
    strides_[static_cast<std::size_t>(k)] = num_cells_;
    num_cells_ *= static_cast<std::size_t>(rounded);
  }
  cell_mass_ = std::pow(static_cast<double>(m), -d);
}

Box GridMeasure::window() const {
  Vector extent(dim());
  for (int k = 0; k < dim(); ++k) extent[k] = static_cast<double>(counts_[static_cast<std::size_t>(k)]) / m_;
  return Box{lower_, extent};
}

void GridMeasure::set_cell_mass(double mass) {
  if (!(mass > 0.0)) throw ArgumentError("cell mass must be positive");
  cell_mass_ = mass;
}

double GridMeasure::center_coord(std::size_t idx, int axis) const {
  const std::size_t i = (idx / strides_[static_cast<std::size_t>(axis)]) %
                        static_cast<std::size_t>(counts_[static_cast<std::size_t>(axis)]);
  return lower_[axis] + (static_cast<double>(i) + 0.5) / m_;
}

Vector GridMeasure::center(std::size_t idx) const {
  Vector c(dim());
  for (int k = 0; k < dim(); ++k) c[k] = center_coord(idx, k);
  return c;
}

std::vector<int> GridMeasure::multi_index(std::size_t idx) const {
  std::vector<int> out(counts_.size());
  for (std::size_t k = 0; k < counts_.size(); ++k) {
    out[k] = static_cast<int>((idx / strides_[k]) % static_cast<std::size_t>(counts_[k]));
  }
  return out;
}

std::size_t GridMeasure::linear_index(const std::vector<int>& multi) const {
  std::size_t idx = 0;
  for (std::size_t k = 0; k < counts_.size(); ++k) {
    if (multi[k] < 0 || multi[k] >= counts_[k]) throw ArgumentError("grid index out of range");
    idx += static_cast<std::size_t>(multi[k]) * strides_[k];
  }
  return idx;
}

std::optional<std::size_t> GridMeasure::cell_containing(const Eigen::Ref<const Vector>& x) const {
  std::vector<int> multi(counts_.size());
  for (std::size_t k = 0; k < counts_.size(); ++k) {
    const double t = (x[static_cast<Eigen::Index>(k)] - lower_[static_cast<Eigen::Index>(k)]) * m_;
    const double f = std::floor(t);
    if (f < 0 || f >= counts_[k]) return std::nullopt;
    multi[k] = static_cast<int>(f);
  }
  return linear_index(multi);
}

bool GridMeasure::on_boundary(std::size_t idx) const {
  for (std::size_t k = 0; k < counts_.size(); ++k) {
    const int i = static_cast<int>((idx / strides_[k]) % static_cast<std::size_t>(counts_[k]));
    if (i == 0 || i == counts_[k] - 1) return true;
  }
  return false;
}

void GridMeasure::set_mask(std::vector<std::uint8_t> mask) {
  if (!mask.empty() && mask.size() != num_cells_) throw ArgumentError("mask size does not match grid");
  mask_ = std::move(mask);
}

std::size_t GridMeasure::num_active() const {
  if (mask_.empty()) return num_cells_;
  return static_cast<std::size_t>(std::count_if(mask_.begin(), mask_.end(), [](auto v) { return v != 0; }));
}

bool operator==(const GridMeasure& a, const GridMeasure& b) {
  if (a.dim() != b.dim() || a.m() != b.m() || a.counts() != b.counts() || a.lower() != b.lower() ||
      a.cell_mass() != b.cell_mass()) {
    return false;
  }
  for (std::size_t i = 0; i < a.num_cells(); ++i) {
    if (a.active(i) != b.active(i)) return false;
  }
  return true;
}

}  // namespace semicouple

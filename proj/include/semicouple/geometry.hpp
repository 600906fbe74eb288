#pragma once

#include <Eigen/Core>
#include <cstdint>
#include <optional>
#include <utility>
#include <vector>

namespace semicouple {

using Vector = Eigen::VectorXd;
using IntVector = Eigen::VectorXi;
// d x N, one point per column
using PointMatrix = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic>;

// Axis-aligned half-open box lower + [0, extent).
struct Box {
  Vector lower;
  Vector extent;

  static Box cube(const Vector& lower, double edge) {
    return Box{lower, Vector::Constant(lower.size(), edge)};
  }
  static Box unit(int d) { return cube(Vector::Zero(d), 1.0); }

  int dim() const { return static_cast<int>(lower.size()); }
  Vector upper() const { return lower + extent; }
  double volume() const { return extent.prod(); }
  double diameter() const { return extent.norm(); }
  bool contains(const Eigen::Ref<const Vector>& x) const;
  bool contains(const Box& other) const;
  bool intersects(const Box& other) const;
  Box translated(const Vector& shift) const { return Box{lower + shift, extent}; }
  Box enlarged(double margin) const {
    return Box{lower.array() - margin, extent.array() + 2.0 * margin};
  }
};

bool operator==(const Box& a, const Box& b);

// Dyadic box B_n(z, gamma) = z - sum_{k=1}^n 2^{k-1} gamma_k + [0, 2^n)^d.
struct DyadicBox {
  IntVector z;
  int n = 0;
  std::vector<IntVector> gamma;  // the first n doubling words

  int dim() const { return static_cast<int>(z.size()); }
  IntVector lower_corner() const;
  long long edge() const { return 1LL << n; }
  Box box() const;
};

DyadicBox doubling_box(const IntVector& z, const std::vector<IntVector>& gamma, int n);

// The 2^d generation-(n-1) children of a dyadic box, bit k of the child index
// selecting the upper half along axis k.
std::vector<DyadicBox> subdivide(const DyadicBox& box);
// Same split for a plain box (halving every axis).
std::vector<Box> subdivide(const Box& box);

// Split a cuboid into two congruent halves along axis k (1-based).
std::pair<Box, Box> cuboid_chain(const Box& box, int axis);

// Finite multiset of target points with multiplicities k(xi) / denominator.
class PointPattern {
 public:
  explicit PointPattern(Box domain);
  PointPattern(PointMatrix points, std::vector<int> multiplicities, Box domain, int denominator = 1);
  // unit multiplicities
  PointPattern(PointMatrix points, Box domain);

  int dim() const { return domain_.dim(); }
  int size() const { return static_cast<int>(points_.cols()); }
  bool empty() const { return size() == 0; }
  const PointMatrix& points() const { return points_; }
  auto point(int i) const { return points_.col(i); }
  int multiplicity(int i) const { return mult_[static_cast<std::size_t>(i)]; }
  const std::vector<int>& multiplicities() const { return mult_; }
  int denominator() const { return denom_; }
  double mass(int i) const { return static_cast<double>(multiplicity(i)) / denom_; }
  long long total_multiplicity() const;
  double total_mass() const { return static_cast<double>(total_multiplicity()) / denom_; }
  const Box& domain() const { return domain_; }

  // Targets inside `region`; index_map[i] is the index in *this of target i.
  PointPattern restricted(const Box& region, std::vector<int>* index_map = nullptr) const;
  PointPattern translated(const Vector& shift) const;
  PointPattern with_domain(Box domain) const;

 private:
  PointMatrix points_;
  std::vector<int> mult_;
  Box domain_;
  int denom_ = 1;
};

// Lebesgue measure on a box discretised into m^d cells per unit volume; the
// mass of every cell sits at its center.
class GridMeasure {
 public:
  // `window` extents times m must be integers.
  GridMeasure(const Box& window, int m);

  int dim() const { return static_cast<int>(lower_.size()); }
  int m() const { return m_; }
  const std::vector<int>& counts() const { return counts_; }
  std::size_t num_cells() const { return num_cells_; }
  const Vector& lower() const { return lower_; }
  Box window() const;
  double cell_width() const { return 1.0 / m_; }

  double cell_mass() const { return cell_mass_; }
  void set_cell_mass(double mass);

  Vector center(std::size_t idx) const;
  double center_coord(std::size_t idx, int axis) const;
  std::vector<int> multi_index(std::size_t idx) const;
  std::size_t linear_index(const std::vector<int>& multi) const;
  std::optional<std::size_t> cell_containing(const Eigen::Ref<const Vector>& x) const;
  bool on_boundary(std::size_t idx) const;

  bool active(std::size_t idx) const { return mask_.empty() || mask_[idx] != 0; }
  const std::vector<std::uint8_t>& mask() const { return mask_; }
  void set_mask(std::vector<std::uint8_t> mask);
  std::size_t num_active() const;
  double total_mass() const { return static_cast<double>(num_active()) * cell_mass_; }

 private:
  Vector lower_;
  std::vector<int> counts_;
  std::vector<std::size_t> strides_;
  std::size_t num_cells_ = 0;
  int m_ = 1;
  double cell_mass_ = 1.0;
  std::vector<std::uint8_t> mask_;
};

bool operator==(const GridMeasure& a, const GridMeasure& b);

}  // namespace semicouple

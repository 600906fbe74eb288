#pragma once

#include <Eigen/Core>
#include <vector>

#include "semicouple/convex_cell.hpp"
#include "semicouple/geometry.hpp"
#include "semicouple/scales.hpp"

namespace semicouple {

// Quadratic-cost semicoupling in the plane. With weights w, target j gets
//   { x : |x - xi_j|^2 - w_j <= min(0, min_j' |x - xi_j'|^2 - w_j') },
// a power-diagram polygon cut by the disk of radius sqrt(w_j) around xi_j.
struct DiagramEvaluation {
  std::vector<ConvexCell<double>> cells;
  Eigen::VectorXd areas;
  Eigen::VectorXd moments;  // int_cell |x - xi_j|^2 dx
  double cost = 0.0;
  // concave dual sum_j w_j k_j + sum_j int_cell (|x - xi_j|^2 - w_j) dx
  double dual = 0.0;
};

DiagramEvaluation diagram_cost_and_grad(const PointPattern& pattern, const Eigen::VectorXd& weights);

// Derivative of the cell areas in the weights (symmetric, diagonally dominant).
Eigen::MatrixXd area_jacobian(const PointPattern& pattern, const Eigen::VectorXd& weights,
                              const DiagramEvaluation& eval);

struct LaguerreOptions {
  double tolerance = 1e-10;  // max |area - mass|
  int max_iterations = 100;
  double min_weight = 1e-8;
};

struct LaguerreDiagram {
  PointPattern pattern;
  Eigen::VectorXd weights;
  std::vector<ConvexCell<double>> cells;
  Eigen::VectorXd areas;
  double cost = 0.0;
  int iterations = 0;
  double residual = 0.0;

  // Target whose cell contains x, or -1 outside every cell.
  int target_at(const Eigen::Vector2d& x) const;
};

// Damped Newton on the dual. Throws UnsupportedError unless d = 2 and the scale
// is r^2, ConvergenceError when the residual stays above tolerance.
LaguerreDiagram solve_laguerre(const PointPattern& pattern, const CostScale& scale = CostScale::power(2.0),
                               const LaguerreOptions& options = {});

}  // namespace semicouple

#include "semicouple/laguerre.hpp"

#include <Eigen/Dense>
#include <cmath>
#include <limits>

#include "semicouple/errors.hpp"

namespace semicouple {

namespace {

using Vec = Eigen::Vector2d;

constexpr int kMaxHalvings = 40;

void require_planar(const PointPattern& pattern, const Eigen::VectorXd& weights) {
  if (pattern.dim() != 2) throw UnsupportedError("Laguerre cells are computed in the plane only");
  if (weights.size() != pattern.size()) throw ArgumentError("one weight per target required");
}

Vec site(const PointPattern& pattern, int j) { return pattern.point(j); }

// Power bisector of j against j', as a half-plane containing j's side.
HalfPlane<double> bisector(const Vec& a, double wa, const Vec& b, double wb) {
  return HalfPlane<double>{2.0 * (b - a), b.squaredNorm() - a.squaredNorm() + wa - wb};
}

ConvexCell<double> build_cell(const PointPattern& pattern, const Eigen::VectorXd& w, int j,
                              std::vector<int>* neighbours) {
  const Vec a = site(pattern, j);
  const double ra = std::sqrt(std::max(0.0, w[j]));
  std::vector<HalfPlane<double>> hs;
  for (int k = 0; k < pattern.size(); ++k) {
    if (k == j) continue;
    const Vec b = site(pattern, k);
    const double rb = std::sqrt(std::max(0.0, w[k]));
    // disjoint disks never constrain each other
    if ((b - a).norm() >= ra + rb) continue;
    hs.push_back(bisector(a, w[j], b, w[k]));
    if (neighbours) neighbours->push_back(k);
  }
  return ConvexCell<double>(std::move(hs), Disk<double>{a, ra});
}

Eigen::VectorXd masses(const PointPattern& pattern) {
  Eigen::VectorXd k(pattern.size());
  for (int j = 0; j < pattern.size(); ++j) k[j] = pattern.mass(j);
  return k;
}

double ccw_angle(const Vec& u, const Vec& v) {
  double t = std::atan2(u.x() * v.y() - u.y() * v.x(), u.dot(v));
  if (t <= 0) t += 2.0 * M_PI;
  return t;
}

}  // namespace

DiagramEvaluation diagram_cost_and_grad(const PointPattern& pattern, const Eigen::VectorXd& weights) {
  require_planar(pattern, weights);
  DiagramEvaluation out;
  const int n = pattern.size();
  out.areas.resize(n);
  out.moments.resize(n);
  out.cells.reserve(static_cast<std::size_t>(n));
  const Eigen::VectorXd k = masses(pattern);
  for (int j = 0; j < n; ++j) {
    out.cells.push_back(build_cell(pattern, weights, j, nullptr));
    const auto& cell = out.cells.back();
    out.areas[j] = cell.area();
    out.moments[j] = cell.second_moment(site(pattern, j));
  }
  out.cost = out.moments.sum();
  out.dual = weights.dot(k) + out.cost - weights.dot(out.areas);
  return out;
}

Eigen::MatrixXd area_jacobian(const PointPattern& pattern, const Eigen::VectorXd& weights,
                              const DiagramEvaluation& eval) {
  require_planar(pattern, weights);
  const int n = pattern.size();
  Eigen::MatrixXd jac = Eigen::MatrixXd::Zero(n, n);
  for (int j = 0; j < n; ++j) {
    const auto& cell = eval.cells[static_cast<std::size_t>(j)];
    if (eval.areas[j] <= 0) continue;
    const Vec a = site(pattern, j);
    const double r = std::sqrt(std::max(0.0, weights[j]));
    if (cell.full_disk()) {
      jac(j, j) += M_PI;  // d(pi w)/dw
      continue;
    }
    const auto bnd = cell.boundary();
    const auto& hs = cell.halfplanes();
    for (std::size_t v = 0; v < bnd.size(); ++v) {
      const Vec p = bnd[v].point;
      const Vec q = bnd[(v + 1) % bnd.size()].point;
      if (bnd[v].arc_to_next) {
        const double len = r * ccw_angle(p - a, q - a);
        if (r > 0) jac(j, j) += len / (2.0 * r);
        continue;
      }
      const double len = (q - p).norm();
      if (len <= 0) continue;
      // identify the bisector carrying this edge
      const Vec mid = 0.5 * (p + q);
      int best = -1;
      double best_gap = std::numeric_limits<double>::infinity();
      for (std::size_t h = 0; h < hs.size(); ++h) {
        const double gap = std::abs(hs[h].normal.dot(mid) - hs[h].offset) / hs[h].normal.norm();
        if (gap < best_gap) {
          best_gap = gap;
          best = static_cast<int>(h);
        }
      }
      if (best < 0) continue;
      // recover the neighbour from the half-plane normal 2 (xi_k - xi_j)
      const Vec other = a + 0.5 * hs[static_cast<std::size_t>(best)].normal;
      int k = -1;
      double closest = std::numeric_limits<double>::infinity();
      for (int c = 0; c < n; ++c) {
        if (c == j) continue;
        const double dd = (site(pattern, c) - other).squaredNorm();
        if (dd < closest) {
          closest = dd;
          k = c;
        }
      }
      const double sep = (site(pattern, k) - a).norm();
      const double rate = len / (2.0 * sep);
      jac(j, j) += rate;
      jac(j, k) -= rate;
    }
  }
  // each shared facet is seen from both sides; average out rounding asymmetry
  return 0.5 * (jac + jac.transpose());
}

int LaguerreDiagram::target_at(const Eigen::Vector2d& x) const {
  int best = -1;
  double score = 0.0;
  for (int j = 0; j < pattern.size(); ++j) {
    const double s = (x - Vec(pattern.point(j))).squaredNorm() - weights[j];
    if (s <= score) {
      if (best < 0 || s < score) best = j;
      score = s;
    }
  }
  return best;
}

LaguerreDiagram solve_laguerre(const PointPattern& pattern, const CostScale& scale, const LaguerreOptions& options) {
  if (pattern.dim() != 2) throw UnsupportedError("Laguerre solver needs d = 2");
  if (!scale.is_power(2.0)) throw UnsupportedError("Laguerre solver needs the quadratic cost r^2");
  if (pattern.empty()) throw ArgumentError("Laguerre solver needs a nonempty pattern");
  const Eigen::VectorXd k = masses(pattern);
  Eigen::VectorXd w = k / M_PI;
  DiagramEvaluation eval = diagram_cost_and_grad(pattern, w);
  Eigen::VectorXd res = k - eval.areas;
  int it = 0;
  while (res.cwiseAbs().maxCoeff() > options.tolerance) {
    if (it >= options.max_iterations) {
      throw ConvergenceError("Laguerre Newton iteration did not converge", res.cwiseAbs().maxCoeff(), it);
    }
    ++it;
    const Eigen::MatrixXd jac = area_jacobian(pattern, w, eval);
    Eigen::VectorXd step = jac.ldlt().solve(res);
    if (!step.allFinite()) step = res;
    const double min_area = std::min(eval.areas.minCoeff(), k.minCoeff());
    const double norm0 = res.norm();
    double tau = 1.0;
    bool accepted = false;
    for (int h = 0; h < kMaxHalvings; ++h, tau *= 0.5) {
      Eigen::VectorXd trial = (w + tau * step).cwiseMax(options.min_weight);
      DiagramEvaluation te = diagram_cost_and_grad(pattern, trial);
      const Eigen::VectorXd tres = k - te.areas;
      if (te.areas.minCoeff() >= 0.5 * min_area && tres.norm() <= (1.0 - 0.5 * tau) * norm0) {
        w = std::move(trial);
        eval = std::move(te);
        res = tres;
        accepted = true;
        break;
      }
    }
    if (!accepted) {
      throw ConvergenceError("Laguerre line search failed", res.cwiseAbs().maxCoeff(), it);
    }
  }
  LaguerreDiagram out{pattern, w, std::move(eval.cells), eval.areas, eval.cost, it, res.cwiseAbs().maxCoeff()};
  return out;
}

}  // namespace semicouple

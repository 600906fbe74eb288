#include "semicouple/scales.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "semicouple/errors.hpp"
#include "semicouple/numerics.hpp"

namespace semicouple {

namespace {

constexpr int kValidationPoints = 2001;
constexpr double kValidationLo = 1e-9;
constexpr double kValidationHi = 1e9;
constexpr int kTailGridPoints = 4096;
constexpr double kTailHorizon = 1e6;

std::vector<double> log_grid(double lo, double hi, int n) {
  std::vector<double> g(n);
  const double step = std::log(hi / lo) / (n - 1);
  for (int i = 0; i < n; ++i) g[i] = lo * std::exp(step * i);
  g.back() = hi;
  return g;
}

}  // namespace

CostScale CostScale::power(double p) {
  if (!(p > 0.0) || !std::isfinite(p)) throw ArgumentError("power scale needs p > 0");
  CostScale s;
  s.kind_ = Kind::Power;
  s.p_ = p;
  return s;
}

CostScale CostScale::concave_log(int dimension, double alpha) {
  if (dimension < 1) throw ArgumentError("concave_log scale needs dimension >= 1");
  if (!(alpha > 0.0 && alpha <= 2.0)) throw ArgumentError("concave_log scale needs alpha in (0, 2]");
  CostScale s;
  s.kind_ = Kind::ConcaveLog;
  s.p_ = 0.5 * dimension;
  s.alpha_ = alpha;
  s.dim_ = dimension;

  const auto grid = log_grid(kValidationLo, kValidationHi, kValidationPoints);
  double prev = 0.0;
  for (double r : grid) {
    const double v = s.base(r);
    if (!(v > prev)) {
      std::ostringstream msg;
      msg << "concave_log(d=" << dimension << ", alpha=" << alpha
          << ") is not strictly increasing near r=" << r;
      throw ArgumentError(msg.str());
    }
    prev = v;
  }
  // Concavity onset: last probe where the discrete second difference turned positive.
  s.concave_from_ = 0.0;
  for (std::size_t i = 1; i + 1 < grid.size(); ++i) {
    const double h0 = grid[i] - grid[i - 1];
    const double h1 = grid[i + 1] - grid[i];
    const double slope0 = (s.base(grid[i]) - s.base(grid[i - 1])) / h0;
    const double slope1 = (s.base(grid[i + 1]) - s.base(grid[i])) / h1;
    if (slope1 > slope0 * (1.0 + 1e-12)) s.concave_from_ = grid[i + 1];
  }
  return s;
}

CostScale CostScale::table(std::vector<std::pair<double, double>> breakpoints) {
  if (breakpoints.empty()) throw ArgumentError("table scale needs at least one breakpoint");
  if (breakpoints.front().first != 0.0) breakpoints.insert(breakpoints.begin(), {0.0, 0.0});
  if (breakpoints.front().second != 0.0) throw ArgumentError("table scale needs theta(0) = 0");
  if (breakpoints.size() < 2) throw ArgumentError("table scale needs a breakpoint with r > 0");
  for (std::size_t i = 1; i < breakpoints.size(); ++i) {
    if (!(breakpoints[i].first > breakpoints[i - 1].first) ||
        !(breakpoints[i].second > breakpoints[i - 1].second)) {
      throw ArgumentError("table scale breakpoints must be strictly increasing in r and theta");
    }
  }
  CostScale s;
  s.kind_ = Kind::Table;
  s.table_ = std::move(breakpoints);
  return s;
}

double CostScale::base(double r) const {
  switch (kind_) {
    case Kind::Power:
      return std::pow(r, p_);
    case Kind::ConcaveLog:
      return std::pow(r, p_) * std::pow(1.0 + std::log1p(r), -alpha_);
    case Kind::Table: {
      const auto it = std::upper_bound(table_.begin(), table_.end(), r,
                                       [](double v, const auto& bp) { return v < bp.first; });
      std::size_t hi = static_cast<std::size_t>(it - table_.begin());
      if (hi == table_.size()) hi = table_.size() - 1;  // linear extension past the end
      const auto& [r1, v1] = table_[hi];
      const auto& [r0, v0] = table_[hi - 1];
      return v0 + (v1 - v0) * (r - r0) / (r1 - r0);
    }
  }
  return 0.0;
}

double CostScale::base_antiderivative(double r) const {
  switch (kind_) {
    case Kind::Power:
      return std::pow(r, p_ + 1.0) / (p_ + 1.0);
    case Kind::Table: {
      double acc = 0.0;
      for (std::size_t i = 1; i < table_.size(); ++i) {
        const double r0 = table_[i - 1].first;
        const double r1 = (i + 1 == table_.size()) ? std::max(r, table_[i].first) : table_[i].first;
        if (r <= r0) break;
        const double upper = std::min(r, r1);
        acc += 0.5 * (base(r0) + base(upper)) * (upper - r0);
      }
      return acc;
    }
    case Kind::ConcaveLog: {
      const auto f = [this](double s) { return base(s); };
      // Split at 1 so the s^{d/2} behaviour near zero gets its own panel.
      if (r <= 1.0) return numerics::integrate(f, 0.0, r, 1e-13);
      return numerics::integrate(f, 0.0, 1.0, 1e-13) + numerics::integrate(f, 1.0, r, 1e-13);
    }
  }
  return 0.0;
}

double CostScale::operator()(double r) const {
  if (unit_multipliers()) return base(r);
  return outer_ * base(inner_ * r);
}

double CostScale::from_squared(double r2) const {
  if (kind_ == Kind::Power && unit_multipliers()) {
    if (p_ == 2.0) return r2;
    if (p_ == 4.0) return r2 * r2;
    if (p_ == 1.0) return std::sqrt(r2);
    return std::pow(r2, 0.5 * p_);
  }
  return (*this)(std::sqrt(r2));
}

std::string CostScale::id() const {
  std::ostringstream os;
  os.precision(12);
  switch (kind_) {
    case Kind::Power:
      os << "power:" << p_;
      break;
    case Kind::ConcaveLog:
      os << "concave_log:" << dim_ << ":" << alpha_;
      break;
    case Kind::Table:
      os << "table:" << table_.size();
      break;
  }
  if (!unit_multipliers()) os << "*" << outer_ << "@" << inner_;
  return os.str();
}

double eval(const CostScale& scale, double r) {
  if (!(r >= 0.0)) throw DomainError("cost scale evaluated at negative radius");
  return scale(r);
}

double antiderivative(const CostScale& scale, double r) {
  if (!(r >= 0.0)) throw DomainError("antiderivative evaluated at negative radius");
  if (r == 0.0) return 0.0;
  return scale.outer() / scale.inner() * scale.base_antiderivative(scale.inner() * r);
}

double tail_sup(const CostScale& scale, double r, int d) {
  if (!(r > 0.0)) throw DomainError("tail_sup needs r > 0");
  if (d < 1) throw ArgumentError("tail_sup needs d >= 1");
  const double half_d = 0.5 * d;
  const auto ratio = [&](double s) { return scale(s) / std::pow(s, half_d); };
  const double r_max = kTailHorizon * r;
  if (scale.kind() == CostScale::Kind::Power) {
    if (scale.exponent() <= half_d) return ratio(r);
    return std::max(ratio(r), ratio(r_max));
  }
  double best = std::max(ratio(r), ratio(r_max));
  for (double s : log_grid(r, r_max, kTailGridPoints)) best = std::max(best, ratio(s));
  return best;
}

CostScale CostScale::with_multipliers(double outer, double inner) const {
  if (!(outer > 0.0) || !(inner > 0.0)) throw ArgumentError("scale multipliers must be positive");
  CostScale s = *this;
  s.outer_ = outer;
  s.inner_ = inner;
  return s;
}

CostScale rescaled(const CostScale& scale, double beta, int d) {
  if (!(beta > 0.0)) throw ArgumentError("rescaling needs beta > 0");
  if (d < 1) throw ArgumentError("rescaling needs d >= 1");
  CostScale s = scale;
  s.outer_ *= beta;
  s.inner_ *= std::pow(beta, 1.0 / d);
  return s;
}

}  // namespace semicouple

#include "optdesign/exchange.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>
#include <numeric>
#include <set>
#include <tuple>
#include <string>

#include "optdesign/certificate.hpp"
#include "optdesign/errors.hpp"
#include "optdesign/linalg.hpp"
#include "optdesign/parallel.hpp"

namespace optdesign {

CriterionNodes CriterionNodes::single(double beta) { return {{beta}, {1.0}, {0.0}}; }

namespace {

// Exchange gives up when kStallWindow steps gain less than kStallGain (relative).
constexpr int kStallWindow = 50;
constexpr double kStallGain = 1e-12;

struct Evaluation {
  double value = kMinusInfinity;
  std::vector<double> g;
  std::vector<double> mu;
  std::vector<InfoMatrix> inverse;

  bool finite() const { return value > kMinusInfinity; }
};

struct Support {
  std::vector<int> idx;
  std::vector<double> w;

  std::size_t size() const { return idx.size(); }
};

// Dense solve with partial pivoting; a is row-major n x n, overwritten.
bool solve_dense(std::vector<double>& a, std::vector<double>& b, int n) {
  for (int col = 0; col < n; ++col) {
    int pivot = col;
    for (int r = col + 1; r < n; ++r) {
      if (std::abs(a[r * n + col]) > std::abs(a[pivot * n + col])) pivot = r;
    }
    if (a[pivot * n + col] == 0.0) return false;
    if (pivot != col) {
      for (int c = 0; c < n; ++c) std::swap(a[col * n + c], a[pivot * n + c]);
      std::swap(b[col], b[pivot]);
    }
    for (int r = col + 1; r < n; ++r) {
      const double f = a[r * n + col] / a[col * n + col];
      if (f == 0.0) continue;
      for (int c = col; c < n; ++c) a[r * n + c] -= f * a[col * n + c];
      b[r] -= f * b[col];
    }
  }
  for (int r = n - 1; r >= 0; --r) {
    double s = b[r];
    for (int c = r + 1; c < n; ++c) s -= a[r * n + c] * b[c];
    b[r] = s / a[r * n + r];
  }
  return true;
}

class Engine {
 public:
  Engine(const ModelSpec& model, const CriterionNodes& nodes, const ExchangeOptions& options)
      : model_(model),
        nodes_(nodes),
        options_(options),
        m_(model.m),
        num_nodes_(static_cast<int>(nodes.size())) {}

  void set_tau(double tau) { tau_ = tau; }

  void add_candidates(const std::vector<double>& xs) {
    std::vector<double> fresh;
    for (double x : xs) {
      if (!model_.design_interval.contains(x)) continue;
      if (known_.insert(x).second) fresh.push_back(x);
    }
    if (fresh.empty()) return;
    const std::size_t first = xs_.size();
    xs_.insert(xs_.end(), fresh.begin(), fresh.end());
    scores_.resize(xs_.size() * num_nodes_ * m_);
    parallel_for(fresh.size(), [&](std::size_t i) {
      const std::size_t k = first + i;
      for (int j = 0; j < num_nodes_; ++j) {
        model_.score(xs_[k], nodes_.betas[j],
                     std::span<double>(&scores_[(k * num_nodes_ + j) * m_], m_));
      }
    });
    order_.resize(xs_.size());
    std::iota(order_.begin(), order_.end(), 0);
    std::sort(order_.begin(), order_.end(), [&](int a, int b) { return xs_[a] < xs_[b]; });
  }

  int index_of(double x) const {
    for (std::size_t k = 0; k < xs_.size(); ++k) {
      if (xs_[k] == x) return static_cast<int>(k);
    }
    return -1;
  }

  Evaluation evaluate(const Support& s) const {
    Evaluation ev;
    ev.g.resize(num_nodes_);
    ev.inverse.reserve(num_nodes_);
    for (int j = 0; j < num_nodes_; ++j) {
      InfoMatrix info(m_);
      for (std::size_t i = 0; i < s.size(); ++i) {
        if (s.w[i] != 0.0) info.add_outer(s.w[i], score(s.idx[i], j));
      }
      auto inv = info.inverse();
      if (!inv) return Evaluation{};
      ev.g[j] = std::log(info.determinant()) - nodes_.offsets[j];
      ev.inverse.push_back(*inv);
    }
    aggregate(ev);
    return ev;
  }

  double derivative(int k, const Evaluation& ev) const {
    double d = 0.0;
    for (int j = 0; j < num_nodes_; ++j) {
      if (ev.mu[j] == 0.0) continue;
      d += ev.mu[j] * ev.inverse[j].quadratic(score(k, j));
    }
    return d;
  }

  std::vector<double> all_derivatives(const Evaluation& ev) const {
    std::vector<double> d(xs_.size());
    parallel_for(xs_.size(), [&](std::size_t k) { d[k] = derivative(static_cast<int>(k), ev); });
    return d;
  }

  // Lowest x wins ties.
  int argmax_in_order(const std::vector<double>& d) const {
    int best = order_.front();
    for (int k : order_) {
      if (d[k] > d[best]) best = k;
    }
    return best;
  }

  Support full_support() const {
    Support s;
    s.idx.resize(xs_.size());
    std::iota(s.idx.begin(), s.idx.end(), 0);
    s.w.assign(xs_.size(), 1.0 / static_cast<double>(xs_.size()));
    return s;
  }

  // Multiplicative warm start over every candidate, then condensation of the
  // resulting mass into one representative per cluster of heavy grid points.
  std::optional<Support> multiplicative_start(int iterations) const {
    Support s = full_support();
    for (int t = 0; t < iterations; ++t) {
      const Evaluation ev = evaluate(s);
      if (!ev.finite()) return std::nullopt;
      const auto d = all_derivatives(ev);
      double total = 0.0;
      for (std::size_t k = 0; k < s.size(); ++k) {
        s.w[k] *= d[k] / m_;
        total += s.w[k];
      }
      for (double& w : s.w) w /= total;
    }
    const double heaviest = *std::max_element(s.w.begin(), s.w.end());
    const double threshold = 1e-3 * heaviest;
    Support condensed;
    int rep = -1;
    double mass = 0.0;
    for (int k : order_) {
      if (s.w[k] >= threshold) {
        if (rep < 0 || s.w[k] > s.w[rep]) rep = k;
        mass += s.w[k];
      } else if (rep >= 0) {
        condensed.idx.push_back(rep);
        condensed.w.push_back(mass);
        rep = -1;
        mass = 0.0;
      }
    }
    if (rep >= 0) {
      condensed.idx.push_back(rep);
      condensed.w.push_back(mass);
    }
    normalize(condensed);
    if (!evaluate(condensed).finite()) return std::nullopt;
    return condensed;
  }

  Support spread_start() const {
    Support s;
    const int count = std::min<int>(2 * m_ + 1, static_cast<int>(order_.size()));
    for (int i = 0; i < count; ++i) {
      const std::size_t pos = (order_.size() - 1) * i / std::max(1, count - 1);
      s.idx.push_back(order_[pos]);
      s.w.push_back(1.0);
    }
    normalize(s);
    return s;
  }

  // Newton ascent on the support weights within the simplex face.
  void newton(Support& s, std::vector<double>& trace) const {
    for (int it = 0; it < options_.max_newton_iterations; ++it) {
      const Evaluation ev = evaluate(s);
      if (!ev.finite()) throw InternalError("support design became singular");
      const int n = static_cast<int>(s.size());
      if (n <= 1) return;

      std::vector<double> grad(n);
      for (int k = 0; k < n; ++k) grad[k] = derivative(s.idx[k], ev);

      // P = -Hessian.
      std::vector<double> p(static_cast<std::size_t>(n) * n, 0.0);
      std::vector<double> dj(n);
      for (int j = 0; j < num_nodes_; ++j) {
        const double mu = ev.mu[j];
        if (mu == 0.0) continue;
        for (int k = 0; k < n; ++k) {
          for (int l = k; l < n; ++l) {
            const double a = ev.inverse[j].bilinear(score(s.idx[k], j), score(s.idx[l], j));
            p[k * n + l] += mu * a * a;
            if (k == l) dj[k] = a;
          }
        }
        if (options_.aggregation == Aggregation::kSoftMin) {
          for (int k = 0; k < n; ++k) {
            for (int l = k; l < n; ++l) p[k * n + l] += tau_ * mu * dj[k] * dj[l];
          }
        }
      }
      if (options_.aggregation == Aggregation::kSoftMin) {
        for (int k = 0; k < n; ++k) {
          for (int l = k; l < n; ++l) p[k * n + l] -= tau_ * grad[k] * grad[l];
        }
      }
      double diag_max = 0.0;
      for (int k = 0; k < n; ++k) {
        for (int l = 0; l < k; ++l) p[k * n + l] = p[l * n + k];
        diag_max = std::max(diag_max, p[k * n + k]);
      }
      const double ridge = 1e-10 * diag_max + 1e-300;

      // KKT system [P + ridge I, 1; 1^T, 0] [step; nu] = [grad; 0].
      const int dim = n + 1;
      std::vector<double> kkt(static_cast<std::size_t>(dim) * dim, 0.0);
      std::vector<double> rhs(dim, 0.0);
      for (int k = 0; k < n; ++k) {
        for (int l = 0; l < n; ++l) kkt[k * dim + l] = p[k * n + l];
        kkt[k * dim + k] += ridge;
        kkt[k * dim + n] = 1.0;
        kkt[n * dim + k] = 1.0;
        rhs[k] = grad[k];
      }
      if (!solve_dense(kkt, rhs, dim)) return;
      std::vector<double> step(rhs.begin(), rhs.begin() + n);

      double predicted = 0.0;
      for (int k = 0; k < n; ++k) predicted += grad[k] * step[k];
      if (!(predicted > 1e-15 * std::max(1.0, std::abs(ev.value)))) return;

      double alpha_max = std::numeric_limits<double>::infinity();
      int blocking = -1;
      for (int k = 0; k < n; ++k) {
        if (step[k] < 0.0) {
          const double a = -s.w[k] / step[k];
          if (a < alpha_max) {
            alpha_max = a;
            blocking = k;
          }
        }
      }
      double alpha = std::min(1.0, alpha_max);
      bool accepted = false;
      Support trial = s;
      double trial_value = ev.value;
      for (int ls = 0; ls < 60; ++ls) {
        for (int k = 0; k < n; ++k) trial.w[k] = std::max(0.0, s.w[k] + alpha * step[k]);
        const bool blocked = blocking >= 0 && alpha == alpha_max;
        if (blocked) trial.w[blocking] = 0.0;
        normalize(trial);
        const Evaluation tv = evaluate(trial);
        if (tv.finite() && tv.value >= ev.value + 1e-4 * alpha * predicted) {
          accepted = true;
          trial_value = tv.value;
          break;
        }
        alpha *= 0.5;
      }
      if (!accepted) return;
      s = std::move(trial);
      drop_zero_weights(s);
      trace.push_back(trial_value);
    }
  }

  // Moves mass toward candidate k along w + alpha (e_k - w) with the exact
  // line search: the slope has the sign of d_k(w(alpha)) - m.
  bool vertex_step(Support& s, int k, std::vector<double>& trace) const {
    Support base = s;
    auto pos = std::find(base.idx.begin(), base.idx.end(), k);
    std::size_t at;
    if (pos == base.idx.end()) {
      base.idx.push_back(k);
      base.w.push_back(0.0);
      at = base.size() - 1;
    } else {
      at = static_cast<std::size_t>(pos - base.idx.begin());
    }
    const auto moved = [&](double alpha) {
      Support t = base;
      for (double& w : t.w) w *= 1.0 - alpha;
      t.w[at] += alpha;
      return t;
    };
    const auto slope_positive = [&](double alpha) {
      const Evaluation ev = evaluate(moved(alpha));
      return ev.finite() && derivative(k, ev) > m_;
    };
    double lo = 0.0;
    double hi = 1.0;
    for (int it = 0; it < 60; ++it) {
      const double mid = 0.5 * (lo + hi);
      if (slope_positive(mid)) {
        lo = mid;
      } else {
        hi = mid;
      }
    }
    if (!(lo > 0.0)) return false;
    const double before = evaluate(s).value;
    Support next = moved(lo);
    drop_zero_weights(next);
    Evaluation ev = evaluate(next);
    if (!ev.finite() || !(ev.value > before)) {
      // Sharp soft minima: the admissible vertex step is below rounding, so
      // redistribute all weights jointly with the candidate included.
      next = moved(std::max(lo, 1e-8));
      newton(next, trace);
      ev = evaluate(next);
      if (!ev.finite() || !(ev.value > before)) return false;
    }
    s = std::move(next);
    trace.push_back(ev.value);
    return true;
  }

  // Returns true when converged at `tolerance`.
  bool exchange_loop(Support& s, double tolerance, std::vector<double>& trace, int& iterations,
                     double& max_derivative) const {
    double checkpoint = evaluate(s).value;
    int since_check = 0;
    while (true) {
      newton(s, trace);
      const Evaluation ev = evaluate(s);
      const auto d = all_derivatives(ev);
      const int best = argmax_in_order(d);
      max_derivative = d[best];
      if (max_derivative <= m_ * (1.0 + tolerance)) return true;
      if (iterations >= options_.max_iterations) return false;
      ++iterations;
      if (!vertex_step(s, best, trace)) return false;
      if (++since_check == kStallWindow) {
        const double now = evaluate(s).value;
        if (now - checkpoint <= kStallGain * std::max(1.0, std::abs(now))) return false;
        checkpoint = now;
        since_check = 0;
      }
    }
  }

  std::vector<double> refinement_points(const Support& s, const GridSpec& grid) const {
    std::vector<double> fresh;
    for (int k : s.idx) {
      const double x = xs_[k];
      auto it = std::find(order_.begin(), order_.end(), k);
      const std::size_t pos = static_cast<std::size_t>(it - order_.begin());
      double h = std::numeric_limits<double>::infinity();
      if (pos > 0) h = std::min(h, x - xs_[order_[pos - 1]]);
      if (pos + 1 < order_.size()) h = std::min(h, xs_[order_[pos + 1]] - x);
      if (!std::isfinite(h) || h <= 0.0) continue;
      const double fine = h / grid.refinement_factor;
      const int half = static_cast<int>(std::ceil(grid.refinement_radius * grid.refinement_factor));
      for (int i = -half; i <= half; ++i) {
        if (i == 0) continue;
        fresh.push_back(x + i * fine);
      }
    }
    return fresh;
  }

  double derivative_gap(int a, int b, const Evaluation& ev) const {
    std::array<double, kMaxDim> diff{};
    std::array<double, kMaxDim> sum{};
    double gap = 0.0;
    for (int j = 0; j < num_nodes_; ++j) {
      if (ev.mu[j] == 0.0) continue;
      const auto fa = score(a, j);
      const auto fb = score(b, j);
      for (int r = 0; r < m_; ++r) {
        diff[r] = fb[r] - fa[r];
        sum[r] = fb[r] + fa[r];
      }
      gap += ev.mu[j] * ev.inverse[j].bilinear(std::span<const double>(diff.data(), m_),
                                               std::span<const double>(sum.data(), m_));
    }
    return gap;
  }

  double derivative_at(double x, const Evaluation& ev) const {
    std::array<double, kMaxDim> f{};
    double d = 0.0;
    for (int j = 0; j < num_nodes_; ++j) {
      if (ev.mu[j] == 0.0) continue;
      model_.score(x, nodes_.betas[j], std::span<double>(f.data(), m_));
      d += ev.mu[j] * ev.inverse[j].quadratic(std::span<const double>(f.data(), m_));
    }
    return d;
  }

  // Moves each support point to the nearby peak of the directional
  // derivative; a move is kept only when the criterion does not drop.
  bool polish_locations(Support& s, std::vector<double>& trace) {
    const Interval& dom = model_.design_interval;
    bool moved_any = false;
    for (int sweep = 0; sweep < 30; ++sweep) {
      double largest = 0.0;
      for (std::size_t i = 0; i < s.size(); ++i) {
        const Evaluation ev = evaluate(s);
        const double x = xs_[s.idx[i]];
        auto it = std::find(order_.begin(), order_.end(), s.idx[i]);
        const std::size_t pos = static_cast<std::size_t>(it - order_.begin());
        double h = dom.length() * 1e-3;
        if (pos > 0) h = std::min(h, x - xs_[order_[pos - 1]]);
        if (pos + 1 < order_.size()) h = std::min(h, xs_[order_[pos + 1]] - x);
        h = std::max(h, 1e-12 * dom.length());
        const std::function<double(double)> fn = [&](double t) { return derivative_at(t, ev); };
        const double cap = 2e-3 * dom.length();
        double xp = x;
        double vp = fn(x);
        for (double width = 4.0 * h;; width *= 4.0) {
          const double lo = std::max(dom.lo, x - width);
          const double hi = std::min(dom.hi, x + width);
          auto peak = golden_maximum(fn, lo, hi, 200);
          for (double end : {lo, hi}) {
            const double v = fn(end);
            if (v > peak.second) peak = {end, v};
          }
          if (peak.second > vp) std::tie(xp, vp) = peak;
          const double margin = 0.05 * (hi - lo);
          const bool interior = (xp - lo > margin || lo == dom.lo) && (hi - xp > margin || hi == dom.hi);
          if (interior || width >= cap) break;
        }
        if (xp == x || !(vp > fn(x))) continue;
        add_candidates({xp});
        const int k = index_of(xp);
        if (k < 0) continue;
        Support trial = s;
        if (auto dup = std::find(s.idx.begin(), s.idx.end(), k); dup != s.idx.end()) {
          trial.w[dup - s.idx.begin()] += trial.w[i];
          trial.w[i] = 0.0;
          drop_zero_weights(trial);
        } else {
          trial.idx[i] = k;
        }
        newton(trial, trace);
        const Evaluation tv = evaluate(trial);
        if (!tv.finite() || tv.value < ev.value) continue;
        largest = std::max(largest, std::abs(xp - x));
        s = std::move(trial);
        moved_any = true;
        trace.push_back(tv.value);
        if (s.size() <= i) break;
      }
      if (largest <= 1e-11 * dom.length()) break;
    }
    return moved_any;
  }

  // Merges support points the criterion cannot tell apart (moving all weight
  // from one to the other costs nothing measurable). The direction follows the
  // sign of d_b - d_a = sum_j mu_j (f_b - f_a)^T M_j^{-1} (f_b + f_a), which
  // keeps score differences that are lost when d_a and d_b are rounded.
  void consolidate(Support& s, std::vector<double>& trace) const {
    bool merged = true;
    while (merged && s.size() > 1) {
      merged = false;
      const Evaluation ev = evaluate(s);
      const double slack = 1e-14 * std::max(1.0, std::abs(ev.value));
      for (std::size_t a = 0; a < s.size() && !merged; ++a) {
        for (std::size_t b = a + 1; b < s.size() && !merged; ++b) {
          const double gap = derivative_gap(s.idx[a], s.idx[b], ev);
          const std::size_t from = gap >= 0.0 ? a : b;
          const std::size_t to = gap >= 0.0 ? b : a;
          Support trial = s;
          trial.w[to] += trial.w[from];
          trial.w[from] = 0.0;
          drop_zero_weights(trial);
          const Evaluation tv = evaluate(trial);
          if (!tv.finite() || tv.value < ev.value - slack) continue;
          s = std::move(trial);
          trace.push_back(tv.value);
          merged = true;
        }
      }
    }
  }

  double x_of(int k) const { return xs_[k]; }
  int m() const { return m_; }

  static void normalize(Support& s) {
    double total = 0.0;
    for (double w : s.w) total += w;
    for (double& w : s.w) w /= total;
  }

  static void drop_zero_weights(Support& s) {
    Support kept;
    for (std::size_t i = 0; i < s.size(); ++i) {
      if (s.w[i] > 0.0) {
        kept.idx.push_back(s.idx[i]);
        kept.w.push_back(s.w[i]);
      }
    }
    normalize(kept);
    s = std::move(kept);
  }

 private:
  std::span<const double> score(int k, int j) const {
    return {&scores_[(static_cast<std::size_t>(k) * num_nodes_ + j) * m_],
            static_cast<std::size_t>(m_)};
  }

  void aggregate(Evaluation& ev) const {
    ev.mu.assign(num_nodes_, 0.0);
    if (options_.aggregation == Aggregation::kAverage) {
      double v = 0.0;
      for (int j = 0; j < num_nodes_; ++j) {
        v += nodes_.weights[j] * ev.g[j];
        ev.mu[j] = nodes_.weights[j];
      }
      ev.value = v;
      return;
    }
    const double gmin = *std::min_element(ev.g.begin(), ev.g.end());
    double total = 0.0;
    for (int j = 0; j < num_nodes_; ++j) {
      ev.mu[j] = nodes_.weights[j] * std::exp(-tau_ * (ev.g[j] - gmin));
      total += ev.mu[j];
    }
    for (double& mu : ev.mu) mu /= total;
    ev.value = gmin - std::log(total) / tau_;
  }

  const ModelSpec& model_;
  const CriterionNodes& nodes_;
  const ExchangeOptions& options_;
  int m_;
  int num_nodes_;
  double tau_ = 1.0;
  std::vector<double> xs_;
  std::vector<double> scores_;
  std::vector<int> order_;
  std::set<double> known_;
};

}  // namespace

ExchangeResult optimize_design(const ModelSpec& model, const CriterionNodes& nodes,
                               const GridSpec& grid, const ExchangeOptions& options,
                               const std::optional<DesignMeasure>& seed) {
  model.validate();
  grid.validate(model.m);
  if (nodes.size() == 0 || nodes.weights.size() != nodes.size() ||
      nodes.offsets.size() != nodes.size()) {
    throw UsageError("criterion nodes need matching betas, weights and offsets");
  }
  for (double b : nodes.betas) model.require_admissible(b);

  Engine engine(model, nodes, options);
  const bool soft = options.aggregation == Aggregation::kSoftMin;
  std::vector<double> taus = soft ? options.tau_schedule : std::vector<double>{1.0};
  if (taus.empty()) throw UsageError("soft-minimum aggregation needs a temperature schedule");
  engine.set_tau(taus.front());

  engine.add_candidates(grid.points(model.design_interval));
  engine.add_candidates(model.fixed_support);

  Support support;
  bool have_start = false;
  if (seed) {
    engine.add_candidates(std::vector<double>(seed->points().begin(), seed->points().end()));
    for (std::size_t i = 0; i < seed->size(); ++i) {
      const int k = engine.index_of(seed->points()[i]);
      if (k < 0) continue;
      auto pos = std::find(support.idx.begin(), support.idx.end(), k);
      if (pos == support.idx.end()) {
        support.idx.push_back(k);
        support.w.push_back(seed->weights()[i]);
      } else {
        support.w[pos - support.idx.begin()] += seed->weights()[i];
      }
    }
    if (!support.idx.empty()) {
      Engine::normalize(support);
      have_start = engine.evaluate(support).finite();
    }
  }
  if (!have_start) {
    if (auto start = engine.multiplicative_start(options.multiplicative_iterations)) {
      support = std::move(*start);
      have_start = true;
    }
  }
  if (!have_start) {
    support = engine.spread_start();
    if (!engine.evaluate(support).finite()) {
      throw InfeasibleError(model.name + ": no nonsingular design on the candidate grid");
    }
  }

  std::vector<double> trace;
  int iterations = 0;
  double max_derivative = 0.0;
  bool converged = false;
  for (std::size_t stage = 0; stage < taus.size(); ++stage) {
    engine.set_tau(taus[stage]);
    trace.clear();
    const bool last = stage + 1 == taus.size();
    converged = engine.exchange_loop(support, last ? options.tolerance : options.stage_tolerance,
                                     trace, iterations, max_derivative);
  }
  for (int round = 0; round < grid.refinement_rounds; ++round) {
    engine.add_candidates(engine.refinement_points(support, grid));
    converged =
        engine.exchange_loop(support, options.tolerance, trace, iterations, max_derivative);
  }
  if (engine.polish_locations(support, trace)) {
    converged =
        engine.exchange_loop(support, options.tolerance, trace, iterations, max_derivative);
  }

  engine.consolidate(support, trace);

  const Evaluation ev = engine.evaluate(support);
  std::vector<double> points;
  std::vector<double> weights;
  for (std::size_t i = 0; i < support.size(); ++i) {
    points.push_back(engine.x_of(support.idx[i]));
    weights.push_back(support.w[i]);
  }
  ExchangeResult result{DesignMeasure::normalized(std::move(points), std::move(weights)).sorted(),
                        ev.value,
                        ev.mu,
                        ev.g,
                        max_derivative,
                        iterations,
                        std::move(trace),
                        converged};
  return result;
}

}  // namespace optdesign

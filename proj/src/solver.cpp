#include "smpc/solver.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <numeric>
#include <string>

#include <Eigen/Dense>

#include "smpc/errors.hpp"

namespace smpc {

bool CandidateList::contains(const SwitchSequence& u) const {
  return std::any_of(items.begin(), items.end(), [&](const Candidate& c) { return c.u == u; });
}

Eigen::MatrixXd cholesky(const Eigen::MatrixXd& q) {
  if (q.rows() != q.cols()) {
    throw SolverError(SolverErrorKind::kDimensionMismatch, "cholesky: matrix is not square");
  }
  const Eigen::Index n = q.rows();
  Eigen::MatrixXd l = Eigen::MatrixXd::Zero(n, n);
  for (Eigen::Index j = 0; j < n; ++j) {
    double diag = q(j, j);
    for (Eigen::Index k = 0; k < j; ++k) diag -= l(j, k) * l(j, k);
    if (!(diag > 0.0) || !std::isfinite(diag)) {
      throw SolverError(SolverErrorKind::kNotPositiveDefinite,
                        "cholesky: matrix is not positive definite at pivot " + std::to_string(j),
                        static_cast<int>(j));
    }
    l(j, j) = std::sqrt(diag);
    for (Eigen::Index i = j + 1; i < n; ++i) {
      double v = q(i, j);
      for (Eigen::Index k = 0; k < j; ++k) v -= l(i, k) * l(j, k);
      l(i, j) = v / l(j, j);
    }
  }
  return l;
}

QpForm assemble_qp(const MultistepModel& m, const Eigen::VectorXd& x0,
                   const Eigen::VectorXd& y_ref, const SwitchState& u_prev, double lambda) {
  const Eigen::Index rows = m.xi.rows();
  const Eigen::Index cols = m.xi.cols();
  if (x0.size() != m.gamma.cols() || y_ref.size() != rows || m.s_mat.rows() != cols) {
    throw SolverError(SolverErrorKind::kDimensionMismatch, "assemble_qp: inconsistent dimensions");
  }
  if (!(lambda >= 0.0)) {
    throw SolverError(SolverErrorKind::kInvalidArgument, "assemble_qp: lambda must be >= 0");
  }

  QpForm qp;
  qp.lambda = lambda;
  qp.q = m.xi.transpose() * m.xi + lambda * m.s_mat.transpose() * m.s_mat;
  const Eigen::VectorXd free_error = m.gamma * x0 + m.n_vec - y_ref;
  qp.theta = -(m.xi.transpose() * free_error) +
             lambda * (m.s_mat.transpose() * (m.e_mat * u_prev.vec()));

  // Q = H^T H with H lower triangular: factor the index-reversed matrix and
  // reverse back, so row k of H only involves U_1..U_k.
  const Eigen::MatrixXd reversed = qp.q.reverse();
  const Eigen::MatrixXd l = cholesky(reversed);
  qp.h_factor = l.transpose().reverse();

  const Eigen::VectorXd y = qp.h_factor.transpose().triangularView<Eigen::Upper>().solve(qp.theta);
  qp.u_unc = qp.h_factor.triangularView<Eigen::Lower>().solve(y);
  qp.u_check = qp.h_factor * qp.u_unc;
  return qp;
}

double qp_cost(const QpForm& qp, const SwitchSequence& u) {
  const int n = qp.dimension();
  if (u.size() != n) {
    throw SolverError(SolverErrorKind::kDimensionMismatch, "qp_cost: sequence length mismatch");
  }
  double cost = 0.0;
  for (int k = 0; k < n; ++k) {
    double r = qp.u_check(k);
    for (int j = 0; j <= k; ++j) r -= qp.h_factor(k, j) * u[j];
    cost += r * r;
  }
  return cost;
}

double raw_cost(const MultistepModel& m, const Eigen::VectorXd& x0, const Eigen::VectorXd& y_ref,
                const SwitchState& u_prev, double lambda, const SwitchSequence& u) {
  const Eigen::VectorXd uv = u.vec();
  const Eigen::VectorXd tracking = m.xi * uv + m.gamma * x0 + m.n_vec - y_ref;
  const Eigen::VectorXd effort = m.s_mat * uv - m.e_mat * u_prev.vec();
  return tracking.squaredNorm() + lambda * effort.squaredNorm();
}

SwitchSequence babai_rounding(const QpForm& qp) {
  SwitchSequence u(qp.horizon());
  for (int i = 0; i < qp.dimension(); ++i) {
    const double r = std::clamp(std::round(qp.u_unc(i)), -1.0, 1.0);
    u[i] = static_cast<std::int8_t>(r);
  }
  return u;
}

namespace {

class Decoder {
 public:
  Decoder(const QpForm& qp, double radius2, const ExclusionSet& exclude, bool record)
      : qp_(qp), exclude_(exclude), n_(qp.dimension()), current_(qp.horizon()),
        radius2_(radius2), record_(record) {
    if (record_) result_.radius_trace.push_back(radius2);
  }

  void seed(const SwitchSequence& u, double cost) {
    result_.best = u;
    result_.best_cost = cost;
    has_best_ = true;
    update_radius(cost);
  }

  void search(int layer, double partial) {
    // Residual of each admissible level at this layer; the visiting order is
    // increasing distance from the conditional (Babai) estimate.
    double base = qp_.u_check(layer);
    for (int j = 0; j < layer; ++j) base -= qp_.h_factor(layer, j) * current_[j];
    const double diag = qp_.h_factor(layer, layer);

    std::array<std::pair<double, std::int8_t>, 3> children;
    for (int v = -1; v <= 1; ++v) {
      const double r = base - diag * v;
      children[static_cast<std::size_t>(v + 1)] = {r * r, static_cast<std::int8_t>(v)};
    }
    std::sort(children.begin(), children.end());
    result_.nodes += 3;  // all three residuals are computed to order the children

    for (const auto& [increment, level] : children) {
      const double d2 = partial + increment;
      if (d2 > radius2_) break;  // later children are at least as far
      current_[layer] = level;
      if (layer + 1 < n_) {
        search(layer + 1, d2);
      } else {
        consider_leaf(d2);
      }
    }
    current_[layer] = 0;
  }

  DecodeResult finish(double initial_radius2) {
    if (has_best_) {
      result_.status = DecodeStatus::kFound;
    } else if (std::isinf(initial_radius2)) {
      result_.status = DecodeStatus::kExhausted;
    } else {
      result_.status = DecodeStatus::kRadiusTooSmall;
    }
    return std::move(result_);
  }

 private:
  void consider_leaf(double d2) {
    if (exclude_.contains(current_)) return;
    if (has_best_) {
      if (d2 > result_.best_cost || (d2 == result_.best_cost && !(current_ < result_.best))) {
        return;
      }
      result_.runner_up = result_.best;
      result_.runner_up_cost = result_.best_cost;
    }
    result_.best = current_;
    result_.best_cost = d2;
    has_best_ = true;
    update_radius(d2);
  }

  void update_radius(double r2) {
    radius2_ = r2;
    if (record_) result_.radius_trace.push_back(r2);
  }

  const QpForm& qp_;
  const ExclusionSet& exclude_;
  int n_;
  SwitchSequence current_;
  double radius2_;
  bool record_;
  bool has_best_ = false;
  DecodeResult result_;
};

}  // namespace

DecodeResult sphere_decode(const QpForm& qp, double radius2, const ExclusionSet& exclude,
                           const std::optional<SwitchSequence>& warm_start, bool record_radius) {
  if (qp.dimension() == 0 || qp.dimension() % 3 != 0) {
    throw SolverError(SolverErrorKind::kDimensionMismatch, "sphere_decode: invalid dimension");
  }
  if (!(radius2 > 0.0)) {
    throw SolverError(SolverErrorKind::kInvalidArgument, "sphere_decode: radius must be positive");
  }
  Decoder decoder(qp, radius2, exclude, record_radius);
  if (warm_start && !exclude.contains(*warm_start)) {
    const double w = qp_cost(qp, *warm_start);
    if (w <= radius2) decoder.seed(*warm_start, w);
  }
  decoder.search(0, 0.0);
  return decoder.finish(radius2);
}

CandidateList k_best(const QpForm& qp, int k) {
  if (k <= 0) throw SolverError(SolverErrorKind::kInvalidArgument, "k_best: k must be >= 1");
  CandidateList list;
  list.k = k;
  ExclusionSet exclude;
  std::optional<SwitchSequence> warm = babai_rounding(qp);
  double radius2 = kInfiniteRadius;

  for (int i = 0; i < k; ++i) {
    DecodeResult res = sphere_decode(qp, radius2, exclude, warm);
    list.nodes_visited += res.nodes;
    if (res.status == DecodeStatus::kRadiusTooSmall) {
      res = sphere_decode(qp, kInfiniteRadius, exclude);
      list.nodes_visited += res.nodes;
    }
    if (res.status == DecodeStatus::kExhausted) break;

    list.items.push_back({res.best, res.best_cost});
    exclude.insert(res.best);
    // Any observed non-excluded leaf bounds the next-best cost from above.
    if (res.runner_up) {
      warm = res.runner_up;
      radius2 = res.runner_up_cost;
    } else {
      warm.reset();
      radius2 = kInfiniteRadius;
    }
  }
  return list;
}

CandidateList brute_force_kbest(const SequenceCost& cost, int k, int n_h) {
  if (k <= 0) throw SolverError(SolverErrorKind::kInvalidArgument, "brute_force_kbest: k must be >= 1");
  if (n_h < 1 || n_h > 4) {
    throw SolverError(SolverErrorKind::kHorizonTooLarge,
                      "brute_force_kbest: horizon must be in [1, 4]");
  }
  const int n = 3 * n_h;
  std::size_t total = 1;
  for (int i = 0; i < n; ++i) total *= 3;

  std::vector<Candidate> all;
  all.reserve(total);
  SwitchSequence u(n_h);
  for (int i = 0; i < n; ++i) u[i] = -1;
  // Odometer over {-1,0,1}^n in lexicographic order.
  for (std::size_t idx = 0; idx < total; ++idx) {
    all.push_back({u, cost(u)});
    for (int pos = n - 1; pos >= 0; --pos) {
      if (u[pos] < 1) {
        ++u[pos];
        break;
      }
      u[pos] = -1;
    }
  }
  std::stable_sort(all.begin(), all.end(),
                   [](const Candidate& a, const Candidate& b) { return a.cost < b.cost; });

  CandidateList list;
  list.k = k;
  list.nodes_visited = static_cast<std::int64_t>(total);
  const std::size_t keep = std::min<std::size_t>(static_cast<std::size_t>(k), total);
  list.items.assign(all.begin(), all.begin() + static_cast<std::ptrdiff_t>(keep));
  return list;
}

CandidateList brute_force_kbest(const QpForm& qp, int k) {
  return brute_force_kbest([&](const SwitchSequence& u) { return qp_cost(qp, u); }, k,
                           qp.horizon());
}

PairSelection select_pair(const PlantState& st, const CandidateList& machine_cands,
                          const CandidateList& grid_cands, const DiscreteModel& machine,
                          const DiscreteModel& grid) {
  if (machine_cands.items.empty() || grid_cands.items.empty()) {
    throw SolverError(SolverErrorKind::kEmptyFeasibleSet, "select_pair: empty candidate list");
  }
  if (machine_cands.items.front().u.horizon() != grid_cands.items.front().u.horizon()) {
    throw SolverError(SolverErrorKind::kDimensionMismatch, "select_pair: horizon mismatch");
  }
  PairSelection best;
  double best_cost = kInfiniteRadius;
  for (std::size_t i = 0; i < machine_cands.items.size(); ++i) {
    for (std::size_t j = 0; j < grid_cands.items.size(); ++j) {
      const auto trajectory = predict_vo_sequence(st, machine_cands.items[i].u,
                                                  grid_cands.items[j].u, machine, grid);
      const double j_o = std::inner_product(trajectory.begin(), trajectory.end(),
                                            trajectory.begin(), 0.0);
      if (j_o < best_cost) {
        best_cost = j_o;
        best.u_m = machine_cands.items[i].u;
        best.u_n = grid_cands.items[j].u;
        best.j_o = j_o;
        best.machine_index = static_cast<int>(i);
        best.grid_index = static_cast<int>(j);
      }
    }
  }
  return best;
}

}  // namespace smpc

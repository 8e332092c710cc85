#pragma once

#include <cstdint>
#include <functional>
#include <limits>
#include <optional>
#include <set>
#include <vector>

#include <Eigen/Core>

#include "smpc/prediction.hpp"

namespace smpc {

/// Integer least-squares form of one subproblem:
///   argmin ||Y - Y_ref||^2 + lambda ||dU||^2  ==  argmin ||u_check - H U||^2
/// over U in {-1,0,1}^(3 N_h), with Q = H^T H and H lower triangular.
struct QpForm {
  Eigen::MatrixXd q;
  Eigen::VectorXd theta;
  Eigen::MatrixXd h_factor;
  Eigen::VectorXd u_unc;
  Eigen::VectorXd u_check;
  double lambda = 0.0;

  int dimension() const { return static_cast<int>(q.rows()); }
  int horizon() const { return dimension() / 3; }
};

struct Candidate {
  SwitchSequence u;
  double cost = 0.0;
};

struct CandidateList {
  std::vector<Candidate> items;
  int k = 0;
  std::int64_t nodes_visited = 0;

  bool contains(const SwitchSequence& u) const;
};

class ExclusionSet {
 public:
  void insert(const SwitchSequence& u) { set_.insert(u); }
  bool contains(const SwitchSequence& u) const { return set_.count(u) != 0; }
  std::size_t size() const { return set_.size(); }
  bool empty() const { return set_.empty(); }

 private:
  std::set<SwitchSequence> set_;
};

enum class DecodeStatus {
  kFound,
  kRadiusTooSmall,  // finite radius admitted no leaf; retry with infinity
  kExhausted,       // every leaf is excluded
};

struct DecodeResult {
  DecodeStatus status = DecodeStatus::kExhausted;
  SwitchSequence best;
  double best_cost = std::numeric_limits<double>::infinity();
  std::optional<SwitchSequence> runner_up;
  double runner_up_cost = std::numeric_limits<double>::infinity();
  std::int64_t nodes = 0;
  /// Squared radius after every update, when requested.
  std::vector<double> radius_trace;
};

inline constexpr double kInfiniteRadius = std::numeric_limits<double>::infinity();

/// Standard lower Cholesky factor, L L^T = q. Throws SolverError with the
/// failing pivot if q is not positive definite.
Eigen::MatrixXd cholesky(const Eigen::MatrixXd& q);

QpForm assemble_qp(const MultistepModel& m, const Eigen::VectorXd& x0,
                   const Eigen::VectorXd& y_ref, const SwitchState& u_prev, double lambda);

/// Decoder metric ||u_check - H U||^2, accumulated row by row exactly as the
/// decoder does.
double qp_cost(const QpForm& qp, const SwitchSequence& u);

/// Original (uncondensed) objective ||xi U + gamma x0 + N - Y_ref||^2 + lambda ||S U - E u_prev||^2.
double raw_cost(const MultistepModel& m, const Eigen::VectorXd& x0, const Eigen::VectorXd& y_ref,
                const SwitchState& u_prev, double lambda, const SwitchSequence& u);

/// Componentwise rounding of the unconstrained solution, clamped to {-1,0,1}.
SwitchSequence babai_rounding(const QpForm& qp);

/// Depth-first sphere decoder over layers 1..3N_h. `radius2` is the initial
/// squared radius. A non-excluded `warm_start` inside the radius seeds the
/// incumbent. Equal-cost leaves resolve to the lexicographically smallest.
DecodeResult sphere_decode(const QpForm& qp, double radius2, const ExclusionSet& exclude,
                           const std::optional<SwitchSequence>& warm_start = std::nullopt,
                           bool record_radius = false);

/// The k cheapest sequences by repeated decoding with exclusion.
CandidateList k_best(const QpForm& qp, int k);

using SequenceCost = std::function<double(const SwitchSequence&)>;

/// Exhaustive enumeration, sorted by (cost, lexicographic). Horizon <= 4.
CandidateList brute_force_kbest(const SequenceCost& cost, int k, int n_h);
CandidateList brute_force_kbest(const QpForm& qp, int k);

struct PairSelection {
  SwitchSequence u_m;
  SwitchSequence u_n;
  double j_o = 0.0;
  int machine_index = 0;
  int grid_index = 0;
};

/// Exhaustive inner loop: the candidate pair minimising ||V_O||^2 over the
/// horizon. Ties resolve to the smallest (machine, grid) index pair.
PairSelection select_pair(const PlantState& st, const CandidateList& machine_cands,
                          const CandidateList& grid_cands, const DiscreteModel& machine,
                          const DiscreteModel& grid);

}  // namespace smpc

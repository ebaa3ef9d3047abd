#include "markov_ucb/chain.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <queue>
#include <sstream>

#include "markov_ucb/errors.hpp"

namespace markov_ucb {

const char* to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::kShapeMismatch: return "shape mismatch";
    case ErrorCode::kNotStochastic: return "not stochastic";
    case ErrorCode::kReducible: return "reducible chain";
    case ErrorCode::kPeriodic: return "periodic chain";
    case ErrorCode::kNotReversible: return "not reversible";
    case ErrorCode::kNonPositiveReward: return "non-positive reward";
    case ErrorCode::kInvalidInitialDistribution: return "invalid initial distribution";
    case ErrorCode::kDegenerateTheta: return "degenerate theta";
    case ErrorCode::kInvalidState: return "invalid state";
    case ErrorCode::kSingularSystem: return "singular system";
    case ErrorCode::kUndefinedIndex: return "undefined index";
    case ErrorCode::kEmptySubset: return "empty subset";
    case ErrorCode::kConfiguration: return "configuration error";
  }
  return "unknown error";
}

namespace {

std::vector<std::vector<std::size_t>> adjacency(const Matrix& p, bool reversed) {
  const auto n = static_cast<std::size_t>(p.rows());
  std::vector<std::vector<std::size_t>> adj(n);
  for (std::size_t x = 0; x < n; ++x) {
    for (std::size_t y = 0; y < n; ++y) {
      if (p(static_cast<Eigen::Index>(x), static_cast<Eigen::Index>(y)) > 0.0) {
        reversed ? adj[y].push_back(x) : adj[x].push_back(y);
      }
    }
  }
  return adj;
}

// BFS distances from state 0; -1 for unreachable.
std::vector<long> bfs_levels(const std::vector<std::vector<std::size_t>>& adj) {
  std::vector<long> level(adj.size(), -1);
  std::queue<std::size_t> frontier;
  level[0] = 0;
  frontier.push(0);
  while (!frontier.empty()) {
    const auto x = frontier.front();
    frontier.pop();
    for (auto y : adj[x]) {
      if (level[y] < 0) {
        level[y] = level[x] + 1;
        frontier.push(y);
      }
    }
  }
  return level;
}

void check_distribution(const Vector& v, std::size_t n, const char* name) {
  if (static_cast<std::size_t>(v.size()) != n) {
    std::ostringstream msg;
    msg << name << " has " << v.size() << " entries, expected " << n;
    throw ValidationError(ErrorCode::kShapeMismatch, msg.str());
  }
  if ((v.array() <= 0.0).any() || std::abs(v.sum() - 1.0) > kRowSumTolerance) {
    std::ostringstream msg;
    msg << name << " must be strictly positive and sum to 1";
    throw ValidationError(ErrorCode::kInvalidInitialDistribution, msg.str());
  }
}

}  // namespace

void check_stochastic(const Matrix& transition) {
  if (transition.rows() != transition.cols() || transition.rows() < 1) {
    throw ValidationError(ErrorCode::kShapeMismatch, "transition matrix must be square and non-empty");
  }
  for (Eigen::Index x = 0; x < transition.rows(); ++x) {
    for (Eigen::Index y = 0; y < transition.cols(); ++y) {
      const double p = transition(x, y);
      if (!(p >= 0.0 && p <= 1.0)) {
        std::ostringstream msg;
        msg << "entry (" << x << "," << y << ") = " << p << " outside [0,1]";
        throw ValidationError(ErrorCode::kNotStochastic, msg.str());
      }
    }
    const double sum = transition.row(x).sum();
    if (std::abs(sum - 1.0) > kRowSumTolerance) {
      std::ostringstream msg;
      msg.precision(17);
      msg << "row " << x << " sums to " << sum;
      throw ValidationError(ErrorCode::kNotStochastic, msg.str());
    }
  }
}

bool is_irreducible(const Matrix& transition) {
  const auto forward = bfs_levels(adjacency(transition, false));
  const auto backward = bfs_levels(adjacency(transition, true));
  auto reached = [](long l) { return l >= 0; };
  return std::all_of(forward.begin(), forward.end(), reached) &&
         std::all_of(backward.begin(), backward.end(), reached);
}

int period(const Matrix& transition) {
  const auto adj = adjacency(transition, false);
  const auto level = bfs_levels(adj);
  // Every closed walk length is a multiple of g iff level[x] + 1 - level[y]
  // is, for every edge x -> y.
  long g = 0;
  for (std::size_t x = 0; x < adj.size(); ++x) {
    if (level[x] < 0) continue;
    for (auto y : adj[x]) {
      g = std::gcd(g, std::abs(level[x] + 1 - level[y]));
    }
  }
  return static_cast<int>(g);
}

Vector stationary_distribution(const Matrix& transition) {
  check_stochastic(transition);
  if (!is_irreducible(transition)) {
    throw ValidationError(ErrorCode::kReducible, "transition graph is not strongly connected");
  }
  const Eigen::Index n = transition.rows();
  Matrix system = transition.transpose() - Matrix::Identity(n, n);
  system.row(n - 1).setOnes();
  Vector rhs = Vector::Zero(n);
  rhs(n - 1) = 1.0;

  Eigen::FullPivLU<Matrix> lu(system);
  if (!lu.isInvertible()) {
    throw ValidationError(ErrorCode::kSingularSystem, "stationary system is singular");
  }
  Vector pi = lu.solve(rhs);
  const double residual = (pi.transpose() * transition - pi.transpose()).cwiseAbs().maxCoeff();
  if (residual > kStationaryResidualTolerance || (pi.array() <= 0.0).any()) {
    std::ostringstream msg;
    msg << "stationary solve failed (residual " << residual << ")";
    throw ValidationError(ErrorCode::kSingularSystem, msg.str());
  }
  return pi;
}

double detailed_balance_residual(const Matrix& transition, const Vector& stationary) {
  const Matrix flow = stationary.asDiagonal() * transition;
  return (flow - flow.transpose()).cwiseAbs().maxCoeff();
}

namespace {

double gap_from_reversible(const Matrix& transition, const Vector& pi) {
  const Vector sqrt_pi = pi.array().sqrt();
  const Vector inv_sqrt_pi = sqrt_pi.cwiseInverse();
  Matrix sym = sqrt_pi.asDiagonal() * transition * inv_sqrt_pi.asDiagonal();
  // Exactly symmetric up to round-off for reversible chains.
  sym = 0.5 * (sym + sym.transpose()).eval();
  Eigen::SelfAdjointEigenSolver<Matrix> solver(sym, Eigen::EigenvaluesOnly);
  if (solver.info() != Eigen::Success) {
    throw ValidationError(ErrorCode::kSingularSystem, "eigensolver did not converge");
  }
  const Vector& eig = solver.eigenvalues();  // ascending
  if (eig.size() < 2) return 1.0;
  return 1.0 - eig(eig.size() - 2);
}

void check_reversible(const Matrix& transition, const Vector& pi) {
  const double residual = detailed_balance_residual(transition, pi);
  if (residual > kDetailedBalanceTolerance) {
    std::ostringstream msg;
    msg << "detailed balance residual " << residual;
    throw ValidationError(ErrorCode::kNotReversible, msg.str());
  }
}

}  // namespace

double eigenvalue_gap(const Matrix& transition) {
  const Vector pi = stationary_distribution(transition);
  check_reversible(transition, pi);
  return gap_from_reversible(transition, pi);
}

Arm Arm::make(Matrix transition, Vector rewards, std::optional<Vector> initial) {
  check_stochastic(transition);
  const auto n = static_cast<std::size_t>(transition.rows());
  if (n < 2) {
    throw ValidationError(ErrorCode::kShapeMismatch, "an arm needs at least two states");
  }
  if (static_cast<std::size_t>(rewards.size()) != n) {
    std::ostringstream msg;
    msg << "rewards has " << rewards.size() << " entries, expected " << n;
    throw ValidationError(ErrorCode::kShapeMismatch, msg.str());
  }
  if (!is_irreducible(transition)) {
    throw ValidationError(ErrorCode::kReducible, "transition graph is not strongly connected");
  }
  if (const int d = period(transition); d != 1) {
    throw ValidationError(ErrorCode::kPeriodic, "chain has period " + std::to_string(d));
  }
  if ((rewards.array() <= 0.0).any()) {
    throw ValidationError(ErrorCode::kNonPositiveReward, "all state rewards must be > 0");
  }

  Arm arm;
  arm.stationary_ = stationary_distribution(transition);
  check_reversible(transition, arm.stationary_);
  arm.gap_ = gap_from_reversible(transition, arm.stationary_);
  if (initial) {
    check_distribution(*initial, n, "initial distribution");
    arm.initial_ = std::move(*initial);
  } else {
    arm.initial_ = arm.stationary_;
  }
  arm.mean_ = rewards.dot(arm.stationary_);
  arm.transition_ = std::move(transition);
  arm.rewards_ = std::move(rewards);

  arm.cumulative_.resize((n + 1) * n);
  arm.last_support_.resize(n + 1);
  for (std::size_t row = 0; row <= n; ++row) {
    double acc = 0.0;
    for (std::size_t j = 0; j < n; ++j) {
      const double p = row < n ? arm.transition_(static_cast<Eigen::Index>(row),
                                                 static_cast<Eigen::Index>(j))
                               : arm.initial_(static_cast<Eigen::Index>(j));
      acc += p;
      arm.cumulative_[row * n + j] = acc;
      if (p > 0.0) arm.last_support_[row] = j;
    }
  }
  return arm;
}

std::size_t Arm::sample_row(std::size_t row, double u) const {
  const std::size_t n = num_states();
  const double* cum = cumulative_.data() + row * n;
  for (std::size_t j = 0; j < n; ++j) {
    if (u < cum[j]) return j;
  }
  return last_support_[row];
}

std::size_t Arm::sample_next(std::size_t state, Rng& rng) const {
  if (state >= num_states()) {
    throw ValidationError(ErrorCode::kInvalidState,
                          "state " + std::to_string(state) + " out of range");
  }
  return sample_row(state, uniform01(rng));
}

std::size_t Arm::sample_initial(Rng& rng) const {
  return sample_row(num_states(), uniform01(rng));
}

Matrix two_state_transition(double p01, double p10) {
  Matrix p(2, 2);
  p << 1.0 - p01, p01, p10, 1.0 - p10;
  return p;
}

Arm two_state_arm(double p01, double p10, double reward0, double reward1,
                  std::optional<Vector> initial) {
  return Arm::make(two_state_transition(p01, p10), Vector{{reward0, reward1}},
                   std::move(initial));
}

ThetaFamilyPoint ThetaFamilyPoint::make(double theta) {
  if (!(theta > 0.0 && theta < 10.0)) {
    std::ostringstream msg;
    msg << "theta = " << theta << " must lie strictly inside (0, 10)";
    throw ValidationError(ErrorCode::kDegenerateTheta, msg.str());
  }
  return ThetaFamilyPoint(theta);
}

double ThetaFamilyPoint::p01() const {
  const double s = theta_ / 10.0;
  return s * s * s;
}

double ThetaFamilyPoint::p10() const {
  const double s = theta_ / 10.0;
  return 1.0 - s * s;
}

Arm ThetaFamilyPoint::arm() const { return two_state_arm(p01(), p10(), 1.0, 2.0); }

}  // namespace markov_ucb

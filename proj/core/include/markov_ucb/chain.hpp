#pragma once

#include <Eigen/Dense>
#include <cstddef>
#include <optional>
#include <vector>

#include "markov_ucb/rng.hpp"

namespace markov_ucb {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;

inline constexpr double kRowSumTolerance = 1e-12;
inline constexpr double kDetailedBalanceTolerance = 1e-9;
inline constexpr double kStationaryResidualTolerance = 1e-10;

/// Throws ValidationError(kShapeMismatch / kNotStochastic) unless `transition`
/// is square with entries in [0, 1] and rows summing to 1.
void check_stochastic(const Matrix& transition);

/// Strong connectivity of the digraph {x -> y : p_xy > 0}.
bool is_irreducible(const Matrix& transition);

/// Period of an irreducible chain: gcd of the cycle lengths of its digraph.
int period(const Matrix& transition);

/// Solution of pi P = pi, sum(pi) = 1, via a direct linear solve.
/// Throws on non-stochastic, reducible, or numerically singular input.
Vector stationary_distribution(const Matrix& transition);

/// max_{x,y} |pi_x p_xy - pi_y p_yx|.
double detailed_balance_residual(const Matrix& transition, const Vector& stationary);

/// 1 - lambda_2 for a reversible chain, computed from the symmetric matrix
/// D^{1/2} P D^{-1/2} with D = diag(pi). Throws kNotReversible otherwise.
double eigenvalue_gap(const Matrix& transition);

/// A finite irreducible, aperiodic, reversible Markov chain with strictly
/// positive per-state rewards. Immutable once built; share freely across
/// threads.
class Arm {
 public:
  /// Validates and derives stationary law, eigenvalue gap and mean reward.
  /// `initial` defaults to the stationary distribution.
  static Arm make(Matrix transition, Vector rewards,
                  std::optional<Vector> initial = std::nullopt);

  std::size_t num_states() const { return static_cast<std::size_t>(rewards_.size()); }
  const Matrix& transition() const { return transition_; }
  const Vector& rewards() const { return rewards_; }
  const Vector& initial_distribution() const { return initial_; }
  const Vector& stationary() const { return stationary_; }
  double gap() const { return gap_; }
  double mean() const { return mean_; }
  double min_reward() const { return rewards_.minCoeff(); }
  double max_reward() const { return rewards_.maxCoeff(); }

  std::size_t sample_next(std::size_t state, Rng& rng) const;
  std::size_t sample_initial(Rng& rng) const;

 private:
  Arm() = default;

  std::size_t sample_row(std::size_t row, double u) const;

  Matrix transition_;
  Vector rewards_;
  Vector initial_;
  Vector stationary_;
  double gap_ = 0.0;
  double mean_ = 0.0;
  // cumulative_[row * n + j] = sum_{k <= j} p_{row,k}; row n holds the
  // cumulative initial distribution.
  std::vector<double> cumulative_;
  // Last state with positive mass per row; absorbs round-off in the tail.
  std::vector<std::size_t> last_support_;
};

inline Arm make_arm(Matrix transition, Vector rewards,
                    std::optional<Vector> initial = std::nullopt) {
  return Arm::make(std::move(transition), std::move(rewards), std::move(initial));
}

inline double mean_reward(const Arm& arm) { return arm.mean(); }

inline std::size_t sample_next(const Arm& arm, std::size_t state, Rng& rng) {
  return arm.sample_next(state, rng);
}

/// Transition matrix [[1 - p01, p01], [p10, 1 - p10]].
Matrix two_state_transition(double p01, double p10);

Arm two_state_arm(double p01, double p10, double reward0, double reward1,
                  std::optional<Vector> initial = std::nullopt);

// Two-state family with p10 = 1 - (theta/10)^2, p01 = (theta/10)^3 and
// rewards (1, 2). Defined for theta strictly inside (0, 10).
class ThetaFamilyPoint {
 public:
  static ThetaFamilyPoint make(double theta);

  double theta() const { return theta_; }
  double p01() const;
  double p10() const;
  Arm arm() const;

 private:
  explicit ThetaFamilyPoint(double theta) : theta_(theta) {}
  double theta_;
};

inline Arm theta_arm(double theta) { return ThetaFamilyPoint::make(theta).arm(); }

}  // namespace markov_ucb

#pragma once

// Lagrange-multiplier Newton solver for the constrained layer system and the
// incremental time stepping of the viscoelastic interlayer.

#include <Eigen/Dense>
#include <Eigen/SparseLU>
#include <functional>
#include <memory>
#include <vector>

#include "lamglass/errors.hpp"
#include "lamglass/model.hpp"

namespace lamglass {

struct SolverConfig {
  double eps1 = 1e-5;
  double eps2 = 1e-5;
  int max_iterations = 50;
  /// Divergence is declared when eta1 exceeds its running minimum by this factor.
  double divergence_factor = 1e3;
  /// Diagonal pivoting threshold of the sparse LU factorization.
  double pivot_threshold = 1.0;
};

/// Solution of [[K, C^T], [C, 0]] [dd; lambda] = -[r_f; r_c].
struct KktSolution {
  Eigen::VectorXd dd;
  Eigen::VectorXd lambda;
};

/// Factorizes the saddle-point matrix and keeps the symbolic analysis for
/// repeated solves with an unchanged sparsity pattern.
class KktSolver {
 public:
  explicit KktSolver(double pivot_threshold = 1.0);
  ~KktSolver();
  KktSolver(KktSolver&&) noexcept;
  KktSolver& operator=(KktSolver&&) noexcept;

  KktSolution solve(const SparseMatrix& k, const SparseMatrix& c, const Eigen::VectorXd& r_f,
                    const Eigen::VectorXd& r_c);

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

KktSolution kkt_solve(const SparseMatrix& k, const SparseMatrix& c, const Eigen::VectorXd& r_f,
                      const Eigen::VectorXd& r_c);

/// Converged (or initial) state at one time instant.
struct SystemState {
  Eigen::VectorXd d;
  Eigen::VectorXd lambda;  // one entry per active constraint row
  std::vector<SectionState> sections;
  Eigen::VectorXd f_int;  // converged internal forces
  int iterations = 0;
  ResidualPair residual;
  std::vector<ResidualPair> trace;
};

/// Piecewise-linear load intensity in true time.
class LoadHistory {
 public:
  static constexpr double kJumpRamp = 1e-5;

  LoadHistory() = default;
  /// Breakpoints (time [s], intensity [N/m]); a repeated time is a jump and is
  /// replaced by a ramp of kJumpRamp seconds.
  explicit LoadHistory(std::vector<std::pair<double, double>> points);

  /// 0 -> q over ramp_time, then constant up to end_time.
  static LoadHistory ramp_and_hold(double q, double ramp_time, double end_time);

  double intensity(double t) const;
  const std::vector<std::pair<double, double>>& points() const noexcept { return points_; }

 private:
  std::vector<std::pair<double, double>> points_;
};

enum class Spacing { Linear, Log };

struct GridSegment {
  double t_end;
  std::size_t steps;
  Spacing spacing;
};

/// True-time instants t_0 = 0 < t_1 < ... of the incremental solution.
class TimeGrid {
 public:
  TimeGrid() = default;
  explicit TimeGrid(std::vector<double> times);
  static TimeGrid from_segments(const std::vector<GridSegment>& segments);
  /// One step to t_first, log-uniform steps to the end of the ramp, log-uniform to t_end.
  static TimeGrid ramp_grid(double t_first, double ramp_time, double t_end,
                            std::size_t ramp_steps = 6, std::size_t hold_steps = 24);
  /// Every interval split into `factor` log-uniform (linear for the first) pieces.
  TimeGrid refined(std::size_t factor) const;

  const std::vector<double>& times() const noexcept { return times_; }
  std::size_t steps() const noexcept { return times_.empty() ? 0 : times_.size() - 1; }

 private:
  std::vector<double> times_;
};

/// Step output recorded by run_history.
struct StepRecord {
  double time = 0.0;           // true time [s]
  double adjusted_time = 0.0;  // [s]
  double load = 0.0;           // [N/m]
  double deflection = 0.0;     // at the output node [m]
  double sigma_top_ply = 0.0;     // extreme smoothed stress of the first glass ply at the output node
  double sigma_bottom_ply = 0.0;  // same for the last glass ply
  double sigma_max = 0.0;      // largest |sigma| over all glass nodes
  double interlayer_n = 0.0;   // extreme interlayer resultants
  double interlayer_v = 0.0;
  double interlayer_m = 0.0;
  double eta1 = 0.0;
  double eta2 = 0.0;
  int iterations = 0;

  /// max(|sigma_top_ply|, |sigma_bottom_ply|).
  double sigma_output() const noexcept;
};

/// Newton solver bound to one model.
class NewtonSolver {
 public:
  NewtonSolver(const LaminateModel& model, SolverConfig config = {});

  const LaminateModel& model() const noexcept { return model_; }
  const SolverConfig& config() const noexcept { return config_; }
  std::size_t active_constraint_count() const noexcept { return active_rows_.size(); }

  SystemState initial_state() const;

  /// One incremental step over adjusted time dt to the load f_ext.
  SystemState step(const SystemState& state_n, const Eigen::VectorXd& f_ext, double dt);

  /// Residuals of a state against f_ext (eta1 uses free dofs only).
  ResidualPair residuals(const Eigen::VectorXd& f_int, const Eigen::VectorXd& f_ext,
                         const Eigen::VectorXd& c, const SparseMatrix& cjac,
                         const Eigen::VectorXd& lambda) const;

  /// Support reactions f_int + C^T lambda - f_ext at restrained dofs.
  Eigen::VectorXd reactions(const SystemState& state, const Eigen::VectorXd& f_ext) const;

  StepRecord record(const SystemState& state, double time, double adjusted_time,
                    double load) const;

 private:
  struct StepContext {
    SectionStiffness stiffness;
    std::vector<HistoryOffsets> offsets;
    EffectiveModuli eff;
  };
  StepContext prepare(const SystemState& state_n, double dt) const;
  Eigen::VectorXd restrict_dofs(const Eigen::VectorXd& full) const;
  SparseMatrix restrict_matrix(const SparseMatrix& k) const;
  SparseMatrix restrict_jacobian(const SparseMatrix& c) const;
  Eigen::VectorXd active_residual(const Eigen::VectorXd& c) const;
  Eigen::VectorXd expand_multipliers(const Eigen::VectorXd& lambda) const;

  const LaminateModel& model_;
  SolverConfig config_;
  std::vector<Eigen::Index> free_index_;  // full dof -> reduced index, -1 if fixed
  std::vector<Eigen::Index> free_dofs_;
  std::vector<Eigen::Index> active_rows_;
  KktSolver kkt_;
};

SystemState newton_solve_step(const LaminateModel& model, const SystemState& state_n,
                              const Eigen::VectorXd& f_ext, double dt,
                              const SolverConfig& config = {});

struct HistoryResult {
  std::vector<StepRecord> records;  // one per grid node, t_0 included
  SystemState final_state;
};

/// Runs the load history on the grid at constant temperature.
/// Throws NonconvergenceError carrying the failing step index.
HistoryResult run_history(const LaminateModel& model, const LoadHistory& load, double temperature,
                          const TimeGrid& grid, const SolverConfig& config = {},
                          const std::function<void(const StepRecord&)>& on_step = {});

}  // namespace lamglass

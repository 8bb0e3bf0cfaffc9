#include "lamglass/solver.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>
#include <string>

namespace lamglass {

// ---------------------------------------------------------------------------
// Saddle-point factorization

struct KktSolver::Impl {
  explicit Impl(double threshold) : pivot_threshold(threshold) {}

  double pivot_threshold;
  Eigen::SparseLU<SparseMatrix, Eigen::COLAMDOrdering<int>> lu;
  std::vector<int> outer;
  std::vector<int> inner;
  bool analyzed = false;

  bool same_pattern(const SparseMatrix& a) const {
    if (!analyzed) return false;
    const auto n = static_cast<std::size_t>(a.outerSize());
    const auto nnz = static_cast<std::size_t>(a.nonZeros());
    return outer.size() == n + 1 && inner.size() == nnz &&
           std::equal(outer.begin(), outer.end(), a.outerIndexPtr()) &&
           std::equal(inner.begin(), inner.end(), a.innerIndexPtr());
  }

  void remember_pattern(const SparseMatrix& a) {
    outer.assign(a.outerIndexPtr(), a.outerIndexPtr() + a.outerSize() + 1);
    inner.assign(a.innerIndexPtr(), a.innerIndexPtr() + a.nonZeros());
    analyzed = true;
  }
};

KktSolver::KktSolver(double pivot_threshold) : impl_(std::make_unique<Impl>(pivot_threshold)) {}
KktSolver::~KktSolver() = default;
KktSolver::KktSolver(KktSolver&&) noexcept = default;
KktSolver& KktSolver::operator=(KktSolver&&) noexcept = default;

namespace {

long parse_pivot(const std::string& message) {
  const auto pos = message.find_last_not_of("0123456789");
  if (pos == std::string::npos || pos + 1 == message.size()) return -1;
  // Eigen reports the 1-based column of the zero pivot.
  return std::stol(message.substr(pos + 1)) - 1;
}

}  // namespace

KktSolution KktSolver::solve(const SparseMatrix& k, const SparseMatrix& c,
                             const Eigen::VectorXd& r_f, const Eigen::VectorXd& r_c) {
  const Eigen::Index n = k.rows();
  const Eigen::Index m = c.rows();
  if (k.cols() != n || r_f.size() != n || r_c.size() != m || (m > 0 && c.cols() != n))
    throw ArgumentError("inconsistent saddle-point block sizes");

  std::vector<Eigen::Triplet<double>> t;
  t.reserve(static_cast<std::size_t>(k.nonZeros() + 2 * c.nonZeros()));
  for (Eigen::Index j = 0; j < k.outerSize(); ++j)
    for (SparseMatrix::InnerIterator it(k, j); it; ++it)
      t.emplace_back(static_cast<int>(it.row()), static_cast<int>(it.col()), it.value());
  for (Eigen::Index j = 0; j < c.outerSize(); ++j) {
    for (SparseMatrix::InnerIterator it(c, j); it; ++it) {
      const auto row = static_cast<int>(n + it.row());
      const auto col = static_cast<int>(it.col());
      t.emplace_back(row, col, it.value());
      t.emplace_back(col, row, it.value());
    }
  }
  SparseMatrix a(n + m, n + m);
  a.setFromTriplets(t.begin(), t.end());
  a.makeCompressed();

  Eigen::VectorXd rhs(n + m);
  rhs << -r_f, -r_c;

  auto& lu = impl_->lu;
  lu.setPivotThreshold(impl_->pivot_threshold);
  if (!impl_->same_pattern(a)) {
    lu.analyzePattern(a);
    impl_->remember_pattern(a);
  }
  lu.factorize(a);
  if (lu.info() != Eigen::Success) {
    const std::string msg = lu.lastErrorMessage();
    throw LinearSolverError(parse_pivot(msg), "saddle-point factorization failed: " + msg);
  }
  Eigen::VectorXd sol = lu.solve(rhs);
  if (lu.info() != Eigen::Success || !sol.allFinite())
    throw LinearSolverError(-1, "saddle-point solve produced a non-finite solution");
  return {sol.head(n), sol.tail(m)};
}

KktSolution kkt_solve(const SparseMatrix& k, const SparseMatrix& c, const Eigen::VectorXd& r_f,
                      const Eigen::VectorXd& r_c) {
  KktSolver solver;
  return solver.solve(k, c, r_f, r_c);
}

// ---------------------------------------------------------------------------
// Load history and time grid

LoadHistory::LoadHistory(std::vector<std::pair<double, double>> points) {
  for (std::size_t i = 0; i < points.size(); ++i) {
    auto [t, q] = points[i];
    if (!std::isfinite(t) || !std::isfinite(q)) throw ArgumentError("load breakpoints must be finite");
    if (!points_.empty()) {
      const double prev = points_.back().first;
      if (t < prev) throw ArgumentError("load breakpoint times must be non-decreasing");
      if (t == prev) t = prev + kJumpRamp;
      if (i + 1 < points.size() && points[i + 1].first < t)
        throw ArgumentError("load jump overlaps the next breakpoint");
    }
    points_.emplace_back(t, q);
  }
}

LoadHistory LoadHistory::ramp_and_hold(double q, double ramp_time, double end_time) {
  if (!(ramp_time > 0.0) || !(end_time > ramp_time))
    throw ArgumentError("ramp_and_hold needs 0 < ramp_time < end_time");
  return LoadHistory({{0.0, 0.0}, {ramp_time, q}, {end_time, q}});
}

double LoadHistory::intensity(double t) const {
  if (points_.empty()) return 0.0;
  if (t <= points_.front().first) return points_.front().second;
  if (t >= points_.back().first) return points_.back().second;
  const auto it = std::upper_bound(points_.begin(), points_.end(), t,
                                   [](double x, const auto& p) { return x < p.first; });
  const auto& [t1, q1] = *it;
  const auto& [t0, q0] = *(it - 1);
  return q0 + (q1 - q0) * (t - t0) / (t1 - t0);
}

TimeGrid::TimeGrid(std::vector<double> times) : times_(std::move(times)) {
  if (times_.empty() || times_.front() != 0.0) throw ArgumentError("time grid must start at t = 0");
  for (std::size_t i = 1; i < times_.size(); ++i)
    if (!(times_[i] > times_[i - 1])) throw ArgumentError("time grid must be strictly increasing");
}

namespace {

void append_points(std::vector<double>& out, double a, double b, std::size_t steps, Spacing s) {
  if (steps == 0) throw ArgumentError("grid segment needs at least one step");
  if (!(b > a)) throw ArgumentError("grid segment end must exceed its start");
  if (s == Spacing::Log && !(a > 0.0))
    throw ArgumentError("log-uniform segment cannot start at t = 0");
  for (std::size_t i = 1; i < steps; ++i) {
    const double f = static_cast<double>(i) / static_cast<double>(steps);
    out.push_back(s == Spacing::Linear ? a + f * (b - a) : a * std::pow(b / a, f));
  }
  out.push_back(b);
}

}  // namespace

TimeGrid TimeGrid::from_segments(const std::vector<GridSegment>& segments) {
  std::vector<double> t{0.0};
  for (const auto& seg : segments) append_points(t, t.back(), seg.t_end, seg.steps, seg.spacing);
  return TimeGrid(std::move(t));
}

TimeGrid TimeGrid::ramp_grid(double t_first, double ramp_time, double t_end,
                             std::size_t ramp_steps, std::size_t hold_steps) {
  return from_segments({{t_first, 1, Spacing::Linear},
                        {ramp_time, ramp_steps, Spacing::Log},
                        {t_end, hold_steps, Spacing::Log}});
}

TimeGrid TimeGrid::refined(std::size_t factor) const {
  if (factor == 0) throw ArgumentError("refinement factor must be positive");
  std::vector<double> t{0.0};
  for (std::size_t i = 1; i < times_.size(); ++i) {
    const double a = times_[i - 1];
    append_points(t, a, times_[i], factor, a > 0.0 ? Spacing::Log : Spacing::Linear);
  }
  return TimeGrid(std::move(t));
}

double StepRecord::sigma_output() const noexcept {
  return std::max(std::abs(sigma_top_ply), std::abs(sigma_bottom_ply));
}

// ---------------------------------------------------------------------------
// Newton solver

NewtonSolver::NewtonSolver(const LaminateModel& model, SolverConfig config)
    : model_(model), config_(config), kkt_(config.pivot_threshold) {
  if (!(config_.eps1 > 0.0) || !(config_.eps2 > 0.0))
    throw ArgumentError("residual tolerances must be positive");
  if (config_.max_iterations < 1) throw ArgumentError("iteration cap must be at least 1");

  const auto& fixed = model_.fixed();
  free_index_.assign(fixed.size(), -1);
  for (std::size_t i = 0; i < fixed.size(); ++i) {
    if (fixed[i]) continue;
    free_index_[i] = static_cast<Eigen::Index>(free_dofs_.size());
    free_dofs_.push_back(static_cast<Eigen::Index>(i));
  }

  // Rows whose displacement dofs are all restrained are identically satisfied.
  const auto rows = model_.constraints();
  for (std::size_t r = 0; r < rows.size(); ++r) {
    const Component c = rows[r].axial ? Component::U : Component::W;
    const std::size_t a = model_.dof(rows[r].interface, rows[r].node, c);
    const std::size_t b = model_.dof(rows[r].interface + 1, rows[r].node, c);
    if (!fixed[a] || !fixed[b]) active_rows_.push_back(static_cast<Eigen::Index>(r));
  }
}

SystemState NewtonSolver::initial_state() const {
  SystemState s;
  s.d = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(model_.dof_count()));
  s.lambda = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(active_rows_.size()));
  s.f_int = s.d;
  s.sections.assign(model_.interlayer_element_count(),
                    SectionState::zero(model_.materials().chain.size()));
  return s;
}

Eigen::VectorXd NewtonSolver::restrict_dofs(const Eigen::VectorXd& full) const {
  Eigen::VectorXd out(static_cast<Eigen::Index>(free_dofs_.size()));
  for (std::size_t i = 0; i < free_dofs_.size(); ++i)
    out[static_cast<Eigen::Index>(i)] = full[free_dofs_[i]];
  return out;
}

SparseMatrix NewtonSolver::restrict_matrix(const SparseMatrix& k) const {
  const auto nf = static_cast<Eigen::Index>(free_dofs_.size());
  std::vector<Eigen::Triplet<double>> t;
  t.reserve(static_cast<std::size_t>(k.nonZeros()));
  for (Eigen::Index j = 0; j < k.outerSize(); ++j) {
    const Eigen::Index cj = free_index_[static_cast<std::size_t>(j)];
    if (cj < 0) continue;
    for (SparseMatrix::InnerIterator it(k, j); it; ++it) {
      const Eigen::Index ri = free_index_[static_cast<std::size_t>(it.row())];
      if (ri >= 0) t.emplace_back(static_cast<int>(ri), static_cast<int>(cj), it.value());
    }
  }
  SparseMatrix out(nf, nf);
  out.setFromTriplets(t.begin(), t.end());
  return out;
}

SparseMatrix NewtonSolver::restrict_jacobian(const SparseMatrix& c) const {
  std::vector<Eigen::Index> row_map(static_cast<std::size_t>(c.rows()), -1);
  for (std::size_t i = 0; i < active_rows_.size(); ++i)
    row_map[static_cast<std::size_t>(active_rows_[i])] = static_cast<Eigen::Index>(i);
  std::vector<Eigen::Triplet<double>> t;
  t.reserve(static_cast<std::size_t>(c.nonZeros()));
  for (Eigen::Index j = 0; j < c.outerSize(); ++j) {
    const Eigen::Index cj = free_index_[static_cast<std::size_t>(j)];
    if (cj < 0) continue;
    for (SparseMatrix::InnerIterator it(c, j); it; ++it) {
      const Eigen::Index ri = row_map[static_cast<std::size_t>(it.row())];
      if (ri >= 0) t.emplace_back(static_cast<int>(ri), static_cast<int>(cj), it.value());
    }
  }
  SparseMatrix out(static_cast<Eigen::Index>(active_rows_.size()),
                   static_cast<Eigen::Index>(free_dofs_.size()));
  out.setFromTriplets(t.begin(), t.end());
  return out;
}

Eigen::VectorXd NewtonSolver::active_residual(const Eigen::VectorXd& c) const {
  Eigen::VectorXd out(static_cast<Eigen::Index>(active_rows_.size()));
  for (std::size_t i = 0; i < active_rows_.size(); ++i)
    out[static_cast<Eigen::Index>(i)] = c[active_rows_[i]];
  return out;
}

Eigen::VectorXd NewtonSolver::expand_multipliers(const Eigen::VectorXd& lambda) const {
  Eigen::VectorXd out = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(model_.constraint_count()));
  for (std::size_t i = 0; i < active_rows_.size(); ++i)
    out[active_rows_[i]] = lambda[static_cast<Eigen::Index>(i)];
  return out;
}

ResidualPair NewtonSolver::residuals(const Eigen::VectorXd& f_int, const Eigen::VectorXd& f_ext,
                                     const Eigen::VectorXd& c, const SparseMatrix& cjac,
                                     const Eigen::VectorXd& lambda) const {
  Eigen::VectorXd r = f_int - f_ext;
  if (cjac.rows() > 0) r += cjac.transpose() * expand_multipliers(lambda);
  const double scale = std::max(f_ext.norm(), 1.0);
  return {restrict_dofs(r).norm() / scale, active_residual(c).norm() / model_.min_thickness()};
}

Eigen::VectorXd NewtonSolver::reactions(const SystemState& state,
                                        const Eigen::VectorXd& f_ext) const {
  Eigen::VectorXd c;
  SparseMatrix cjac;
  model_.compatibility(state.d, c, cjac);
  Eigen::VectorXd r = state.f_int - f_ext;
  if (cjac.rows() > 0) r += cjac.transpose() * expand_multipliers(state.lambda);
  for (Eigen::Index i : free_dofs_) r[i] = 0.0;
  return r;
}

NewtonSolver::StepContext NewtonSolver::prepare(const SystemState& state_n, double dt) const {
  const Materials& mat = model_.materials();
  StepContext ctx{{}, {}, effective_step_moduli(dt, mat.chain, mat.closure)};
  const auto layer = model_.interlayer_index();
  if (!layer) return ctx;

  const SectionProperties& props = model_.layers()[*layer].props;
  ctx.stiffness = SectionStiffness::of(props, ctx.eff);
  const std::vector<GeneralizedStrains> strains_n = model_.interlayer_strains(state_n.d);
  if (state_n.sections.size() != strains_n.size())
    throw ArgumentError("state does not match the interlayer mesh");
  ctx.offsets.reserve(strains_n.size());
  for (std::size_t e = 0; e < strains_n.size(); ++e) {
    const SectionState& s = state_n.sections[e];
    const SectionForces relax = relaxation_force_increments(s, props, ctx.eff, mat.closure);
    ctx.offsets.push_back(history_offsets(s.forces, relax, strains_n[e], ctx.stiffness));
  }
  return ctx;
}

SystemState NewtonSolver::step(const SystemState& state_n, const Eigen::VectorXd& f_ext,
                               double dt) {
  if (f_ext.size() != static_cast<Eigen::Index>(model_.dof_count()))
    throw ArgumentError("external load vector has the wrong size");
  const StepContext ctx = prepare(state_n, dt);

  SystemState next;
  next.d = state_n.d;
  next.lambda = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(active_rows_.size()));

  Eigen::VectorXd f_int, c;
  SparseMatrix cjac, k;
  auto evaluate = [&] {
    model_.assemble(next.d, ctx.stiffness, ctx.offsets, &f_int, nullptr);
    model_.compatibility(next.d, c, cjac);
    const ResidualPair res = residuals(f_int, f_ext, c, cjac, next.lambda);
    next.trace.push_back(res);
    return res;
  };
  auto converged = [&](const ResidualPair& r) {
    return r.eta1 <= config_.eps1 && r.eta2 <= config_.eps2;
  };

  ResidualPair res = evaluate();
  // The predictor residual (lambda = 0) is not a Newton iterate; the divergence
  // guard starts from the first corrected state.
  double min_eta1 = std::numeric_limits<double>::infinity();
  int iter = 0;
  // At least one correction, so that the multipliers are consistent with d.
  while (iter == 0 || !converged(res)) {
    if (iter >= config_.max_iterations) {
      std::ostringstream msg;
      msg << "Newton iteration did not converge in " << config_.max_iterations
          << " iterations (eta1 = " << res.eta1 << ", eta2 = " << res.eta2 << ")";
      throw NonconvergenceError(msg.str(), next.trace);
    }
    model_.assemble(next.d, ctx.stiffness, ctx.offsets, nullptr, &k);
    if (model_.kinematics() == Kinematics::FiniteStrain)
      k += model_.multiplier_stiffness(next.d, expand_multipliers(next.lambda));

    const KktSolution sol = kkt_.solve(restrict_matrix(k), restrict_jacobian(cjac),
                                       restrict_dofs(f_int - f_ext), active_residual(c));
    for (std::size_t i = 0; i < free_dofs_.size(); ++i)
      next.d[free_dofs_[i]] += sol.dd[static_cast<Eigen::Index>(i)];
    next.lambda = sol.lambda;
    ++iter;

    res = evaluate();
    if (!std::isfinite(res.eta1) || !std::isfinite(res.eta2) ||
        res.eta1 > config_.divergence_factor * min_eta1) {
      std::ostringstream msg;
      msg << "Newton iteration diverged at iteration " << iter << " (eta1 = " << res.eta1 << ")";
      throw NonconvergenceError(msg.str(), next.trace);
    }
    min_eta1 = std::min(min_eta1, res.eta1);
  }

  next.iterations = iter;
  next.residual = res;
  next.f_int = f_int;

  // History update with the converged strain increments.
  next.sections = state_n.sections;
  if (const auto layer = model_.interlayer_index()) {
    const SectionProperties& props = model_.layers()[*layer].props;
    const auto& closure = model_.materials().closure;
    const auto strains_n = model_.interlayer_strains(state_n.d);
    const auto strains = model_.interlayer_strains(next.d);
    for (std::size_t e = 0; e < strains.size(); ++e) {
      const GeneralizedStrains de{strains[e].eps0 - strains_n[e].eps0,
                                  strains[e].kappa - strains_n[e].kappa,
                                  strains[e].gamma - strains_n[e].gamma};
      next.sections[e] = update_state(de, state_n.sections[e], props, ctx.eff, closure);
    }
  }
  return next;
}

StepRecord NewtonSolver::record(const SystemState& state, double time, double adjusted_time,
                                double load) const {
  StepRecord r;
  r.time = time;
  r.adjusted_time = adjusted_time;
  r.load = load;
  r.deflection = model_.output_deflection(state.d);
  r.eta1 = state.residual.eta1;
  r.eta2 = state.residual.eta2;
  r.iterations = state.iterations;

  auto extreme = [](double current, double v) {
    return std::abs(v) > std::abs(current) ? v : current;
  };
  std::vector<std::size_t> glass;
  const auto layers = model_.layers();
  for (std::size_t l = 0; l < layers.size(); ++l)
    if (layers[l].kind == LayerKind::Glass) glass.push_back(l);

  const std::size_t node = model_.output_node();
  for (std::size_t i = 0; i < glass.size(); ++i) {
    const auto nodal = model_.glass_stress(state.d, glass[i]);
    for (const auto& s : nodal) r.sigma_max = std::max({r.sigma_max, std::abs(s.top), std::abs(s.bottom)});
    const double at_output = extreme(nodal[node].top, nodal[node].bottom);
    if (i == 0) r.sigma_top_ply = at_output;
    if (i + 1 == glass.size()) r.sigma_bottom_ply = at_output;
  }
  for (const auto& s : state.sections) {
    r.interlayer_n = extreme(r.interlayer_n, s.forces.n);
    r.interlayer_v = extreme(r.interlayer_v, s.forces.v);
    r.interlayer_m = extreme(r.interlayer_m, s.forces.m);
  }
  return r;
}

SystemState newton_solve_step(const LaminateModel& model, const SystemState& state_n,
                              const Eigen::VectorXd& f_ext, double dt,
                              const SolverConfig& config) {
  NewtonSolver solver(model, config);
  return solver.step(state_n, f_ext, dt);
}

// ---------------------------------------------------------------------------
// Time stepping

HistoryResult run_history(const LaminateModel& model, const LoadHistory& load, double temperature,
                          const TimeGrid& grid, const SolverConfig& config,
                          const std::function<void(const StepRecord&)>& on_step) {
  const auto& t = grid.times();
  if (t.size() < 2) throw ArgumentError("time grid needs at least one step");
  if (load.intensity(0.0) != 0.0) throw ArgumentError("load history must start from zero load");
  for (const auto& [tb, qb] : load.points()) {
    if (tb > t.back() * (1.0 + 1e-12)) continue;
    const auto it = std::lower_bound(t.begin(), t.end(), tb * (1.0 - 1e-9));
    if (it == t.end() || std::abs(*it - tb) > 1e-9 * std::max(tb, 1e-300)) {
      std::ostringstream msg;
      msg << "load breakpoint t = " << tb << " s is not a node of the time grid";
      throw ArgumentError(msg.str());
    }
  }

  const double a_t = shift_factor(temperature, model.materials().wlf);
  NewtonSolver solver(model, config);
  HistoryResult out;
  SystemState state = solver.initial_state();
  out.records.reserve(t.size());
  auto emit = [&](const StepRecord& r) {
    out.records.push_back(r);
    if (on_step) on_step(r);
  };
  emit(solver.record(state, 0.0, 0.0, 0.0));

  for (std::size_t k = 1; k < t.size(); ++k) {
    const double q = load.intensity(t[k]);
    try {
      state = solver.step(state, model.external_load(q), (t[k] - t[k - 1]) / a_t);
    } catch (const NonconvergenceError& e) {
      std::ostringstream msg;
      msg << "step " << k << " (t = " << t[k] << " s): " << e.what();
      throw NonconvergenceError(msg.str(), e.trace(), static_cast<long>(k));
    }
    emit(solver.record(state, t[k], t[k] / a_t, q));
  }
  out.final_state = std::move(state);
  return out;
}

}  // namespace lamglass

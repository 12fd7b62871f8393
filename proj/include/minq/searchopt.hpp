#pragma once

// Multistart simplex search over admissible measurements, and an exhaustive
// Bloch-sphere grid used as an independent check for qubit sides.

#include <gsl/gsl_errno.h>
#include <gsl/gsl_multimin.h>

#include <cmath>
#include <cstdint>
#include <functional>
#include <memory>
#include <numbers>
#include <optional>
#include <span>
#include <vector>

#include "minq/measure.hpp"

namespace minq {

enum class Mode { Min, Max };

struct OptimizerConfig {
  int starts = 64;
  int max_iters = 500;  // simplex iterations per pass
  double ftol = 1e-12;
  std::uint64_t seed = 0;
  double degeneracy_tol = kDegeneracyTol;

  void validate() const {
    if (starts < 1) throw InputError("optimizer: starts must be >= 1");
    if (max_iters < 1) throw InputError("optimizer: max_iters must be >= 1");
    if (!(ftol > 0.0)) throw InputError("optimizer: ftol must be > 0");
    if (!(degeneracy_tol >= 0.0)) throw InputError("optimizer: degeneracy_tol must be >= 0");
  }
};

/// Objective over one measurement per searched side, in the order the
/// parameterizations were passed.
using MeasurementObjective = std::function<double(std::span<const ProjectiveMeasurement>)>;

struct OptResult {
  double value = 0.0;
  std::vector<ProjectiveMeasurement> argmeas;
  int starts_agreeing = 0;  // starts finishing within 1e-8 of the best value
  int starts_run = 0;
  long evaluations = 0;
};

namespace detail {

struct SearchProblem {
  const MeasurementObjective* objective = nullptr;
  std::span<const AdmissibleParameterization> params;
  std::vector<BlockAnchor> anchors;
  double sign = 1.0;  // +1 minimizes the objective, -1 maximizes it
  long evaluations = 0;
  bool non_finite = false;

  std::vector<ProjectiveMeasurement> realize(std::span<const double> coords) const {
    std::vector<ProjectiveMeasurement> out;
    out.reserve(params.size());
    std::size_t c = 0;
    for (std::size_t p = 0; p < params.size(); ++p) {
      const auto count = static_cast<std::size_t>(params[p].free_parameter_count);
      out.push_back(realize_admissible(params[p], coords.subspan(c, count), anchors[p]));
      c += count;
    }
    return out;
  }

  double evaluate(std::span<const double> coords) {
    ++evaluations;
    const auto meas = realize(coords);
    return (*objective)(meas);
  }
};

inline double gsl_trampoline(const gsl_vector* v, void* ctx) {
  auto* prob = static_cast<SearchProblem*>(ctx);
  const double value = prob->evaluate(std::span<const double>(v->data, v->size));
  if (!std::isfinite(value)) {
    prob->non_finite = true;
    return 0.0;
  }
  return prob->sign * value;
}

struct MinimizerDeleter {
  void operator()(gsl_multimin_fminimizer* s) const { gsl_multimin_fminimizer_free(s); }
};
struct VectorDeleter {
  void operator()(gsl_vector* v) const { gsl_vector_free(v); }
};

/// One Nelder-Mead pass from `x` (updated in place). Returns the signed value.
/// Stops when the simplex diameter drops below sqrt(ftol): near a smooth
/// optimum the objective error scales with the square of the diameter.
inline double simplex_pass(SearchProblem& prob, std::vector<double>& x, double step, const OptimizerConfig& cfg) {
  const std::size_t dim = x.size();
  std::unique_ptr<gsl_vector, VectorDeleter> start(gsl_vector_alloc(dim));
  std::unique_ptr<gsl_vector, VectorDeleter> steps(gsl_vector_alloc(dim));
  for (std::size_t i = 0; i < dim; ++i) gsl_vector_set(start.get(), i, x[i]);
  gsl_vector_set_all(steps.get(), step);

  std::unique_ptr<gsl_multimin_fminimizer, MinimizerDeleter> s(
      gsl_multimin_fminimizer_alloc(gsl_multimin_fminimizer_nmsimplex2, dim));
  gsl_multimin_function fn{&gsl_trampoline, dim, &prob};
  gsl_multimin_fminimizer_set(s.get(), &fn, start.get(), steps.get());

  const double size_tol = std::sqrt(cfg.ftol);
  for (int iter = 0; iter < cfg.max_iters && !prob.non_finite; ++iter) {
    if (gsl_multimin_fminimizer_iterate(s.get()) != GSL_SUCCESS) break;
    if (gsl_multimin_test_size(gsl_multimin_fminimizer_size(s.get()), size_tol) == GSL_SUCCESS) break;
  }
  if (prob.non_finite) throw NumericalError("optimizer: objective returned a non-finite value");
  const gsl_vector* best = gsl_multimin_fminimizer_x(s.get());
  for (std::size_t i = 0; i < dim; ++i) x[i] = gsl_vector_get(best, i);
  return gsl_multimin_fminimizer_minimum(s.get());
}

inline Rng start_rng(std::uint64_t seed, int start_index) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed & 0xffffffffu), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(start_index), 0x6d696e71u};
  return Rng(seq);
}

}  // namespace detail

/// Best objective value over measurements admissible for every side.
///
/// Each start draws Haar-random anchors for the degenerate blocks and runs a
/// simplex search in generator coordinates around them, followed by one
/// restart pass with a smaller step from the point it reached. When no side
/// has free parameters the single feasible measurement is evaluated once.
inline OptResult optimize_measurement(const MeasurementObjective& objective,
                                      std::span<const AdmissibleParameterization> params, Mode mode,
                                      const OptimizerConfig& cfg) {
  cfg.validate();
  detail::SearchProblem prob;
  prob.objective = &objective;
  prob.params = params;
  prob.sign = mode == Mode::Min ? 1.0 : -1.0;

  int total_coords = 0;
  for (const auto& p : params) total_coords += p.free_parameter_count;

  OptResult result;
  if (total_coords == 0) {
    prob.anchors.assign(params.size(), {});
    result.argmeas = prob.realize({});
    result.value = objective(result.argmeas);
    if (!std::isfinite(result.value)) throw NumericalError("optimizer: objective returned a non-finite value");
    result.evaluations = 1;
    result.starts_run = 1;
    result.starts_agreeing = 1;
    return result;
  }

  std::vector<double> finals;
  finals.reserve(static_cast<std::size_t>(cfg.starts));
  double best_signed = INFINITY;
  std::vector<double> best_x;
  std::vector<BlockAnchor> best_anchors;
  for (int s = 0; s < cfg.starts; ++s) {
    Rng rng = detail::start_rng(cfg.seed, s);
    prob.anchors.clear();
    for (const auto& p : params) prob.anchors.push_back(random_anchor(p, rng));
    std::vector<double> x(static_cast<std::size_t>(total_coords), 0.0);
    double f = detail::simplex_pass(prob, x, 0.5, cfg);
    const double refined = detail::simplex_pass(prob, x, 0.05, cfg);
    f = std::min(f, refined);
    finals.push_back(f);
    if (f < best_signed) {
      best_signed = f;
      best_x = x;
      best_anchors = prob.anchors;
    }
  }

  prob.anchors = best_anchors;
  result.argmeas = prob.realize(best_x);
  result.value = objective(result.argmeas);
  result.evaluations = prob.evaluations + 1;
  result.starts_run = cfg.starts;
  for (double f : finals)
    if (std::abs(f - best_signed) <= 1e-8) ++result.starts_agreeing;
  return result;
}

/// Qubit measurement {|n+>, |n->} along the Bloch direction (theta, phi).
inline ProjectiveMeasurement bloch_measurement(double theta, double phi) {
  ComplexMatrix u(2, 2);
  const double c = std::cos(theta / 2.0);
  const double s = std::sin(theta / 2.0);
  u(0, 0) = c;
  u(1, 0) = std::polar(s, phi);
  u(0, 1) = -std::polar(s, -phi);
  u(1, 1) = c;
  return ProjectiveMeasurement(u);
}

/// Directions on the closed upper hemisphere (n and -n define the same
/// measurement): polar angles pi*i/resolution up to pi/2, 2*resolution azimuths.
inline std::vector<ProjectiveMeasurement> hemisphere_grid(int resolution) {
  std::vector<ProjectiveMeasurement> grid;
  grid.push_back(bloch_measurement(0.0, 0.0));
  for (int i = 1; 2 * i <= resolution; ++i) {
    const double theta = std::numbers::pi * i / resolution;
    for (int j = 0; j < 2 * resolution; ++j) grid.push_back(bloch_measurement(theta, std::numbers::pi * j / resolution));
  }
  return grid;
}

/// Exhaustive grid search for one or two qubit sides whose marginals are
/// maximally mixed (every basis is admissible).
inline double oracle_exhaustive_2d(const MeasurementObjective& objective,
                                   std::span<const AdmissibleParameterization> params, Mode mode, int resolution) {
  if (params.empty() || params.size() > 2) throw InputError("oracle: searches one or two sides");
  for (const auto& p : params) {
    if (p.dim() != 2) throw InputError("oracle: searched side must have dimension 2");
    if (!p.fully_degenerate()) throw InputError("oracle: searched side must have a maximally mixed marginal");
  }
  if (resolution < 2) throw InputError("oracle: resolution must be >= 2");

  const auto grid = hemisphere_grid(resolution);
  double best = mode == Mode::Max ? -INFINITY : INFINITY;
  auto consider = [&](double v) {
    if (!std::isfinite(v)) throw NumericalError("oracle: objective returned a non-finite value");
    best = mode == Mode::Max ? std::max(best, v) : std::min(best, v);
  };
  if (params.size() == 1) {
    for (const auto& a : grid) consider(objective(std::span<const ProjectiveMeasurement>(&a, 1)));
    return best;
  }
  std::vector<ProjectiveMeasurement> pair{grid.front(), grid.front()};
  for (const auto& a : grid) {
    pair[0] = a;
    for (const auto& b : grid) {
      pair[1] = b;
      consider(objective(pair));
    }
  }
  return best;
}

}  // namespace minq

#pragma once

// The `compute` and `sweep` commands. Both validate everything up front and
// buffer their output, so a failure never leaves a partial report behind.

#include <fstream>
#include <iostream>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>
#include "minq/io.hpp"
#include "minq/nonlocality.hpp"
#include "minq/verify.hpp"

namespace minq::cli {

enum ExitCode : int { kOk = 0, kVerifyFailed = 1, kInputError = 2, kNumericalError = 3 };

/// Runs `body`, mapping library exceptions onto the documented exit codes.
template <class Body>
int guarded(std::ostream& err, Body&& body) {
  try {
    return body();
  } catch (const InputError& e) {
    err << "error: " << e.what() << "\n";
    return kInputError;
  } catch (const NumericalError& e) {
    err << "numerical failure: " << e.what() << "\n";
    return kNumericalError;
  }
}

inline std::vector<MeasureId> parse_measure_list(const std::vector<std::string>& names) {
  std::vector<MeasureId> ids;
  for (const auto& raw : names) {
    std::stringstream ss(raw);
    std::string name;
    while (std::getline(ss, name, ',')) {
      if (name.empty()) continue;
      const auto id = parse_measure_id(name);
      if (!id) throw InputError("unknown measure '" + name + "'");
      ids.push_back(*id);
    }
  }
  return ids;
}

// compute --------------------------------------------------------------------

struct ComputeOptions {
  std::string state_path;
  std::vector<std::string> measures{"all"};
  OptimizerConfig cfg;
  double tol = 1e-6;
};

inline bool is_optimized(MeasureId id) {
  return id == MeasureId::HS_MIN || id == MeasureId::GD || id == MeasureId::FMIN_A || id == MeasureId::FMIN_B ||
         id == MeasureId::FMIN_AB;
}

/// "all": the optimized measures, plus the pure-state closed forms when the
/// state is pure (N1_PURE only for 2 x n).
inline std::vector<MeasureId> expand_all(const DensityMatrix& rho) {
  std::vector<MeasureId> ids{MeasureId::HS_MIN, MeasureId::GD, MeasureId::FMIN_A, MeasureId::FMIN_B,
                             MeasureId::FMIN_AB};
  if (rho.purity() >= 1.0 - 1e-8) {
    ids.push_back(MeasureId::CLOSED_PURE);
    if (rho.dim_a() == 2) ids.push_back(MeasureId::N1_PURE);
  }
  return ids;
}

inline nlohmann::json measurement_json(const ProjectiveMeasurement& m) {
  nlohmann::json basis = nlohmann::json::array();
  for (Eigen::Index k = 0; k < m.basis().cols(); ++k) {
    nlohmann::json vec = nlohmann::json::array();
    for (Eigen::Index i = 0; i < m.basis().rows(); ++i)
      vec.push_back({round_to_printed(m.basis()(i, k).real()), round_to_printed(m.basis()(i, k).imag())});
    basis.push_back(vec);
  }
  return basis;
}

inline nlohmann::json report_json(const MeasureReport& rep) {
  nlohmann::json j;
  j["measure_id"] = std::string(to_string(rep.measure_id));
  j["value"] = round_to_printed(rep.value);
  j["method"] = std::string(to_string(rep.method));
  j["state_fingerprint"] = rep.state_fingerprint;
  if (rep.diagnostics) {
    const auto& d = *rep.diagnostics;
    nlohmann::json diag;
    diag["starts_run"] = d.starts_run;
    diag["starts_agreeing"] = d.starts_agreeing;
    diag["evaluations"] = d.evaluations;
    nlohmann::json meas = nlohmann::json::array();
    for (const auto& m : d.argmeas) meas.push_back(measurement_json(m));
    diag["argmeas"] = meas;
    j["diagnostics"] = diag;
  } else {
    j["diagnostics"] = nullptr;
  }
  return j;
}

inline bool near_degenerate(const AdmissibleParameterization& p, double tol) {
  for (Eigen::Index k = 1; k < p.eigenvalues.size(); ++k) {
    const double g = p.eigenvalues(k) - p.eigenvalues(k - 1);
    if (g > 0.0 && g <= 10.0 * tol) return true;
  }
  return false;
}

/// Builds every record before anything is printed.
inline std::vector<nlohmann::json> compute_records(const DensityMatrix& rho, const std::vector<MeasureId>& ids,
                                                   const OptimizerConfig& cfg, double tol) {
  const bool sensitive = near_degenerate(admissible_parameterization(rho.marginal(Side::A), 0.0), cfg.degeneracy_tol) ||
                         near_degenerate(admissible_parameterization(rho.marginal(Side::B), 0.0), cfg.degeneracy_tol);
  std::vector<nlohmann::json> records;
  for (auto id : ids) {
    const MeasureReport rep = compute_measure(rho, id, cfg);
    nlohmann::json j = report_json(rep);
    if (is_optimized(id) && sensitive) {
      OptimizerConfig strict = cfg;
      strict.degeneracy_tol = 0.0;
      OptimizerConfig merged = cfg;
      merged.degeneracy_tol = 10.0 * cfg.degeneracy_tol;
      j["value_strict"] = round_to_printed(compute_measure(rho, id, strict).value);
      j["value_merged"] = round_to_printed(compute_measure(rho, id, merged).value);
    }
    const bool qubit_side = (id == MeasureId::FMIN_A && rho.dim_a() == 2) || (id == MeasureId::FMIN_B && rho.dim_b() == 2);
    if (qubit_side) {
      const double closed = closed_2xn(decompose(rho), id == MeasureId::FMIN_A ? Side::A : Side::B);
      const double gap = std::abs(closed - rep.value);
      j["closed_form_value"] = round_to_printed(closed);
      j["closed_form_gap"] = round_to_printed(gap);
      j["closed_form_agrees"] = gap <= tol;
    }
    records.push_back(std::move(j));
  }
  return records;
}

inline int run_compute(const ComputeOptions& opts, std::ostream& out, std::ostream& err) {
  return guarded(err, [&] {
    opts.cfg.validate();
    if (!(opts.tol > 0.0)) throw InputError("--tol must be > 0");
    const DensityMatrix rho = load_state_file(opts.state_path);
    if (rho.clipped_mass() > 0.0) {
      err << "warning: clipped " << format_value(rho.clipped_mass()) << " of negative eigenvalue mass\n";
    }
    std::vector<MeasureId> ids;
    const bool all = opts.measures.size() == 1 && opts.measures.front() == "all";
    ids = all ? expand_all(rho) : parse_measure_list(opts.measures);
    if (ids.empty()) throw InputError("no measures requested");
    const auto records = compute_records(rho, ids, opts.cfg, opts.tol);
    for (const auto& r : records) out << r.dump() << "\n";
    return static_cast<int>(kOk);
  });
}

// sweep ----------------------------------------------------------------------

struct GridAxis {
  double start = 0.0;
  double stop = 0.0;
  int steps = 1;

  double at(int k) const { return steps == 1 ? start : start + (stop - start) * k / (steps - 1); }
};

inline GridAxis parse_grid_axis(const std::string& text) {
  std::stringstream ss(text);
  std::string a, b, c;
  if (!std::getline(ss, a, ':') || !std::getline(ss, b, ':') || !std::getline(ss, c) || a.empty() || b.empty()) {
    throw InputError("grid '" + text + "' must be start:stop:steps");
  }
  GridAxis g;
  g.start = detail::parse_double(a, 0, "grid.start");
  g.stop = detail::parse_double(b, 0, "grid.stop");
  try {
    std::size_t used = 0;
    g.steps = std::stoi(c, &used);
    if (used != c.size()) throw std::invalid_argument(c);
  } catch (const std::exception&) {
    throw InputError("grid '" + text + "': steps must be an integer");
  }
  if (g.steps < 1) throw InputError("grid '" + text + "': steps must be >= 1");
  return g;
}

enum class Family { BellDiagonal, Werner, Isotropic, SymmetricBd };

inline Family parse_family(const std::string& name) {
  if (name == "bell_diagonal") return Family::BellDiagonal;
  if (name == "werner") return Family::Werner;
  if (name == "isotropic") return Family::Isotropic;
  if (name == "symmetric_bd") return Family::SymmetricBd;
  throw InputError("unknown family '" + name + "' (bell_diagonal, werner, isotropic, symmetric_bd)");
}

struct SweepOptions {
  std::string family;
  std::vector<std::string> grid;  // start:stop:steps per parameter
  std::vector<std::string> measures{"FMIN_AB"};
  int dim = 2;  // local dimension for werner / isotropic
  OptimizerConfig cfg;
  std::string out_path = "-";
};

inline constexpr const char* kSweepHeader = "family,p1,p2,p3,measure,value,method,closed_form_value,abs_gap";

struct SweepPoint {
  std::vector<double> params;  // as printed in p1..p3
  std::optional<DensityMatrix> state;
  std::optional<BellDiagonalParams> bd;
};

inline std::vector<SweepPoint> sweep_points(Family family, const std::vector<GridAxis>& axes, int dim) {
  std::vector<SweepPoint> pts;
  if (family == Family::BellDiagonal) {
    for (int i = 0; i < axes[0].steps; ++i)
      for (int j = 0; j < axes[1].steps; ++j)
        for (int k = 0; k < axes[2].steps; ++k) {
          const BellDiagonalParams c{axes[0].at(i), axes[1].at(j), axes[2].at(k)};
          SweepPoint p{{c.c1, c.c2, c.c3}, std::nullopt, std::nullopt};
          if (c.is_physical()) {
            p.state = bell_diagonal(c);
            p.bd = c;
          }
          pts.push_back(std::move(p));
        }
    return pts;
  }
  for (int i = 0; i < axes[0].steps; ++i) {
    const double x = axes[0].at(i);
    SweepPoint p;
    try {
      switch (family) {
        case Family::SymmetricBd: {
          p.params = {x, x, x};
          const BellDiagonalParams c{x, x, x};
          if (c.is_physical()) {
            p.state = bell_diagonal(c);
            p.bd = c;
          }
          break;
        }
        case Family::Werner:
          p.params = {x};
          p.state = werner(dim, x);
          break;
        case Family::Isotropic:
          p.params = {x};
          p.state = isotropic(dim, x);
          break;
        default:
          break;
      }
    } catch (const InputError&) {
      p.state.reset();
    }
    if (p.state && !p.bd) p.bd = bell_diagonal_params_of(*p.state);
    pts.push_back(std::move(p));
  }
  return pts;
}

inline std::uint64_t point_seed(std::uint64_t seed, std::size_t index) {
  std::uint64_t z = seed + 0x9e3779b97f4a7c15ull * (index + 1);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
  return z ^ (z >> 31);
}

/// Closed-form reference for a sweep row, when the family state has one.
inline std::optional<double> sweep_closed_form(MeasureId id, const SweepPoint& p) {
  if (!p.bd) return std::nullopt;
  const auto v = closed_bell_diagonal(*p.bd);
  switch (id) {
    case MeasureId::HS_MIN: return v.hs;
    case MeasureId::FMIN_A:
    case MeasureId::FMIN_B:
    case MeasureId::FMIN_AB: return v.fmin;
    default: return std::nullopt;
  }
}

inline std::string run_sweep_csv(const SweepOptions& opts, std::ostream& err) {
  opts.cfg.validate();
  const Family family = parse_family(opts.family);
  const std::size_t want = family == Family::BellDiagonal ? 3 : 1;
  if (opts.grid.size() != want) {
    throw InputError("family " + opts.family + " needs " + std::to_string(want) + " --grid axis/axes, got " +
                     std::to_string(opts.grid.size()));
  }
  std::vector<GridAxis> axes;
  for (const auto& g : opts.grid) axes.push_back(parse_grid_axis(g));
  const auto ids = parse_measure_list(opts.measures);
  if (ids.empty()) throw InputError("no measures requested");
  for (auto id : ids) {
    const bool ok = is_optimized(id) || id == MeasureId::BOUND_GAMMA || id == MeasureId::BOUND_S ||
                    id == MeasureId::CLOSED_2XN || id == MeasureId::CLOSED_BD;
    if (!ok) throw InputError("measure " + std::string(to_string(id)) + " is not available in sweeps");
  }
  if ((family == Family::Werner || family == Family::Isotropic) && opts.dim < 2) {
    throw InputError("--dim must be >= 2");
  }
  const auto points = sweep_points(family, axes, opts.dim);

  std::ostringstream csv;
  csv << kSweepHeader << "\n";
  for (std::size_t idx = 0; idx < points.size(); ++idx) {
    const auto& pt = points[idx];
    std::string prefix = opts.family;
    for (std::size_t k = 0; k < 3; ++k) prefix += "," + (k < pt.params.size() ? format_value(pt.params[k]) : "");
    if (!pt.state) {
      err << "warning: skipping unphysical grid point " << prefix << "\n";
      csv << prefix << ",,,skipped,,\n";
      continue;
    }
    OptimizerConfig cfg = opts.cfg;
    cfg.seed = point_seed(opts.cfg.seed, idx);
    for (auto id : ids) {
      if ((id == MeasureId::CLOSED_BD && !pt.bd) || (id == MeasureId::CLOSED_2XN && pt.state->dim_a() != 2)) {
        csv << prefix << "," << to_string(id) << ",,skipped,,\n";
        continue;
      }
      const MeasureReport rep = compute_measure(*pt.state, id, cfg);
      csv << prefix << "," << to_string(id) << "," << format_value(rep.value) << "," << to_string(rep.method) << ",";
      if (const auto closed = sweep_closed_form(id, pt)) {
        csv << format_value(*closed) << "," << format_value(std::abs(rep.value - *closed));
      } else {
        csv << ",";
      }
      csv << "\n";
    }
  }
  return csv.str();
}

inline int run_sweep(const SweepOptions& opts, std::ostream& out, std::ostream& err) {
  return guarded(err, [&] {
    const std::string csv = run_sweep_csv(opts, err);
    if (opts.out_path == "-") {
      out << csv;
    } else {
      std::ofstream f(opts.out_path, std::ios::binary);
      if (!f) throw InputError("cannot write '" + opts.out_path + "'");
      f << csv;
    }
    return static_cast<int>(kOk);
  });
}

// verify ---------------------------------------------------------------------

struct VerifyOptions {
  std::string suite = "all";
  int trials = 100;
  OptimizerConfig cfg;
};

inline int run_verify(const VerifyOptions& opts, std::ostream& out, std::ostream& err) {
  return guarded(err, [&] {
    opts.cfg.validate();
    const auto results = run_verify_suites(opts.suite, opts.trials, opts.cfg.seed, opts.cfg);
    print_verify_results(results, out);
    const bool ok = std::all_of(results.begin(), results.end(), [](const auto& r) { return r.pass(); });
    return static_cast<int>(ok ? kOk : kVerifyFailed);
  });
}

}  // namespace minq::cli

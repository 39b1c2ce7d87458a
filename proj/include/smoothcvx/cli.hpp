#pragma once

// Command implementations behind the smoothcvx executable. Each run_*
// function writes its artifact to cfg.out (atomically) or to `out`, writes
// diagnostics to `err`, and returns the process exit code.

#include "smoothcvx/bounds.hpp"
#include "smoothcvx/chain_qcqp.hpp"
#include "smoothcvx/counterexample.hpp"
#include "smoothcvx/errors.hpp"
#include "smoothcvx/exact.hpp"
#include "smoothcvx/export.hpp"
#include "smoothcvx/interpolation.hpp"
#include "smoothcvx/property_suite.hpp"

#include <nlohmann/json.hpp>

#include <cmath>
#include <cstdint>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

namespace smoothcvx {

enum class Command { Verify, Contour, Region, Sweep, Solve, Interpolate };
enum class Format { Csv, Json, Svg };

namespace exit_code {
inline constexpr int ok = 0;
inline constexpr int check_failed = 1;
inline constexpr int all_infeasible = 2;
inline constexpr int solver_failure = 3;
inline constexpr int bad_input = 4;
}  // namespace exit_code

struct ContourGrid {
  // nx, ny count cells; nodes are nx + 1 by ny + 1. The default y range
  // starts 73/45840 above the open boundary so that x1 = 0 is a node.
  std::string xmin = "-3/2";
  std::string xmax = "5/2";
  std::string ymin = "-18/191";
  std::string ymax = "2";
  std::size_t nx = 400;
  std::size_t ny = 400;
};

struct SweepGrid {
  double s_min = 0.5;
  double s_max = std::sqrt(0.5);
  std::size_t s_steps = 60;
  std::vector<std::size_t> N_list{1, 2, 5, 50};
  SweepBase base;
};

struct RunConfig {
  Command command = Command::Verify;
  std::string input;  // JSON path for solve / interpolate
  std::string out;    // empty: standard output
  Format format = Format::Csv;
  std::uint64_t seed = 20190101;
  SolverConfig solver;
  unsigned workers = 1;
  bool reduce = true;

  // verify
  std::string grid_spacing = "1/16";
  std::size_t perturb_piece = 0;  // test hook: 0 disables
  std::string perturb_constant = "0";

  ContourGrid contour;
  std::size_t region_steps = 1000;
  SweepGrid sweep;

  // interpolate
  std::size_t t_steps = 100;
  std::optional<double> lambda;

  bool valid_format() const {
    if (format != Format::Svg) return true;
    return command == Command::Contour || command == Command::Region || command == Command::Sweep;
  }
};

namespace detail {

inline int emit(const RunConfig& cfg, const std::string& content, std::ostream& out) {
  if (cfg.out.empty()) {
    out << content;
    out.flush();
  } else {
    write_file_atomic(cfg.out, content);
  }
  return exit_code::ok;
}

inline nlohmann::json read_json_file(const std::string& path) {
  if (path.empty()) throw std::invalid_argument("--in is required");
  std::ifstream is(path);
  if (!is) throw std::invalid_argument("cannot open " + path);
  try {
    return nlohmann::json::parse(is);
  } catch (const nlohmann::json::parse_error& e) {
    throw std::invalid_argument(std::string("malformed JSON in ") + path + ": " + e.what());
  }
}

inline std::vector<double> linspace(double lo, double hi, std::size_t n) {
  std::vector<double> v;
  if (n == 1) return {lo};
  for (std::size_t k = 0; k < n; ++k)
    v.push_back(k + 1 == n ? hi : lo + (hi - lo) * static_cast<double>(k) / static_cast<double>(n - 1));
  return v;
}

}  // namespace detail

inline int run_verify(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
  SuiteConfig suite;
  suite.seed = cfg.seed;
  suite.grid_spacing = parse_rational(cfg.grid_spacing);
  if (suite.grid_spacing <= 0) throw std::invalid_argument("grid spacing must be positive");

  PiecewiseQuadratic f = make_counterexample();
  if (cfg.perturb_piece != 0) {
    if (cfg.perturb_piece > f.pieces().size()) throw std::invalid_argument("no such piece");
    f.pieces()[cfg.perturb_piece - 1].quadratic.c += parse_rational(cfg.perturb_constant);
  }

  const VerificationReport report = full_verification(f, suite);
  std::ostringstream os;
  if (cfg.format == Format::Json) {
    os << report.to_json().dump(2) << '\n';
  } else {
    report.write_text(os);
  }
  detail::emit(cfg, os.str(), out);
  if (!report.all_passed()) {
    err << "verification failed\n";
    return exit_code::check_failed;
  }
  return exit_code::ok;
}

inline int run_contour(const RunConfig& cfg, std::ostream& out, std::ostream& /*err*/) {
  const ContourGrid& g = cfg.contour;
  const ExactScalar xmin = parse_rational(g.xmin), xmax = parse_rational(g.xmax);
  const ExactScalar ymin = parse_rational(g.ymin), ymax = parse_rational(g.ymax);
  const PiecewiseQuadratic& f = counterexample();
  if (g.nx < 1 || g.ny < 1) throw std::invalid_argument("nx and ny must be positive");
  if (!(xmin < xmax) || !(ymin < ymax)) throw std::invalid_argument("empty contour window");
  if (!f.in_domain({xmin, ymin})) throw std::invalid_argument("ymin must lie strictly above -23/240");

  const ExactScalar dx = (xmax - xmin) / static_cast<long>(g.nx);
  const ExactScalar dy = (ymax - ymin) / static_cast<long>(g.ny);
  std::vector<HeatCell> cells;
  CsvWriter csv({"x0", "x1", "piece", "value"});
  nlohmann::json rows = nlohmann::json::array();
  for (std::size_t j = 0; j <= g.ny; ++j) {
    const ExactScalar y = ymin + dy * static_cast<long>(j);
    for (std::size_t i = 0; i <= g.nx; ++i) {
      const ExactPoint p{xmin + dx * static_cast<long>(i), y};
      const std::size_t piece = f.classify_region(p);
      const ExactScalar v = f.piece(piece).quadratic.value(to_vec(p));
      switch (cfg.format) {
        case Format::Csv: csv.row(to_decimal(p.x0), to_decimal(p.x1), piece, to_decimal(v)); break;
        case Format::Json:
          rows.push_back({{"x0", p.x0.get_d()}, {"x1", p.x1.get_d()}, {"piece", piece}, {"value", v.get_d()}});
          break;
        case Format::Svg: cells.push_back({p.x0.get_d(), p.x1.get_d(), v.get_d(), static_cast<int>(piece)}); break;
      }
    }
  }
  if (cfg.format == Format::Csv) return detail::emit(cfg, csv.str(), out);
  if (cfg.format == Format::Json) return detail::emit(cfg, rows.dump() + "\n", out);
  return detail::emit(cfg, heatmap_svg("F over its domain", cells, g.nx + 1, g.ny + 1), out);
}

inline int run_region(const RunConfig& cfg, std::ostream& out, std::ostream& /*err*/) {
  if (cfg.region_steps < 1) throw std::invalid_argument("--steps must be positive");
  CsvWriter csv({"t", "inner_lo", "inner_hi", "outer_lo", "outer_hi"});
  nlohmann::json rows = nlohmann::json::array();
  Band inner{"global bound", "#1f77b4", {}, {}, {}, false};
  Band outer{"descent lemma", "#d62728", {}, {}, {}, true};
  for (std::size_t k = 0; k <= cfg.region_steps; ++k) {
    const double t = static_cast<double>(k) / static_cast<double>(cfg.region_steps);
    const RegionPair r = analytical_region(t);
    csv.row(t, r.inner.lo, r.inner.hi, r.outer.lo, r.outer.hi);
    rows.push_back({{"t", t}, {"inner_lo", r.inner.lo}, {"inner_hi", r.inner.hi}, {"outer_lo", r.outer.lo},
                    {"outer_hi", r.outer.hi}});
    inner.x.push_back(t);
    inner.lo.push_back(r.inner.lo);
    inner.hi.push_back(r.inner.hi);
    outer.x.push_back(t);
    outer.lo.push_back(r.outer.lo);
    outer.hi.push_back(r.outer.hi);
  }
  if (cfg.format == Format::Csv) return detail::emit(cfg, csv.str(), out);
  if (cfg.format == Format::Json) return detail::emit(cfg, rows.dump(2) + "\n", out);
  return detail::emit(cfg, band_plot_svg("Allowed f(y) - f(x)", "<f'(y), y - x>", "f(y) - f(x)", {outer, inner}), out);
}

inline int run_sweep(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
  const SweepGrid& g = cfg.sweep;
  if (g.s_steps < 1 || g.N_list.empty()) throw std::invalid_argument("empty sweep grid");
  for (std::size_t N : g.N_list)
    if (N < 1) throw std::invalid_argument("N values must be positive");
  const std::vector<double> s_grid = detail::linspace(g.s_min, g.s_max, g.s_steps);
  const std::vector<SweepRow> rows = sweep(g.base, s_grid, g.N_list, cfg.solver, cfg.workers);

  bool any_feasible = false, any_failure = false;
  for (const auto& r : rows) {
    any_feasible = any_feasible || r.status != SolveStatus::Infeasible;
    any_failure = any_failure || r.status == SolveStatus::IterationLimit;
  }

  if (cfg.format == Format::Svg) {
    static const char* palette[] = {"#1f77b4", "#ff7f0e", "#2ca02c", "#d62728", "#9467bd", "#8c564b"};
    std::vector<Band> bands;
    for (std::size_t k = 0; k < g.N_list.size(); ++k) {
      Band b{"N = " + std::to_string(g.N_list[k]), palette[k % 6], {}, {}, {}, false};
      for (const auto& r : rows)
        if (r.N == g.N_list[k] && r.status == SolveStatus::Optimal) {
          b.x.push_back(r.s);
          b.lo.push_back(r.B);
          b.hi.push_back(r.U);
        }
      bands.push_back(std::move(b));
    }
    detail::emit(cfg, band_plot_svg("Chain bounds on f(y)", "<f'(y), y>", "f(y)", bands), out);
  } else if (cfg.format == Format::Json) {
    nlohmann::json arr = nlohmann::json::array();
    for (const auto& r : rows) {
      auto num = [](double v) { return std::isfinite(v) ? nlohmann::json(v) : nlohmann::json(nullptr); };
      arr.push_back({{"s", r.s}, {"N", r.N}, {"B", num(r.B)}, {"U", num(r.U)}, {"status", to_string(r.status)}});
    }
    detail::emit(cfg, arr.dump(2) + "\n", out);
  } else {
    CsvWriter csv({"s", "N", "B", "U", "status"});
    for (const auto& r : rows) csv.row(r.s, r.N, r.B, r.U, std::string(to_string(r.status)));
    detail::emit(cfg, csv.str(), out);
  }

  if (!any_feasible) {
    err << "every sweep row is infeasible\n";
    return exit_code::all_infeasible;
  }
  if (any_failure) {
    err << "solver hit its iteration limit on some rows\n";
    return exit_code::solver_failure;
  }
  return exit_code::ok;
}

inline int run_solve(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
  const ChainSpec spec = chain_spec_from_json(detail::read_json_file(cfg.input));
  const BoundResult res = solve(build_problem(spec, cfg.reduce), cfg.solver);
  detail::emit(cfg, to_json(res).dump(2) + "\n", out);
  if (res.status == SolveStatus::Infeasible) {
    err << "the chain program is infeasible\n";
    return exit_code::all_infeasible;
  }
  if (res.status == SolveStatus::IterationLimit) {
    err << "solver hit its iteration limit\n";
    return exit_code::solver_failure;
  }
  return exit_code::ok;
}

/// Samples F_u or F_b for the spec's direction. With --lambda, or with an
/// "f_y" field in the spec, both chains are solved and combined; f_y picks
/// lambda so that the combination attains f_y at y.
inline int run_interpolate(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
  const nlohmann::json j = detail::read_json_file(cfg.input);
  const ChainSpec spec = chain_spec_from_json(j);
  if (cfg.t_steps < 1) throw std::invalid_argument("--t-steps must be positive");
  std::optional<double> f_y;
  if (j.contains("f_y")) {
    if (!j.at("f_y").is_number()) throw std::invalid_argument("'f_y' must be a number");
    f_y = j.at("f_y").get<double>();
  }
  if (cfg.lambda && !(*cfg.lambda >= 0.0 && *cfg.lambda <= 1.0)) throw RangeError("lambda outside [0, 1]");

  const double tol = std::max(1e-12, 2.0 * cfg.solver.feas_tol);
  auto interpolant_for = [&](Direction dir, double& bound) -> std::optional<SegmentInterpolant> {
    ChainSpec s = spec;
    s.direction = dir;
    const BoundResult res = solve(build_problem(s, cfg.reduce), cfg.solver);
    if (res.status != SolveStatus::Optimal) {
      err << to_string(dir) << " chain program: " << to_string(res.status) << '\n';
      return std::nullopt;
    }
    bound = res.value;
    return build_segment_interpolant(spec.L, res.chain, tol);
  };

  double U = 0.0, B = 0.0;
  std::optional<SegmentInterpolant> interp;
  if (cfg.lambda || f_y) {
    const auto Fu = interpolant_for(Direction::Upper, U);
    const auto Fb = interpolant_for(Direction::Lower, B);
    if (!Fu || !Fb) return exit_code::solver_failure;
    double lambda = cfg.lambda.value_or(1.0);
    if (f_y) {
      const double width = U - B;
      if (*f_y < B - 1e-9 || *f_y > U + 1e-9) {
        err << "f_y = " << format_double(*f_y) << " lies outside [" << format_double(B) << ", " << format_double(U)
            << "]\n";
        return exit_code::all_infeasible;
      }
      lambda = width > 0.0 ? std::clamp((*f_y - B) / width, 0.0, 1.0) : 1.0;
    }
    interp = combine(*Fu, *Fb, lambda);
  } else {
    interp = interpolant_for(spec.direction, spec.direction == Direction::Upper ? U : B);
    if (!interp) return exit_code::solver_failure;
  }

  const std::vector<SampleRow> rows = sample_interpolant(*interp, cfg.t_steps);
  if (cfg.format == Format::Json) {
    nlohmann::json arr = nlohmann::json::array();
    for (const auto& r : rows) arr.push_back({{"t", r.t}, {"value", r.value}, {"dvalue", r.dvalue}});
    return detail::emit(cfg, arr.dump(2) + "\n", out);
  }
  CsvWriter csv({"t", "value", "dvalue"});
  for (const auto& r : rows) csv.row(r.t, r.value, r.dvalue);
  return detail::emit(cfg, csv.str(), out);
}

/// Dispatches and maps bad input to exit code 4.
inline int run(const RunConfig& cfg, std::ostream& out = std::cout, std::ostream& err = std::cerr) {
  try {
    if (!cfg.valid_format()) throw std::invalid_argument("svg output is only available for contour, region and sweep");
    if (!cfg.solver.valid()) throw std::invalid_argument("invalid solver settings");
    switch (cfg.command) {
      case Command::Verify: return run_verify(cfg, out, err);
      case Command::Contour: return run_contour(cfg, out, err);
      case Command::Region: return run_region(cfg, out, err);
      case Command::Sweep: return run_sweep(cfg, out, err);
      case Command::Solve: return run_solve(cfg, out, err);
      case Command::Interpolate: return run_interpolate(cfg, out, err);
    }
  } catch (const InfeasibleData& e) {
    err << "error: " << e.what() << '\n';
    return exit_code::all_infeasible;
  } catch (const std::invalid_argument& e) {
    err << "error: " << e.what() << '\n';
    return exit_code::bad_input;
  } catch (const std::out_of_range& e) {
    err << "error: " << e.what() << '\n';
    return exit_code::bad_input;
  } catch (const std::domain_error& e) {
    err << "error: " << e.what() << '\n';
    return exit_code::bad_input;
  } catch (const nlohmann::json::exception& e) {
    err << "error: " << e.what() << '\n';
    return exit_code::bad_input;
  }
  return exit_code::bad_input;
}

}  // namespace smoothcvx

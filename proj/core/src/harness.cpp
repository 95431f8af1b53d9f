#include "mstat/harness.hpp"

#include <json.hpp>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <sstream>
#include <stdexcept>
#include <thread>

#include "mstat/merit.hpp"
#include "mstat/residual.hpp"

namespace mstat {

namespace {

inline std::uint64_t splitmix64(std::uint64_t& state) {
  std::uint64_t z = (state += 0x9E3779B97F4A7C15ull);
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
  return z ^ (z >> 31);
}

// 53-bit mantissa draw in [0, 1).
inline double unit_double(std::uint64_t bits) {
  return static_cast<double>(bits >> 11) * 0x1.0p-53;
}

std::string format_double(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

constexpr double kClassificationTol = 1e-6;

RunRecord execute_run(const ExperimentConfig& config, Index run_index) {
  const std::uint64_t seed = derive_seed(config.master_seed, run_index);
  const PrimalDual z0 = random_start(*config.problem, seed);
  const SolveReport report = solve_global(*config.problem, z0, config.options);

  RunRecord rec;
  rec.run_index = run_index;
  rec.derived_seed = seed;
  rec.status = report.status;
  rec.iterations = report.iterations;
  rec.final_residual_norm = report.final_residual_norm;
  rec.final_merit_grad_norm = report.final_merit_grad_norm;
  rec.primal_error =
      config.reference_primal.size() > 0
          ? (report.final_z.x - config.reference_primal).norm()
          : std::numeric_limits<double>::quiet_NaN();
  rec.classification =
      classify_stationarity(*config.problem, report.final_z, kClassificationTol);
  rec.wall_time_ms = report.wall_time_s * 1e3;
  return rec;
}

}  // namespace

std::uint64_t derive_seed(std::uint64_t master_seed, Index run_index) {
  std::uint64_t state =
      master_seed ^ (0xD1B54A32D192ED03ull * static_cast<std::uint64_t>(run_index + 1));
  return splitmix64(state);
}

PrimalDual random_start(const MpccProblem& problem, std::uint64_t seed) {
  const Dims& d = problem.dims();
  const double bound = static_cast<double>(d.n);
  std::uint64_t state = seed;
  Vector z(d.total());
  for (Index i = 0; i < z.size(); ++i) {
    z(i) = -bound + 2.0 * bound * unit_double(splitmix64(state));
  }
  return PrimalDual::unstack(d, z);
}

std::pair<std::vector<RunRecord>, ExperimentSummary> run_experiment(
    const ExperimentConfig& config) {
  if (!config.problem) {
    throw std::invalid_argument("run_experiment: no problem configured");
  }
  if (config.runs < 1) {
    throw std::invalid_argument("run_experiment: runs must be >= 1");
  }

  std::vector<RunRecord> records(static_cast<std::size_t>(config.runs));
  const Index workers = std::max<Index>(1, std::min(config.threads, config.runs));
  if (workers == 1) {
    for (Index r = 0; r < config.runs; ++r) {
      records[static_cast<std::size_t>(r)] = execute_run(config, r);
    }
  } else {
    std::vector<std::thread> pool;
    pool.reserve(static_cast<std::size_t>(workers));
    for (Index w = 0; w < workers; ++w) {
      pool.emplace_back([&, w] {
        for (Index r = w; r < config.runs; r += workers) {
          records[static_cast<std::size_t>(r)] = execute_run(config, r);
        }
      });
    }
    for (auto& t : pool) t.join();
  }

  ExperimentSummary summary;
  summary.runs = config.runs;
  std::vector<double> iters;
  iters.reserve(records.size());
  double err_sum = 0.0;
  for (const RunRecord& rec : records) {
    switch (rec.status) {
      case SolveStatus::converged_residual: ++summary.converged_residual; break;
      case SolveStatus::stationary_merit: ++summary.stationary_merit; break;
      case SolveStatus::max_iter: ++summary.max_iter; break;
      case SolveStatus::line_search_failure: ++summary.line_search_failure; break;
    }
    iters.push_back(static_cast<double>(rec.iterations));
    summary.mean_iterations += static_cast<double>(rec.iterations);
    summary.mean_wall_time_ms += rec.wall_time_ms;
    err_sum += rec.primal_error;
  }
  summary.mean_iterations /= static_cast<double>(config.runs);
  summary.mean_wall_time_ms /= static_cast<double>(config.runs);
  summary.mean_primal_error = err_sum / static_cast<double>(config.runs);
  std::sort(iters.begin(), iters.end());
  const std::size_t mid = iters.size() / 2;
  summary.median_iterations = iters.size() % 2 == 1
                                  ? iters[mid]
                                  : 0.5 * (iters[mid - 1] + iters[mid]);

  if (!config.output_path.empty()) {
    write_csv(records, config.output_path);
  }
  return {std::move(records), summary};
}

void write_csv(const std::vector<RunRecord>& records, std::ostream& out) {
  out << "run,seed,status,iters,resid,merit_grad,err,class,ms\n";
  for (const RunRecord& rec : records) {
    out << rec.run_index << ',' << rec.derived_seed << ','
        << to_string(rec.status) << ',' << rec.iterations << ','
        << format_double(rec.final_residual_norm) << ','
        << format_double(rec.final_merit_grad_norm) << ','
        << format_double(rec.primal_error) << ','
        << to_string(rec.classification) << ','
        << format_double(rec.wall_time_ms) << '\n';
  }
}

void write_csv(const std::vector<RunRecord>& records, const std::string& path) {
  std::ofstream out(path);
  if (!out) {
    throw std::runtime_error("cannot open CSV output file: " + path);
  }
  write_csv(records, out);
}

DiagnoseReport diagnose(const MpccProblem& problem, const PrimalDual& z) {
  const Dims& d = problem.dims();
  DiagnoseReport rep;

  if (d.l > 0) {
    rep.ineq_violation = problem.eval_g(z.x).cwiseMax(0.0).lpNorm<Eigen::Infinity>();
  }
  if (d.m > 0) {
    rep.eq_violation = problem.eval_h(z.x).lpNorm<Eigen::Infinity>();
  }
  if (d.p > 0) {
    const Vector G = problem.eval_G(z.x);
    const Vector H = problem.eval_H(z.x);
    double v = std::max((-G).cwiseMax(0.0).lpNorm<Eigen::Infinity>(),
                        (-H).cwiseMax(0.0).lpNorm<Eigen::Infinity>());
    v = std::max(v, G.cwiseProduct(H).lpNorm<Eigen::Infinity>());
    rep.comp_violation = v;
  }
  rep.feasible = std::max({rep.ineq_violation, rep.eq_violation,
                           rep.comp_violation}) <= kClassificationTol;

  rep.stationarity = classify_stationarity(problem, z, kClassificationTol);
  rep.licq = check_mpcc_licq(problem, z.x);
  rep.relaxed_cq = check_relaxed_lq_cq(problem, z);
  try {
    rep.ssoc = check_mpcc_ssoc(problem, z);
  } catch (const std::runtime_error&) {
    rep.ssoc = std::nullopt;  // enumeration guard exceeded
  }

  rep.residual_norm = assemble_residual(problem, z).norm_inf();
  const MeritEval merit = merit_eval(problem, z);
  rep.merit_value = merit.value;
  rep.merit_grad_norm = merit.grad_norm();
  return rep;
}

std::string format_diagnose(const DiagnoseReport& rep) {
  std::ostringstream out;
  out << "feasible:        " << (rep.feasible ? "yes" : "no") << '\n';
  if (!rep.feasible) {
    out << "  ineq violation: " << format_double(rep.ineq_violation) << '\n'
        << "  eq violation:   " << format_double(rep.eq_violation) << '\n'
        << "  comp violation: " << format_double(rep.comp_violation) << '\n';
  }
  out << "stationarity:    " << to_string(rep.stationarity) << '\n';
  out << "MPCC-LICQ:       " << (rep.licq ? "true" : "false") << '\n';
  out << "relaxed LQ CQ:   " << (rep.relaxed_cq ? "true" : "false") << '\n';
  out << "MPCC-SSOC:       "
      << (rep.ssoc.has_value() ? (*rep.ssoc ? "true" : "false")
                               : "not enumerable (guard exceeded)")
      << '\n';
  out << "|F(z)|_inf:      " << format_double(rep.residual_norm) << '\n';
  out << "merit:           " << format_double(rep.merit_value) << '\n';
  out << "|grad merit|:    " << format_double(rep.merit_grad_norm) << '\n';
  return out.str();
}

PrimalDual load_point_file(const std::string& path, const Dims& dims) {
  std::ifstream in(path);
  if (!in) {
    throw std::runtime_error("cannot open point file: " + path);
  }
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(in);
  } catch (const nlohmann::json::parse_error& e) {
    throw std::runtime_error("point file '" + path + "': " + e.what());
  }

  auto read_vec = [&](const char* field, Index expected) {
    if (!doc.contains(field)) {
      throw std::runtime_error(std::string("point file: missing field '") +
                               field + "'");
    }
    const auto& arr = doc.at(field);
    if (!arr.is_array() || static_cast<Index>(arr.size()) != expected) {
      throw std::runtime_error(std::string("point file: field '") + field +
                               "' must be an array of length " +
                               std::to_string(expected));
    }
    Vector v(expected);
    for (Index i = 0; i < expected; ++i) {
      v(i) = arr.at(static_cast<std::size_t>(i)).get<double>();
    }
    return v;
  };

  PrimalDual z;
  z.x = read_vec("x", dims.n);
  z.lambda = read_vec("lambda", dims.l);
  z.eta = read_vec("eta", dims.m);
  z.mu = read_vec("mu", dims.p);
  z.nu = read_vec("nu", dims.p);
  return z;
}

}  // namespace mstat

#include "qhdyson/cli.hpp"

#include <charconv>
#include <cmath>
#include <filesystem>
#include <optional>
#include <sstream>

#include <CLI11.hpp>

#include "qhdyson/dyson.hpp"
#include "qhdyson/matrix_io.hpp"
#include "qhdyson/models.hpp"
#include "qhdyson/observables.hpp"

namespace qhdyson::cli {

int exit_code_for(ErrorKind kind) noexcept {
  switch (kind) {
    case ErrorKind::ParseError: return kExitUsage;
    case ErrorKind::ComplexSpectrum: return kExitComplexSpectrum;
    case ErrorKind::DefectiveMatrix: return kExitDefective;
    case ErrorKind::EPRegion:
    case ErrorKind::InvalidCoupling:
    case ErrorKind::SingularDysonMap: return kExitModelRegion;
    default: return kExitNumerical;
  }
}

namespace {

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct TolFlags {
  std::optional<double> residual;
  std::optional<double> reality;
  std::optional<double> positivity;
  std::optional<double> defective;

  void attach(CLI::App* cmd) {
    cmd->add_option("--tol-residual", residual, "relative residual tolerance (default 1e-10)");
    cmd->add_option("--tol-reality", reality, "spectral reality tolerance (default 1e-9)");
    cmd->add_option("--tol-positivity", positivity, "positivity floor (default 1e-12)");
    cmd->add_option("--tol-defective", defective,
                    "eigenbasis condition number treated as defective (default 1e8)");
  }

  Tolerances resolve() const {
    Tolerances tol;
    if (residual) tol.residual_rel = *residual;
    if (reality) tol.reality_rel = *reality;
    if (positivity) tol.positivity_rel = *positivity;
    if (defective) tol.defective_cond = *defective;
    try {
      tol.validate();
    } catch (const Error& e) {
      throw UsageError(e.what());
    }
    return tol;
  }
};

OrderedJson tolerances_json(const Tolerances& tol) {
  OrderedJson t;
  t["residual_rel"] = tol.residual_rel;
  t["reality_rel"] = tol.reality_rel;
  t["positivity_rel"] = tol.positivity_rel;
  t["defective_cond"] = tol.defective_cond;
  return t;
}

OrderedJson real_list(const std::vector<double>& values) {
  OrderedJson list = OrderedJson::array();
  for (double v : values) list.push_back(v);
  return list;
}

// Fixed leading keys shared by every report.
OrderedJson report_skeleton(const std::vector<double>& energies, std::string_view family,
                            OrderedJson residuals, OrderedJson metric, OrderedJson avatar,
                            bool passed, const Tolerances& tol) {
  OrderedJson r;
  r["energies"] = real_list(energies);
  r["family"] = std::string(family);
  r["residuals"] = std::move(residuals);
  r["metric"] = std::move(metric);
  r["avatar"] = std::move(avatar);
  r["passed"] = passed;
  r["tolerances"] = tolerances_json(tol);
  return r;
}

double parse_real(const std::string& text) {
  double value = 0.0;
  const char* first = text.data();
  const char* last = first + text.size();
  if (first != last && *first == '+') ++first;
  auto [ptr, ec] = std::from_chars(first, last, value);
  if (ec != std::errc() || ptr != last || !std::isfinite(value)) {
    throw UsageError("not a finite number: '" + text + "'");
  }
  return value;
}

// "re" or "re:im"
Complex parse_complex(const std::string& text) {
  const auto colon = text.find(':');
  if (colon == std::string::npos) return {parse_real(text), 0.0};
  return {parse_real(text.substr(0, colon)), parse_real(text.substr(colon + 1))};
}

std::string shortest(double x) {
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  if (std::isnan(x)) return "nan";
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, x);
  return std::string(buf, ptr);
}

double relative(double numerator, double denominator) {
  return denominator > 0.0 ? numerator / denominator : numerator;
}

// ---------------------------------------------------------------------------

struct HermitizeArgs {
  std::string input;
  std::vector<std::string> k_diag;
  bool hermitian_omega = false;
  std::string output;
  TolFlags tol;
};

int cmd_hermitize(const HermitizeArgs& args, std::ostream& out) {
  const Tolerances tol = args.tol.resolve();
  const ComplexMatrix h = read_matrix_file(args.input);

  HermitizeOptions options;
  options.tol = tol;
  options.hermitian_omega = args.hermitian_omega;
  if (!args.k_diag.empty()) {
    if (static_cast<Eigen::Index>(args.k_diag.size()) != h.rows()) {
      throw UsageError("--k-diag needs " + std::to_string(h.rows()) + " values, got " +
                       std::to_string(args.k_diag.size()));
    }
    ComplexVector k(h.rows());
    for (std::size_t n = 0; n < args.k_diag.size(); ++n) {
      k(static_cast<Eigen::Index>(n)) = parse_complex(args.k_diag[n]);
    }
    options.k_diag = k;
  }

  const HermitizationResult result = hermitize(h, options);
  const HermitizationReport& rep = result.report;
  OrderedJson residuals;
  residuals["quasi_hermiticity"] = rep.residual_quasi_herm;
  residuals["avatar_hermiticity"] = rep.residual_avatar_herm;
  residuals["isospectral"] = rep.residual_isospectral;
  residuals["metric_condition"] = rep.metric_condition;

  const OrderedJson report =
      report_skeleton(rep.energies, to_string(rep.family), std::move(residuals),
                      matrix_to_json(result.metric.theta), matrix_to_json(result.avatar),
                      rep.passed, tol);
  const std::string text = dump_json(report);
  if (!args.output.empty()) write_text_file(args.output, text);
  out << text;
  return rep.passed ? kExitOk : kExitNotPassed;
}

// ---------------------------------------------------------------------------

struct ModelArgs {
  std::string name;
  std::optional<double> omega;
  std::optional<double> alpha;
  std::optional<double> beta;
  std::optional<double> kappa;
  std::optional<double> gamma;
  std::string out_dir = ".";
  TolFlags tol;
};

struct ModelMatrices {
  ComplexMatrix hamiltonian, h, omega, omega_inv, theta;
  OrderedJson parameters;
};

ModelMatrices build_model(const ModelArgs& args, const Tolerances& tol) {
  ModelMatrices m;
  if (args.name == "dimer") {
    DimerParams p;
    if (args.kappa || args.gamma) {
      if (args.omega || args.alpha) {
        throw UsageError("dimer takes either --kappa/--gamma or --omega/--alpha");
      }
      p = dimer_from_coupling(args.kappa.value_or(1.0), args.gamma.value_or(0.0));
    } else {
      p = dimer_from_rapidity(args.omega.value_or(1.0), args.alpha.value_or(0.0));
    }
    const DimerModel d = dimer_build(p, tol);
    m = {d.hamiltonian, d.h, d.omega, d.omega_inv, d.theta, {}};
    m.parameters["omega"] = p.omega;
    m.parameters["alpha"] = p.alpha;
    m.parameters["kappa"] = p.kappa;
    m.parameters["gamma"] = p.gamma;
  } else {
    if (args.kappa || args.gamma) throw UsageError("fermion takes --alpha, --beta, --omega");
    if (!args.alpha || !args.beta) throw UsageError("fermion needs --alpha and --beta");
    const FermionicParams p = fermionic_params(*args.alpha, *args.beta, args.omega.value_or(0.5), tol);
    const FermionicModel f = fermionic_build(p, tol);
    m = {f.hamiltonian, f.h, f.omega, f.omega_inv, f.theta, {}};
    m.parameters["alpha"] = p.alpha;
    m.parameters["beta"] = p.beta;
    m.parameters["omega"] = p.omega;
    m.parameters["sqrt_ab"] = p.sqrt_ab;
    m.parameters["det_D"] = p.det_D;
  }
  return m;
}

int cmd_model(const ModelArgs& args, std::ostream& out) {
  const Tolerances tol = args.tol.resolve();
  const ModelMatrices m = build_model(args, tol);

  const BiorthogonalSystem sys = solve_schrodinger_pair(m.hamiltonian, tol);
  const Metric metric = make_metric(m.theta, tol);
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> twin(m.h, Eigen::EigenvaluesOnly);
  double spectral_gap = 0.0;
  for (Eigen::Index n = 0; n < sys.energies.size(); ++n) {
    spectral_gap = std::max(spectral_gap, std::abs(twin.eigenvalues()(n) - sys.energies(n)));
  }

  OrderedJson residuals;
  residuals["dyson_consistency"] =
      relative((m.omega_inv * m.h * m.omega - m.hamiltonian).norm(), m.hamiltonian.norm());
  residuals["metric_identity"] =
      relative((m.omega.adjoint() * m.omega - m.theta).norm(), m.theta.norm());
  residuals["quasi_hermiticity"] = quasi_hermiticity_residual(m.hamiltonian, metric);
  residuals["isospectral"] = relative(spectral_gap, m.hamiltonian.norm());
  residuals["metric_condition"] = metric.condition();

  const bool passed = residuals["dyson_consistency"].get<double>() <= tol.residual_rel &&
                      residuals["metric_identity"].get<double>() <= tol.residual_rel &&
                      residuals["quasi_hermiticity"].get<double>() <= tol.residual_rel &&
                      residuals["isospectral"].get<double>() <= tol.reality_rel;

  std::vector<double> energies(sys.energies.data(), sys.energies.data() + sys.energies.size());
  OrderedJson report = report_skeleton(energies, "closed-form", std::move(residuals),
                                       matrix_to_json(m.theta), matrix_to_json(m.h), passed, tol);
  report["model"] = args.name;
  report["parameters"] = m.parameters;

  const std::filesystem::path dir(args.out_dir);
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) throw UsageError("cannot create output directory " + dir.string());
  write_matrix_file(dir / "H.json", m.hamiltonian);
  write_matrix_file(dir / "h.json", m.h);
  write_matrix_file(dir / "Omega.json", m.omega);
  write_matrix_file(dir / "Theta.json", m.theta);
  const std::string text = dump_json(report);
  write_text_file(dir / "report.json", text);
  out << text;
  return passed ? kExitOk : kExitNotPassed;
}

// ---------------------------------------------------------------------------

struct ScanArgs {
  double kappa = 1.0;
  double gamma_min = 0.0;
  double gamma_max = 2.0;
  double step = 0.01;
  TolFlags tol;
};

int cmd_scan(const ScanArgs& args, std::ostream& out) {
  const Tolerances tol = args.tol.resolve();
  for (double v : {args.kappa, args.gamma_min, args.gamma_max, args.step}) {
    if (!std::isfinite(v)) throw UsageError("scan flags must be finite");
  }
  if (!(args.step > 0.0)) throw UsageError("--step must be positive");
  if (!(args.gamma_max >= args.gamma_min)) throw UsageError("empty gamma range");
  if (!(args.kappa > 0.0)) throw UsageError("--kappa must be positive");
  const double span = (args.gamma_max - args.gamma_min) / args.step;
  if (span > 1e7) throw UsageError("grid too large");

  const auto count = static_cast<std::size_t>(std::floor(span + 1e-9)) + 1;
  std::vector<double> grid(count);
  for (std::size_t i = 0; i < count; ++i) {
    grid[i] = args.gamma_min + static_cast<double>(i) * args.step;
  }
  const EPScanReport report = ep_scan(args.kappa, grid, tol);

  std::ostringstream csv;
  csv << "gamma,min_gap,eigvec_cond,is_ep\n";
  for (std::size_t i = 0; i < count; ++i) {
    csv << shortest(grid[i]) << ',' << shortest(report.min_gap[i]) << ','
        << shortest(report.eigvec_cond[i]) << ',' << (report.is_ep[i] ? "true" : "false") << '\n';
  }
  out << csv.str();
  return kExitOk;
}

// ---------------------------------------------------------------------------

struct CompatArgs {
  std::string path_h;
  std::string path_a;
  std::uint64_t seed = 0;
  TolFlags tol;
};

int cmd_compat(const CompatArgs& args, std::ostream& out) {
  const Tolerances tol = args.tol.resolve();
  const ComplexMatrix h = read_matrix_file(args.path_h);
  const ComplexMatrix a = read_matrix_file(args.path_a);
  if (h.rows() != a.rows()) throw UsageError("operators have different dimensions");

  const SharedMetricResult result = shared_metric(h, a, tol, args.seed);
  const bool found = result.status == SharedMetricStatus::Found;
  OrderedJson residuals = OrderedJson::object();
  OrderedJson metric = nullptr;
  if (found) {
    residuals["quasi_hermiticity_first"] = quasi_hermiticity_residual(h, *result.theta);
    residuals["quasi_hermiticity_second"] = quasi_hermiticity_residual(a, *result.theta);
    residuals["metric_condition"] = result.theta->condition();
    metric = matrix_to_json(result.theta->theta);
  }
  OrderedJson report =
      report_skeleton({}, "shared", std::move(residuals), std::move(metric), nullptr, found, tol);
  report["status"] = std::string(to_string(result.status));
  report["solution_space_dim"] = result.solution_space_dim;
  report["seed"] = args.seed;
  out << dump_json(report);

  switch (result.status) {
    case SharedMetricStatus::Found: return kExitOk;
    case SharedMetricStatus::NoSharedMetric: return kExitNoSharedMetric;
    case SharedMetricStatus::Inconclusive: return kExitInconclusive;
  }
  return kExitNumerical;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Dyson maps, metrics and Hermitian twins of quasi-Hermitian matrices",
               args.empty() ? "qhdyson" : args.front()};
  app.require_subcommand(1);

  HermitizeArgs herm;
  auto* c_herm = app.add_subcommand("hermitize", "build a Dyson map, metric and Hermitian avatar");
  c_herm->add_option("input", herm.input, "matrix file")->required();
  c_herm->add_option("--k-diag", herm.k_diag, "diagonal of K, entries 're' or 're:im'");
  c_herm->add_flag("--hermitian-omega", herm.hermitian_omega,
                   "rotate the map to its Hermitian representative");
  c_herm->add_option("-o,--output", herm.output, "also write the report to this file");
  herm.tol.attach(c_herm);

  ModelArgs model;
  auto* c_model = app.add_subcommand("model", "closed-form worked models");
  c_model->add_option("name", model.name, "dimer or fermion")
      ->required()
      ->check(CLI::IsMember({"dimer", "fermion"}));
  c_model->add_option("--omega", model.omega, "dimer energy scale / fermion mode energy");
  c_model->add_option("--alpha", model.alpha, "dimer rapidity / fermion pairing amplitude");
  c_model->add_option("--beta", model.beta, "fermion pairing amplitude");
  c_model->add_option("--kappa", model.kappa, "dimer coupling");
  c_model->add_option("--gamma", model.gamma, "dimer gain/loss");
  c_model->add_option("--out", model.out_dir, "output directory (default .)");
  model.tol.attach(c_model);

  ScanArgs scan;
  auto* c_scan = app.add_subcommand("scan", "exceptional-point scan of the dimer, CSV output");
  c_scan->add_option("--kappa", scan.kappa, "coupling");
  c_scan->add_option("--gamma-min", scan.gamma_min, "first grid point");
  c_scan->add_option("--gamma-max", scan.gamma_max, "last grid point");
  c_scan->add_option("--step", scan.step, "grid spacing");
  scan.tol.attach(c_scan);

  CompatArgs compat;
  auto* c_compat = app.add_subcommand("compat", "search for a metric shared by two operators");
  c_compat->add_option("first", compat.path_h, "matrix file")->required();
  c_compat->add_option("second", compat.path_a, "matrix file")->required();
  c_compat->add_option("--seed", compat.seed, "seed for the randomized search (default 0)");
  compat.tol.attach(c_compat);

  std::vector<const char*> argv;
  argv.reserve(args.size() + 1);
  if (args.empty()) argv.push_back("qhdyson");
  for (const auto& a : args) argv.push_back(a.c_str());

  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (c_herm->parsed()) return cmd_hermitize(herm, out);
    if (c_model->parsed()) return cmd_model(model, out);
    if (c_scan->parsed()) return cmd_scan(scan, out);
    if (c_compat->parsed()) return cmd_compat(compat, out);
  } catch (const UsageError& e) {
    err << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return exit_code_for(e.kind());
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitNumerical;
  }
  return kExitUsage;
}

}  // namespace qhdyson::cli

#include "fkp/pipeline.hpp"

#include <chrono>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "fkp/errors.hpp"
#include "fkp/io.hpp"
#include "fkp/random.hpp"

namespace fkp {

namespace {

constexpr const char* kVersion = "0.1.0";

template <typename T>
std::vector<T> broadcast(const nlohmann::json& v, int nu, const char* key) {
  std::vector<T> out;
  if (v.is_array()) {
    out = v.get<std::vector<T>>();
  } else {
    out.assign(static_cast<std::size_t>(nu), v.get<T>());
  }
  if (static_cast<int>(out.size()) != nu)
    throw InvalidInput(std::string("config: '") + key + "' must have nu = " + std::to_string(nu) + " entries");
  return out;
}

SolverPath parse_solver(const std::string& s) {
  if (s == "classical") return SolverPath::Classical;
  if (s == "vqe") return SolverPath::Vqe;
  if (s == "both") return SolverPath::Both;
  throw InvalidInput("config: solver must be classical, vqe or both");
}

const char* solver_name(SolverPath p) {
  switch (p) {
    case SolverPath::Classical: return "classical";
    case SolverPath::Vqe: return "vqe";
    case SolverPath::Both: return "both";
  }
  return "?";
}

// "kind key=value ..." -> kind plus options.
std::pair<std::string, std::map<std::string, std::string>> split_spec(const std::string& spec) {
  std::istringstream is(spec);
  std::string kind;
  is >> kind;
  std::map<std::string, std::string> opts;
  std::string tok;
  while (is >> tok) {
    const auto eq = tok.find('=');
    if (eq == std::string::npos) throw InvalidInput("dataset spec: expected key=value, got '" + tok + "'");
    opts[tok.substr(0, eq)] = tok.substr(eq + 1);
  }
  return {kind, opts};
}

Eigen::Index parse_nd(const std::map<std::string, std::string>& opts) {
  const auto it = opts.find("nd");
  if (it == opts.end()) throw InvalidInput("dataset spec: missing nd=<count>");
  try {
    const long long v = std::stoll(it->second);
    if (v < 2) throw InvalidInput("dataset spec: nd must be >= 2");
    return static_cast<Eigen::Index>(v);
  } catch (const std::logic_error&) {
    throw InvalidInput("dataset spec: bad nd value '" + it->second + "'");
  }
}

std::string join(const std::string& dir, const std::string& name) {
  return (std::filesystem::path(dir) / name).string();
}

void ensure_dir(const std::string& dir) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) throw IoError("cannot create output directory " + dir + ": " + ec.message());
}

void write_manifest(const RunConfig& cfg, const std::string& command, CommandReport& rep, double seconds) {
  nlohmann::json m;
  m["command"] = command;
  m["version"] = kVersion;
  m["config"] = cfg.to_json();
  m["wall_time_seconds"] = seconds;
  m["outputs"] = rep.files;
  m["summary"] = rep.summary;
  const std::string path = join(cfg.out, "manifest.json");
  write_text(path, m.dump(2) + "\n");
  rep.files.push_back(path);
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

}  // namespace

BasisSpec RunConfig::basis() const {
  BasisSpec b;
  b.caps = caps;
  b.omegas = omegas;
  b.centers = centers;
  b.validate();
  if (b.nu() != nu) throw InvalidInput("config: basis dimension does not match nu");
  return b;
}

nlohmann::json RunConfig::to_json() const {
  nlohmann::json j;
  j["dataset"] = dataset;
  j["nu"] = nu;
  j["mu"] = mu;
  j["N"] = n_samples;
  j["seed"] = seed;
  if (dataset_seed) j["dataset_seed"] = *dataset_seed;
  j["coefficients"] = coefficients;
  j["estimator"] = estimator_name(estimator);
  j["normalize"] = normalize;
  j["caps"] = caps;
  j["omegas"] = omegas;
  j["centers"] = centers;
  j["solver"] = solver_name(solver);
  j["n_eigen"] = n_eigen;
  j["m_opt"] = m_opt;
  j["shots"] = shots;
  if (rho) j["rho"] = *rho;
  j["vqe_repetitions"] = vqe_repetitions;
  j["vqe_restarts"] = vqe_restarts;
  j["vqe_ftol"] = vqe_ftol;
  j["dense_limit"] = dense_limit;
  j["qubit_limit"] = qubit_limit;
  j["sweep"] = sweep;
  j["threads"] = threads;
  j["out"] = out;
  return j;
}

RunConfig parse_config(const nlohmann::json& doc) {
  if (!doc.is_object()) throw InvalidInput("config: top level must be a JSON object");
  static const std::vector<std::string> known = {
      "dataset", "nu",     "mu",      "N",      "seed",   "dataset_seed",    "coefficients",  "estimator",
      "normalize", "caps", "omegas",  "centers", "solver", "n_eigen",        "m_opt",         "shots",
      "rho",     "vqe_repetitions", "vqe_restarts", "vqe_ftol", "dense_limit", "qubit_limit", "sweep", "threads", "out"};
  for (const auto& [k, v] : doc.items())
    if (std::find(known.begin(), known.end(), k) == known.end()) throw InvalidInput("config: unknown key '" + k + "'");

  RunConfig c;
  try {
    c.dataset = doc.value("dataset", c.dataset);
    c.nu = doc.value("nu", c.nu);
    c.mu = doc.value("mu", c.mu);
    c.n_samples = doc.value("N", c.n_samples);
    c.seed = doc.value("seed", c.seed);
    if (doc.contains("dataset_seed")) c.dataset_seed = doc.at("dataset_seed").get<std::uint64_t>();
    c.coefficients = doc.value("coefficients", c.coefficients);
    c.estimator = parse_estimator(doc.value("estimator", std::string(estimator_name(c.estimator))));
    c.normalize = doc.value("normalize", c.normalize);
    if (c.nu < 1) throw InvalidInput("config: nu must be >= 1");
    c.caps = broadcast<int>(doc.value("caps", nlohmann::json(4)), c.nu, "caps");
    c.omegas = broadcast<double>(doc.value("omegas", nlohmann::json(0.5)), c.nu, "omegas");
    c.centers = broadcast<double>(doc.value("centers", nlohmann::json(0.0)), c.nu, "centers");
    c.solver = parse_solver(doc.value("solver", std::string("classical")));
    c.m_opt = doc.value("m_opt", c.m_opt);
    c.n_eigen = doc.value("n_eigen", std::max(c.m_opt, 1));
    c.shots = doc.value("shots", c.shots);
    if (doc.contains("rho")) c.rho = doc.at("rho").get<double>();
    c.vqe_repetitions = doc.value("vqe_repetitions", c.vqe_repetitions);
    c.vqe_restarts = doc.value("vqe_restarts", c.vqe_restarts);
    c.vqe_ftol = doc.value("vqe_ftol", c.vqe_ftol);
    c.dense_limit = doc.value("dense_limit", c.dense_limit);
    c.qubit_limit = doc.value("qubit_limit", c.qubit_limit);
    c.sweep = doc.value("sweep", c.sweep);
    c.threads = doc.value("threads", c.threads);
    c.out = doc.value("out", c.out);
  } catch (const nlohmann::json::exception& e) {
    throw InvalidInput(std::string("config: ") + e.what());
  }
  if (c.mu < 2) throw InvalidInput("config: mu must be >= 2");
  if (c.n_samples < 1) throw InvalidInput("config: N must be >= 1");
  if (c.coefficients != "mc" && c.coefficients != "exact") throw InvalidInput("config: coefficients must be mc or exact");
  if (c.m_opt < 1 || c.n_eigen < 1) throw InvalidInput("config: m_opt and n_eigen must be >= 1");
  if (c.m_opt > c.n_eigen) throw InvalidInput("config: m_opt cannot exceed n_eigen");
  if (c.shots < 0) throw InvalidInput("config: shots must be >= 0");
  if (c.rho && !(*c.rho >= 0.0)) throw InvalidInput("config: rho must be >= 0");
  if (c.vqe_repetitions < 1 || c.vqe_restarts < 1) throw InvalidInput("config: VQE repetitions and restarts must be >= 1");
  if (!(c.vqe_ftol > 0.0)) throw InvalidInput("config: vqe_ftol must be > 0");
  if (c.threads < 1) throw InvalidInput("config: threads must be >= 1");
  for (auto n : c.sweep)
    if (n < 1) throw InvalidInput("config: sweep entries must be >= 1");
  c.basis();
  return c;
}

RunConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open config file: " + path);
  nlohmann::json doc;
  try {
    in >> doc;
  } catch (const nlohmann::json::exception& e) {
    throw InvalidInput("config " + path + ": " + e.what());
  }
  return parse_config(doc);
}

Eigen::MatrixXd generate_raw_dataset(const std::string& kind, Eigen::Index nd, int nu, std::uint64_t seed) {
  const CounterRng rng(seed, 0xDA7A);
  Eigen::MatrixXd pts = rng.normal_block(0, nd, nu);
  if (kind == "gaussian-gkde") return pts;
  if (kind == "two-cluster") {
    // Two equal clusters at +-1.5 along the first axis, spread 0.5.
    pts *= 0.5;
    for (Eigen::Index r = 0; r < nd; ++r) pts(r, 0) += (r % 2 == 0) ? -1.5 : 1.5;
    return pts;
  }
  throw InvalidInput("unknown dataset generator '" + kind + "'");
}

Eigen::MatrixXd evaluation_points(const RunConfig& cfg, const DensityModel& model) {
  if (!model.is_gaussian_reference()) return model.dataset().points;
  const auto [kind, opts] = split_spec(cfg.dataset);
  if (opts.find("nd") == opts.end()) return {};
  return generate_raw_dataset("gaussian-gkde", parse_nd(opts), cfg.nu, cfg.dataset_seed.value_or(cfg.seed));
}

DensityModel make_density(const RunConfig& cfg) {
  if (cfg.dataset.rfind("file", 0) == 0 && (cfg.dataset.size() == 4 || cfg.dataset[4] == ' ')) {
    const auto sp = cfg.dataset.find_first_not_of(' ', 4);
    if (sp == std::string::npos) throw InvalidInput("dataset spec: 'file' needs a path");
    const std::string path = cfg.dataset.substr(sp);
    const Eigen::MatrixXd raw = read_points_csv(path);
    if (raw.cols() != cfg.nu)
      throw InvalidInput("dataset " + path + " has " + std::to_string(raw.cols()) + " columns, config nu = " +
                         std::to_string(cfg.nu));
    return DensityModel::gkde(cfg.normalize ? normalize_dataset(raw) : make_dataset(raw));
  }
  const auto [kind, opts] = split_spec(cfg.dataset);
  if (kind == "gaussian-reference") return DensityModel::gaussian_reference(cfg.nu);
  if (kind == "gaussian-gkde" || kind == "two-cluster") {
    const Eigen::MatrixXd raw = generate_raw_dataset(kind, parse_nd(opts), cfg.nu, cfg.dataset_seed.value_or(cfg.seed));
    return DensityModel::gkde(normalize_dataset(raw));
  }
  throw InvalidInput("unknown dataset spec '" + cfg.dataset + "'");
}

Problem build_problem(const RunConfig& cfg) {
  DensityModel model = make_density(cfg);
  ChaosCoefficients coeffs;
  if (cfg.coefficients == "exact") {
    if (!model.is_gaussian_reference()) throw InvalidInput("config: exact coefficients need the gaussian-reference dataset");
    coeffs = gaussian_reference_coeffs(cfg.nu, cfg.mu);
  } else {
    coeffs = estimate_f_coeffs(model, cfg.mu, cfg.n_samples, cfg.seed, {cfg.estimator, cfg.threads});
  }
  MonomialPotential pot = to_monomial(coeffs);
  BasisSpec basis = cfg.basis();
  LadderPolynomial h = assemble_fkp_ladder(pot, basis);
  Eigen::MatrixXd points = evaluation_points(cfg, model);
  return {std::move(model), std::move(coeffs), std::move(pot), std::move(basis), std::move(h), std::move(points)};
}

SolveOutcome solve(const Problem& p, const RunConfig& cfg) {
  SolveOutcome out;
  const Eigen::Index dim = p.basis.dim();
  if (cfg.n_eigen > dim) throw InvalidInput("config: n_eigen exceeds the basis dimension");
  const bool want_classical = cfg.solver != SolverPath::Vqe;
  const bool want_vqe = cfg.solver != SolverPath::Classical;

  if (want_classical || dim <= cfg.dense_limit) {
    try {
      out.fbr = build_fbr_matrix(p.hamiltonian, p.basis, cfg.dense_limit);
    } catch (const CapacityError&) {
      if (want_classical) throw;
    }
  }
  if (want_classical) out.classical = classical_eigensolve(*out.fbr, cfg.n_eigen);

  if (want_vqe) {
    const QubitLayout layout = QubitLayout::from_basis(p.basis);
    if (layout.n_qubits() > cfg.qubit_limit)
      throw CapacityError("VQE needs " + std::to_string(layout.n_qubits()) + " qubits, above the limit " +
                          std::to_string(cfg.qubit_limit) + " (reduce caps)");
    out.pauli = hamiltonian_to_pauli(p.hamiltonian, layout, p.basis.caps);
    const CompiledObservable compiled(*out.pauli);
    const Ansatz ansatz = Ansatz::build(layout, cfg.vqe_repetitions);
    const Circuit init = initial_guess_circuit(mean_field_guess(compiled, p.basis), layout);
    VqeOptions opts;
    opts.restarts = cfg.vqe_restarts;
    opts.seed = cfg.seed;
    opts.shots = cfg.shots;
    opts.nm.f_tol = cfg.vqe_ftol;
    out.rho = cfg.rho ? *cfg.rho : (out.fbr ? default_penalty(out.fbr->entries) : 10.0);
    std::vector<StateVector<double>> priors;
    for (int k = 0; k < cfg.n_eigen; ++k) {
      VqeOptions ok = opts;
      ok.seed = opts.seed + static_cast<std::uint64_t>(k) * 0x9E37;
      VqeResult r = k == 0 ? optimize(*out.pauli, ansatz, init, ok)
                           : solve_excited(*out.pauli, ansatz, init, priors, out.rho, ok);
      priors.push_back(r.state);
      out.vqe.push_back(std::move(r));
    }
  }
  return out;
}

ExtractOutcome extract(const Problem& p, const SolveOutcome& s, const RunConfig& cfg) {
  if (p.points.rows() == 0)
    throw InvalidInput("extract: no evaluation points (use a dataset, or gaussian-reference nd=<n>)");
  const Eigen::MatrixXd& pts = p.points;
  ExtractOutcome out;
  const auto m_opt = static_cast<std::size_t>(cfg.m_opt);
  if (!s.classical.empty()) {
    std::vector<EigenPair> pairs(s.classical.begin(), s.classical.begin() + static_cast<long>(m_opt));
    out.classical = fkp_basis_classical(p.model, pairs, p.basis, pts);
  }
  if (!s.vqe.empty()) {
    std::vector<Circuit> circuits;
    Eigen::VectorXd lambdas(static_cast<Eigen::Index>(m_opt));
    for (std::size_t m = 0; m < m_opt; ++m) {
      circuits.push_back(s.vqe[m].circuit);
      lambdas(static_cast<Eigen::Index>(m)) = s.vqe[m].lambda;
    }
    out.quantum = fkp_basis_quantum(p.model, circuits, lambdas, p.basis, pts, {cfg.shots, cfg.seed});
    if (out.classical) align_signs(out.classical->values, out.quantum->values);
  }
  return out;
}

CommandReport cmd_pce_validate(const RunConfig& cfg) {
  const auto t0 = std::chrono::steady_clock::now();
  ensure_dir(cfg.out);
  const DensityModel model = make_density(cfg);
  std::vector<std::int64_t> grid = cfg.sweep;
  if (grid.empty()) grid = {1000, 10000, 100000, 1000000, 10000000};

  const bool ref = model.is_gaussian_reference();
  const ConvergenceNorms exact = gaussian_reference_norms(cfg.nu);
  Eigen::MatrixXd table(static_cast<Eigen::Index>(grid.size()), ref ? 7 : 4);
  ChaosCoefficients last;
  for (std::size_t i = 0; i < grid.size(); ++i) {
    last = estimate_f_coeffs(model, cfg.mu, grid[i], cfg.seed, {cfg.estimator, cfg.threads});
    const auto n = convergence_norms(last);
    const auto r = static_cast<Eigen::Index>(i);
    table(r, 0) = static_cast<double>(grid[i]);
    table(r, 1) = n.e_f;
    table(r, 2) = n.e_g;
    table(r, 3) = n.e_h;
    if (ref) {
      table(r, 4) = exact.e_f;
      table(r, 5) = exact.e_g;
      table(r, 6) = exact.e_h;
    }
  }
  CommandReport rep;
  std::vector<std::string> header = {"N", "E_f", "E_g", "E_h"};
  if (ref) header.insert(header.end(), {"E_f_ref", "E_g_ref", "E_h_ref"});
  const std::string csv = join(cfg.out, "pce_convergence.csv");
  write_matrix_csv(csv, table, header);
  const std::string coeffs = join(cfg.out, "chaos_coefficients.json");
  write_text(coeffs, to_json(last).dump(2) + "\n");
  rep.files = {csv, coeffs};
  const auto final_row = table.row(table.rows() - 1);
  rep.summary = {{"N", grid.back()},
                 {"E_f", final_row(1)},
                 {"E_g", final_row(2)},
                 {"E_h", final_row(3)},
                 {"potential_mean", potential_mean_diagnostic(last)}};
  write_manifest(cfg, "pce-validate", rep, seconds_since(t0));
  return rep;
}

namespace {

void write_solve_outputs(const Problem& p, const SolveOutcome& s, const RunConfig& cfg, CommandReport& rep) {
  const std::string coeffs = join(cfg.out, "chaos_coefficients.json");
  write_text(coeffs, to_json(p.coeffs).dump(2) + "\n");
  const std::string mono = join(cfg.out, "monomial_potential.json");
  write_text(mono, to_json(p.potential).dump(2) + "\n");
  rep.files.insert(rep.files.end(), {coeffs, mono});

  nlohmann::json summary;
  if (!s.classical.empty()) {
    const std::string vals = join(cfg.out, "eigenvalues_classical.csv");
    const std::string vecs = join(cfg.out, "eigenvectors_classical.csv");
    write_eigenpairs_csv(vals, vecs, s.classical);
    rep.files.insert(rep.files.end(), {vals, vecs});
    std::vector<double> l;
    for (const auto& e : s.classical) l.push_back(e.lambda);
    summary["lambda_classical"] = l;
    if (s.fbr) summary["fbr_asymmetry"] = s.fbr->asymmetry;
  }
  if (s.fbr && s.fbr->entries.rows() <= 1024) {
    const std::string fbr = join(cfg.out, "fbr_matrix.csv");
    write_matrix_csv(fbr, s.fbr->entries);
    rep.files.push_back(fbr);
  }
  if (!s.vqe.empty()) {
    const std::string ham = join(cfg.out, "hamiltonian_pauli.txt");
    write_text(ham, s.pauli->to_text());
    rep.files.push_back(ham);
    Eigen::MatrixXd vals(static_cast<Eigen::Index>(s.vqe.size()), 5);
    std::vector<double> l;
    for (std::size_t k = 0; k < s.vqe.size(); ++k) {
      const auto& r = s.vqe[k];
      const auto row = static_cast<Eigen::Index>(k);
      vals.row(row) << static_cast<double>(k), r.lambda, r.objective, static_cast<double>(r.evaluations),
          r.converged ? 1.0 : 0.0;
      l.push_back(r.lambda);
      const std::string params = join(cfg.out, "vqe_params_" + std::to_string(k) + ".csv");
      write_matrix_csv(params, r.params, {"tau"});
      Eigen::MatrixXd trace(static_cast<Eigen::Index>(r.trace.size()), 3);
      for (std::size_t t = 0; t < r.trace.size(); ++t)
        trace.row(static_cast<Eigen::Index>(t)) << static_cast<double>(r.trace[t].iteration), r.trace[t].best,
            r.trace[t].spread;
      const std::string tr = join(cfg.out, "vqe_trace_" + std::to_string(k) + ".csv");
      write_matrix_csv(tr, trace, {"iteration", "best_lambda", "simplex_spread"});
      rep.files.insert(rep.files.end(), {params, tr});
    }
    const std::string v = join(cfg.out, "eigenvalues_vqe.csv");
    write_matrix_csv(v, vals, {"index", "lambda", "objective", "evaluations", "converged"});
    rep.files.push_back(v);
    summary["lambda_vqe"] = l;
    summary["rho"] = s.rho;
  }
  if (!s.classical.empty() && !s.vqe.empty()) {
    Eigen::MatrixXd cmp(static_cast<Eigen::Index>(s.vqe.size()), 5);
    for (std::size_t k = 0; k < s.vqe.size(); ++k) {
      const auto row = static_cast<Eigen::Index>(k);
      // Overlap between the VQE state and the re-encoded classical vector.
      const auto ref = run_circuit(prepare_state_circuit(s.classical[k].coeffs, p.basis));
      const double ov = std::abs(ref.dot(s.vqe[k].state));
      cmp.row(row) << static_cast<double>(k), s.classical[k].lambda, s.vqe[k].lambda,
          std::abs(s.classical[k].lambda - s.vqe[k].lambda), ov;
    }
    const std::string c = join(cfg.out, "comparison.csv");
    write_matrix_csv(c, cmp, {"index", "lambda_classical", "lambda_vqe", "abs_diff", "state_overlap"});
    rep.files.push_back(c);
  }
  rep.summary = summary;
}

}  // namespace

CommandReport cmd_solve(const RunConfig& cfg) {
  const auto t0 = std::chrono::steady_clock::now();
  ensure_dir(cfg.out);
  const Problem p = build_problem(cfg);
  const SolveOutcome s = solve(p, cfg);
  CommandReport rep;
  write_solve_outputs(p, s, cfg, rep);
  write_manifest(cfg, "solve", rep, seconds_since(t0));
  return rep;
}

CommandReport cmd_extract(const RunConfig& cfg) {
  const auto t0 = std::chrono::steady_clock::now();
  ensure_dir(cfg.out);
  const Problem p = build_problem(cfg);
  const SolveOutcome s = solve(p, cfg);
  CommandReport rep;
  write_solve_outputs(p, s, cfg, rep);
  const ExtractOutcome e = extract(p, s, cfg);
  const nlohmann::json meta = {{"nd", p.points.rows()}, {"m_opt", cfg.m_opt}, {"shots", cfg.shots}};
  if (e.classical) {
    const std::string path = join(cfg.out, "g_fkp_classical.csv");
    write_fkp_basis(path, *e.classical, meta);
    rep.files.insert(rep.files.end(), {path, path + ".json"});
  }
  if (e.quantum) {
    const std::string path = join(cfg.out, "g_fkp_quantum.csv");
    write_fkp_basis(path, *e.quantum, meta);
    rep.files.insert(rep.files.end(), {path, path + ".json"});
  }
  if (e.classical && e.quantum) {
    const Eigen::VectorXd err = column_relative_error(e.classical->values, e.quantum->values);
    rep.summary["g_fkp_column_relative_error"] = std::vector<double>(err.data(), err.data() + err.size());
  }
  write_manifest(cfg, "extract", rep, seconds_since(t0));
  return rep;
}

}  // namespace fkp

#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "fkp/chaos.hpp"
#include "fkp/density.hpp"
#include "fkp/ladder.hpp"
#include "fkp/monomial.hpp"
#include "fkp/overlap.hpp"
#include "fkp/pauli.hpp"
#include "fkp/vqe.hpp"

namespace fkp {

enum class SolverPath { Classical, Vqe, Both };

struct RunConfig {
  std::string dataset = "gaussian-reference";
  int nu = 1;
  int mu = 4;
  std::int64_t n_samples = 100000;
  std::uint64_t seed = 1;
  std::optional<std::uint64_t> dataset_seed;  // defaults to seed
  std::string coefficients = "mc";            // "mc" or "exact" (Gaussian reference only)
  Estimator estimator = Estimator::Centered;
  bool normalize = true;                      // whiten file datasets

  std::vector<int> caps{4};
  std::vector<double> omegas{0.5};
  std::vector<double> centers{0.0};

  SolverPath solver = SolverPath::Classical;
  int n_eigen = 3;
  int m_opt = 3;
  std::int64_t shots = 0;
  std::optional<double> rho;
  int vqe_repetitions = 2;
  int vqe_restarts = 3;
  double vqe_ftol = 1e-14;  // Nelder-Mead simplex spread tolerance
  Eigen::Index dense_limit = kDefaultDenseLimit;
  int qubit_limit = kDefaultQubitLimit;

  std::vector<std::int64_t> sweep;  // empty selects 10^3 .. 10^7
  int threads = 1;
  std::string out = "fkp_out";

  BasisSpec basis() const;
  nlohmann::json to_json() const;
};

/// Parses a config document; missing keys keep their defaults. Scalar caps,
/// omegas and centers are broadcast to nu entries.
RunConfig parse_config(const nlohmann::json& doc);
RunConfig load_config(const std::string& path);

/// Builds the density named by the dataset spec:
/// "gaussian-reference [nd=<n>]", "gaussian-gkde nd=<n>", "two-cluster nd=<n>", "file <path>".
DensityModel make_density(const RunConfig& cfg);

/// Raw point cloud of a generated dataset spec (before normalization).
Eigen::MatrixXd generate_raw_dataset(const std::string& kind, Eigen::Index nd, int nu, std::uint64_t seed);

/// Points at which g_FKP is evaluated: the training set, or for the Gaussian
/// reference an nd-point standard normal draw (empty when nd is not given).
Eigen::MatrixXd evaluation_points(const RunConfig& cfg, const DensityModel& model);

struct Problem {
  DensityModel model;
  ChaosCoefficients coeffs;
  MonomialPotential potential;
  BasisSpec basis;
  LadderPolynomial hamiltonian;
  Eigen::MatrixXd points;  // g_FKP evaluation points
};

Problem build_problem(const RunConfig& cfg);

struct SolveOutcome {
  std::optional<FbrMatrix> fbr;
  std::vector<EigenPair> classical;
  std::optional<PauliSum> pauli;
  std::vector<VqeResult> vqe;
  double rho = 0.0;
};

SolveOutcome solve(const Problem& problem, const RunConfig& cfg);

struct ExtractOutcome {
  std::optional<FkpBasis> classical;
  std::optional<FkpBasis> quantum;
};

ExtractOutcome extract(const Problem& problem, const SolveOutcome& solved, const RunConfig& cfg);

struct CommandReport {
  std::vector<std::string> files;
  nlohmann::json summary;
};

CommandReport cmd_pce_validate(const RunConfig& cfg);
CommandReport cmd_solve(const RunConfig& cfg);
CommandReport cmd_extract(const RunConfig& cfg);

}  // namespace fkp

#pragma once

#include <string>
#include <vector>

#include <Eigen/Dense>
#include <json.hpp>

#include "fkp/chaos.hpp"
#include "fkp/ladder.hpp"
#include "fkp/monomial.hpp"
#include "fkp/overlap.hpp"

namespace fkp {

/// "%.17g".
std::string format_full(double v);

void write_text(const std::string& path, const std::string& content);

/// Row-major CSV with an optional header row.
void write_matrix_csv(const std::string& path, const Eigen::MatrixXd& m, const std::vector<std::string>& header = {});

nlohmann::json to_json(const ChaosCoefficients& c);
nlohmann::json to_json(const MonomialPotential& p);
nlohmann::json to_json(const BasisSpec& b);

/// Eigenvalues (one row per pair) and eigenvectors (one column per pair).
void write_eigenpairs_csv(const std::string& values_path, const std::string& vectors_path,
                          const std::vector<EigenPair>& pairs);

/// g_FKP matrix plus a JSON sidecar with eigenvalues and metadata.
void write_fkp_basis(const std::string& csv_path, const FkpBasis& basis, const nlohmann::json& metadata);

}  // namespace fkp

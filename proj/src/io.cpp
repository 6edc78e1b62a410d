#include "fkp/io.hpp"

#include <cstdio>
#include <fstream>

#include "fkp/errors.hpp"

namespace fkp {

namespace {

nlohmann::json alpha_json(const MultiIndex& a) { return nlohmann::json(a); }

// nlohmann prints doubles with the shortest round-tripping form, so values
// survive a save/load cycle bit-exactly.
nlohmann::json indexed(const IndexSet& set, const Eigen::VectorXd& v) {
  nlohmann::json arr = nlohmann::json::array();
  for (std::size_t i = 0; i < set.size(); ++i)
    arr.push_back({{"alpha", alpha_json(set[i])}, {"value", v(static_cast<Eigen::Index>(i))}});
  return arr;
}

}  // namespace

std::string format_full(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

void write_text(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot write " + path);
  out << content;
  if (!out) throw IoError("write failed: " + path);
}

void write_matrix_csv(const std::string& path, const Eigen::MatrixXd& m, const std::vector<std::string>& header) {
  std::string s;
  for (std::size_t i = 0; i < header.size(); ++i) s += (i ? "," : "") + header[i];
  if (!header.empty()) s += '\n';
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    for (Eigen::Index c = 0; c < m.cols(); ++c) s += (c ? "," : "") + format_full(m(r, c));
    s += '\n';
  }
  write_text(path, s);
}

nlohmann::json to_json(const ChaosCoefficients& c) {
  nlohmann::json j;
  j["nu"] = c.nu;
  j["mu"] = c.mu;
  j["N"] = c.n_samples;
  j["seed"] = c.seed;
  j["estimator"] = estimator_name(c.estimator);
  j["f"] = indexed(c.a0, c.f);
  j["f_stderr"] = indexed(c.a0, c.f_stderr);
  nlohmann::json g = nlohmann::json::array();
  for (Eigen::Index d = 0; d < c.g.rows(); ++d) g.push_back(indexed(c.a1, c.g.row(d).transpose()));
  j["g"] = g;
  j["h"] = indexed(c.a2, c.h);
  return j;
}

nlohmann::json to_json(const MonomialPotential& p) {
  nlohmann::json j;
  j["nu"] = p.nu;
  j["mu"] = p.mu;
  nlohmann::json quad = nlohmann::json::array();
  for (const auto& t : p.quad_terms()) quad.push_back({{"m", t.m}, {"mp", t.mp}, {"value", t.value}});
  nlohmann::json lin = nlohmann::json::array();
  for (const auto& t : p.lin_terms()) lin.push_back({{"m", t.m}, {"value", t.value}});
  j["quad"] = quad;
  j["lin"] = lin;
  return j;
}

nlohmann::json to_json(const BasisSpec& b) {
  return {{"caps", b.caps}, {"omegas", b.omegas}, {"centers", b.centers}};
}

void write_eigenpairs_csv(const std::string& values_path, const std::string& vectors_path,
                          const std::vector<EigenPair>& pairs) {
  Eigen::MatrixXd vals(static_cast<Eigen::Index>(pairs.size()), 2);
  const Eigen::Index dim = pairs.empty() ? 0 : pairs.front().coeffs.size();
  Eigen::MatrixXd vecs(dim, static_cast<Eigen::Index>(pairs.size()));
  std::vector<std::string> header;
  for (std::size_t k = 0; k < pairs.size(); ++k) {
    vals(static_cast<Eigen::Index>(k), 0) = static_cast<double>(k);
    vals(static_cast<Eigen::Index>(k), 1) = pairs[k].lambda;
    vecs.col(static_cast<Eigen::Index>(k)) = pairs[k].coeffs;
    header.push_back("q" + std::to_string(k));
  }
  write_matrix_csv(values_path, vals, {"index", "lambda"});
  write_matrix_csv(vectors_path, vecs, header);
}

void write_fkp_basis(const std::string& csv_path, const FkpBasis& basis, const nlohmann::json& metadata) {
  std::vector<std::string> header;
  for (Eigen::Index m = 0; m < basis.values.cols(); ++m) header.push_back("g" + std::to_string(m));
  write_matrix_csv(csv_path, basis.values, header);
  nlohmann::json side = metadata;
  side["path"] = basis.path;
  side["eigenvalues"] = std::vector<double>(basis.eigen_lambdas.data(),
                                            basis.eigen_lambdas.data() + basis.eigen_lambdas.size());
  side["rows"] = basis.values.rows();
  side["columns"] = basis.values.cols();
  write_text(csv_path + ".json", side.dump(2) + "\n");
}

}  // namespace fkp

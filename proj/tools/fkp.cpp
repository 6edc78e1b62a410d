// fkp: batch driver for the chaos / FKP / VQE pipeline.
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "fkp/errors.hpp"
#include "fkp/pipeline.hpp"

namespace {

struct Flags {
  std::string config;
  std::optional<std::uint64_t> seed;
  std::optional<int> threads;
  std::optional<std::string> out;
};

void add_common(CLI::App* sub, Flags& f) {
  sub->add_option("--config", f.config, "JSON run configuration")->required();
  sub->add_option("--seed", f.seed, "override the sampling seed");
  sub->add_option("--threads", f.threads, "cap on worker threads")->check(CLI::PositiveNumber);
  sub->add_option("--out", f.out, "output directory");
}

fkp::RunConfig resolve(const Flags& f) {
  fkp::RunConfig cfg = fkp::load_config(f.config);
  if (f.seed) cfg.seed = *f.seed;
  if (f.threads) cfg.threads = *f.threads;
  if (f.out) cfg.out = *f.out;
  return cfg;
}

void report(const fkp::CommandReport& r) {
  for (const auto& file : r.files) std::cout << "wrote " << file << '\n';
  if (!r.summary.is_null()) std::cout << r.summary.dump() << '\n';
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Fokker-Planck chaos basis: PCE validation, classical/VQE eigensolve, g_FKP extraction"};
  app.require_subcommand(1);
  Flags flags;
  auto* pce = app.add_subcommand("pce-validate", "sweep N and write chaos convergence norms");
  auto* solve = app.add_subcommand("solve", "eigenpairs of the FKP operator (classical, vqe or both)");
  auto* extract = app.add_subcommand("extract", "solve, then write the g_FKP basis at the training points");
  for (auto* s : {pce, solve, extract}) add_common(s, flags);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    const fkp::RunConfig cfg = resolve(flags);
    if (*pce) report(fkp::cmd_pce_validate(cfg));
    else if (*solve) report(fkp::cmd_solve(cfg));
    else report(fkp::cmd_extract(cfg));
    return 0;
  } catch (const fkp::CapacityError& e) {
    std::cerr << "capacity error: " << e.what() << '\n';
    return 3;
  } catch (const fkp::InvalidInput& e) {
    std::cerr << "invalid input: " << e.what() << '\n';
    return 2;
  } catch (const fkp::IoError& e) {
    std::cerr << "i/o error: " << e.what() << '\n';
    return 2;
  } catch (const fkp::CircuitError& e) {
    std::cerr << "circuit error: " << e.what() << '\n';
    return 2;
  } catch (const fkp::EncodingError& e) {
    std::cerr << "encoding error: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
}

// Seeded experiment runner: every statistic of the library behind one CLI
// with machine-readable reports. Thread count comes from PRIMAL_THREADS;
// parallelism never changes any result payload.

#include <CLI11.hpp>

#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "primal/runner.hpp"

namespace {

std::vector<primal::i64> parse_int_list(const std::string& text) {
  std::vector<primal::i64> out;
  std::string cleaned;
  for (char ch : text)
    cleaned += (ch == ' ') ? ',' : ch;
  std::stringstream ss(cleaned);
  std::string tok;
  while (std::getline(ss, tok, ',')) {
    if (tok.empty()) continue;
    out.push_back(std::stoll(tok));
  }
  return out;
}

std::vector<std::vector<primal::i64>> parse_basis(const std::string& text) {
  std::vector<std::vector<primal::i64>> rows;
  std::stringstream ss(text);
  std::string row;
  while (std::getline(ss, row, ';')) {
    auto parsed = parse_int_list(row);
    if (!parsed.empty()) rows.push_back(std::move(parsed));
  }
  return rows;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"primal: prime-point statistics on random hypersurfaces"};
  app.require_subcommand(1);

  primal::runner::ExperimentConfig cfg;
  std::string form_text, c_text, basis_text;

  auto add_common = [&](CLI::App* sub) {
    sub->add_option("--seed", cfg.seed, "RNG seed (echoed in the report)");
    sub->add_option("--out", cfg.out_path, "write the report to this file instead of stdout");
    sub->add_option("--format", cfg.format, "json or csv (csv: variance rows only)");
    sub->add_option("--sieve-limit", cfg.sieve_limit, "largest admissible prime bound");
    sub->add_option("--enum-budget", cfg.enum_budget, "lattice/residue enumeration budget");
  };

  auto* density = app.add_subcommand("density", "Monte-Carlo local-solubility density over V(A)");
  density->add_option("--d", cfg.d, "degree")->required();
  density->add_option("--n", cfg.n, "variables minus one")->required();
  density->add_option("--A", cfg.A, "coefficient ball radius");
  density->add_option("--samples", cfg.samples, "number of sampled forms");
  density->add_option("--pmax", cfg.p_max, "largest prime checked");
  density->add_option("--rmax", cfg.r_max, "p-adic depth (0: 2d+3)");
  density->add_flag("--with-product", cfg.with_product,
                    "also estimate (1-s_inf) prod (1-s_p) for cross-validation");
  density->add_option("--product-samples", cfg.product_samples, "samples per place for the product");
  add_common(density);

  auto* local_test = app.add_subcommand("local-test", "local solubility profile of one form");
  local_test->add_option("--d", cfg.d)->required();
  local_test->add_option("--n", cfg.n)->required();
  local_test->add_option("--form", form_text, "comma-separated coefficients")->required();
  local_test->add_option("--pmax", cfg.p_max);
  local_test->add_option("--rmax", cfg.r_max);
  add_common(local_test);

  auto* count = app.add_subcommand("count", "exact N' and N^ploc for one form");
  count->add_option("--d", cfg.d)->required();
  count->add_option("--n", cfg.n)->required();
  count->add_option("--B", cfg.B, "counting scale")->required();
  count->add_option("--form", form_text)->required();
  count->add_flag("--list-solutions", cfg.list_solutions, "include the prime solutions found");
  add_common(count);

  auto* sigma = app.add_subcommand("sigma-stats",
                                   "exact residue density: single value or full mean identity");
  sigma->add_option("--p", cfg.p, "prime");
  sigma->add_option("--r", cfg.r, "prime power exponent");
  sigma->add_option("--N", cfg.N, "coefficient dimension (picks minimal (d,n))");
  sigma->add_option("--d", cfg.d);
  sigma->add_option("--n", cfg.n);
  sigma->add_option("--Q", cfg.Q, "evaluate sigma'(form; Q) directly");
  sigma->add_option("--form", form_text);
  add_common(sigma);

  auto* tau = app.add_subcommand("tau", "Monte-Carlo Archimedean density of one form");
  tau->add_option("--d", cfg.d)->required();
  tau->add_option("--n", cfg.n)->required();
  tau->add_option("--form", form_text)->required();
  tau->add_option("--gamma", cfg.gamma, "cone parameter")->required();
  tau->add_option("--mc-samples", cfg.mc_samples);
  add_common(tau);

  auto* lattice = app.add_subcommand("lattice", "determinant, minima and reduction report");
  lattice->add_option("--c", c_text, "solution/congruence lattice from this vector");
  lattice->add_option("--Q", cfg.lattice_Q, "congruence modulus (with --c)");
  lattice->add_option("--basis", basis_text, "semicolon-separated basis rows");
  lattice->add_option("--X", cfg.lattice_X, "also count points and prime points in this ball");
  add_common(lattice);

  auto* variance = app.add_subcommand("variance", "ensemble mean of (N' - N^ploc)^2");
  variance->add_option("--d", cfg.d)->required();
  variance->add_option("--n", cfg.n)->required();
  variance->add_option("--A", cfg.A, "coefficient ball radius")->required();
  variance->add_option("--B", cfg.B, "counting scale (0: A (log A)^(2n+2+eps))");
  variance->add_option("--samples", cfg.samples);
  variance->add_option("--epsilon", cfg.epsilon);
  add_common(variance);

  auto* eprime = app.add_subcommand("e-prime", "pair intersection sum E'(B)");
  eprime->add_option("--d", cfg.d)->required();
  eprime->add_option("--n", cfg.n)->required();
  eprime->add_option("--B", cfg.B)->required();
  add_common(eprime);

  // unset B for variance default convention unless the flag is given
  cfg.B = 0;

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : 1;
  }

  cfg.subcommand = app.get_subcommands().front()->get_name();
  if (cfg.subcommand == "count" || cfg.subcommand == "e-prime") {
    if (cfg.B <= 0) {
      std::cerr << "error: --B must be positive\n";
      return 1;
    }
  }

  try {
    if (!form_text.empty()) cfg.form_coeffs = parse_int_list(form_text);
    if (!c_text.empty()) cfg.lattice_c = parse_int_list(c_text);
    if (!basis_text.empty()) cfg.lattice_basis = parse_basis(basis_text);
    return primal::runner::run_and_write(cfg);
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const primal::BudgetExceeded& e) {
    std::cerr << "budget exhausted: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}

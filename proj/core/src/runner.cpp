#include "primal/runner.hpp"

#include <chrono>
#include <cmath>
#include <fstream>
#include <iostream>
#include <stdexcept>

#include <nlohmann/json.hpp>

#include "primal/arith.hpp"
#include "primal/counts.hpp"
#include "primal/forms.hpp"
#include "primal/lattice.hpp"
#include "primal/local.hpp"

namespace primal::runner {

using json = nlohmann::ordered_json;

namespace {

json scale_json(const arith::ScaleParams& s) {
  return json{{"B", s.B}, {"w", s.w}, {"W", s.W}, {"alpha", s.alpha}};
}

json real_verdict_json(const local::RealVerdict& v) {
  json j;
  switch (v.status) {
    case local::RealVerdict::Status::soluble: j["status"] = "soluble"; break;
    case local::RealVerdict::Status::insoluble: j["status"] = "insoluble"; break;
    default: j["status"] = "unknown";
  }
  if (v.witness) {
    j["witness"] = v.witness->point;
    j["residual"] = v.witness->residual;
  }
  if (v.status == local::RealVerdict::Status::insoluble) {
    j["mesh_size"] = v.mesh_size;
    j["margin"] = v.margin;
    j["lipschitz"] = v.lipschitz;
  }
  return j;
}

json padic_verdict_json(const local::PadicVerdict& v) {
  json j;
  j["p"] = v.p;
  switch (v.status) {
    case local::PadicVerdict::Status::soluble: j["status"] = "soluble"; break;
    case local::PadicVerdict::Status::insoluble: j["status"] = "insoluble"; break;
    default: j["status"] = "undecided";
  }
  j["level"] = v.level;
  if (v.witness) {
    j["witness"] = v.witness->residues;
    j["witness_level"] = v.witness->level;
    j["grad_valuation"] = v.witness->grad_valuation;
  }
  if (v.budget_hit) j["budget_hit"] = true;
  return j;
}

json obstruction_json(const local::ObstructionEstimate& e) {
  return json{{"s_hat", e.s_hat},
              {"std_error", e.std_error},
              {"undecided_fraction", e.undecided_fraction},
              {"samples", e.samples}};
}

forms::Form form_from_config(const ExperimentConfig& cfg) {
  auto basis = forms::monomial_basis(cfg.d, cfg.n);
  if (cfg.form_coeffs.empty())
    throw std::invalid_argument("this subcommand needs --form with " +
                                std::to_string(basis.size()) + " coefficients");
  if (cfg.form_coeffs.size() != basis.size())
    throw std::invalid_argument("--form needs exactly " + std::to_string(basis.size()) +
                                " coefficients for d=" + std::to_string(cfg.d) +
                                ", n=" + std::to_string(cfg.n));
  return forms::Form::make(std::move(basis), cfg.form_coeffs);
}

// smallest (n, d) with binomial(n + d, d) = N, n scanned first
std::pair<int, int> dimensions_for(int N) {
  for (int n = 1; n <= 16; ++n)
    for (int d = 2; d <= 64; ++d) {
      i64 c = forms::monomial_count(d, n);
      if (c == N) return {d, n};
      if (c > N) break;
    }
  throw std::invalid_argument("sigma-stats: no (d, n) with monomial count " + std::to_string(N));
}

local::ClassifyConfig classify_config(const ExperimentConfig& cfg) {
  local::ClassifyConfig c;
  c.p_max = cfg.p_max;
  c.padic.r_max = cfg.r_max;
  c.padic.seed = cfg.seed;
  c.real.seed = splitmix64(cfg.seed ^ 0x4ea1ULL);
  return c;
}

std::string format_double(double v) { return json(v).dump(); }

json run_density(const ExperimentConfig& cfg, std::vector<std::string>& warnings) {
  auto est = local::estimate_density(cfg.d, cfg.n, cfg.A, cfg.samples, classify_config(cfg),
                                     cfg.seed);
  json res;
  res["rho_hat"] = est.rho_hat;
  res["std_error"] = est.std_error;
  res["undecided_fraction"] = est.undecided_fraction;
  res["samples"] = est.samples;
  res["soluble"] = est.soluble;
  res["insoluble"] = est.insoluble;
  res["undetermined"] = est.undetermined;
  if (est.undetermined > 0)
    warnings.push_back("some samples were undetermined; they are excluded from rho_hat");
  if (cfg.with_product) {
    auto cc = classify_config(cfg);
    auto prod = local::estimate_local_product(cfg.d, cfg.n, cfg.product_samples, cfg.p_max,
                                              cc.padic.r_max > 0 ? cc.padic.r_max : 2 * cfg.d + 3,
                                              cc.real, cfg.seed);
    json pj;
    pj["product"] = prod.product;
    pj["std_error"] = prod.std_error;
    pj["real"] = obstruction_json(prod.real_part);
    json parts = json::object();
    for (auto& [p, e] : prod.padic_parts) parts[std::to_string(p)] = obstruction_json(e);
    pj["padic"] = parts;
    res["local_product"] = pj;
  }
  return res;
}

json run_local_test(const ExperimentConfig& cfg) {
  auto f = form_from_config(cfg);
  auto prof = local::classify(f, classify_config(cfg));
  json res;
  switch (prof.overall) {
    case local::LocalProfile::Overall::soluble: res["overall"] = "soluble"; break;
    case local::LocalProfile::Overall::insoluble: res["overall"] = "insoluble"; break;
    default: res["overall"] = "undetermined";
  }
  if (!prof.obstruction.empty()) res["obstruction"] = prof.obstruction;
  res["p_max"] = prof.p_max;
  res["r_max"] = prof.r_max;
  res["real"] = real_verdict_json(prof.real);
  json padic = json::array();
  for (auto& [p, v] : prof.padic) padic.push_back(padic_verdict_json(v));
  res["padic"] = padic;
  return res;
}

json run_count(const ExperimentConfig& cfg) {
  auto f = form_from_config(cfg);
  counts::XiBudget budget;
  budget.sieve_limit = cfg.sieve_limit;
  auto xi = counts::prime_vectors(cfg.d, cfg.n, cfg.B, budget);
  auto rep = counts::count_solutions(f, xi, cfg.list_solutions);
  json res;
  res["B"] = rep.B;
  res["scale"] = scale_json(rep.scale);
  res["xi_size"] = xi.vectors.size();
  res["solution_count"] = rep.solution_count;
  res["N_prime"] = rep.n_prime;
  res["N_ploc"] = rep.n_ploc;
  res["ploc_terms"] = rep.ploc_terms;
  res["ploc_sum"] = rep.ploc_sum;
  res["mix_weighted_sum"] = counts::solution_harmonic_sum(f, xi);
  res["local_weighted_sum"] = counts::local_harmonic_sum(f, xi);
  if (rep.solutions) res["solutions"] = *rep.solutions;
  return res;
}

json run_sigma_stats(const ExperimentConfig& cfg) {
  json res;
  if (cfg.Q > 0) {
    auto f = form_from_config(cfg);
    auto sigma = local::residue_density(f.coeffs, cfg.Q, f.basis, cfg.enum_budget);
    res["Q"] = cfg.Q;
    res["sigma"] = sigma.str();
    res["sigma_value"] = sigma.to_double();
    return res;
  }
  int d = cfg.d, n = cfg.n;
  if (cfg.N > 0) {
    auto [dd, nn] = dimensions_for(cfg.N);
    d = dd;
    n = nn;
  }
  auto basis = forms::monomial_basis(d, n);
  int N = int(basis.size());
  auto mean = local::residue_density_mean(cfg.p, cfg.r, basis, cfg.enum_budget);
  // closed form (1 - p^-N)^-1 (1 - p^-(N-1)) as an exact rational
  i128 pN = 1;
  for (int i = 0; i < N; ++i) pN = checked_mul(pN, i128(cfg.p));
  i128 pN1 = pN / cfg.p;
  Rational closed = Rational::from_parts(pN, pN - 1) * Rational::from_parts(pN1 - 1, pN1);
  res["p"] = cfg.p;
  res["r"] = cfg.r;
  res["N"] = N;
  res["d"] = d;
  res["n"] = n;
  res["mean_sigma"] = mean.str();
  res["mean_sigma_value"] = mean.to_double();
  res["closed_form"] = closed.str();
  res["matches_closed_form"] = mean == closed;
  return res;
}

json run_tau(const ExperimentConfig& cfg) {
  auto f = form_from_config(cfg);
  local::McConfig mc{cfg.mc_samples, cfg.seed};
  auto est = local::archimedean_density(f, cfg.gamma, mc);
  json res;
  res["gamma"] = cfg.gamma;
  res["estimate"] = est.estimate;
  res["std_error"] = est.std_error;
  res["samples"] = est.samples;
  res["hits"] = est.hits;
  return res;
}

json run_lattice(const ExperimentConfig& cfg, ExperimentReport& report) {
  lattice::IntegerLattice L;
  if (!cfg.lattice_basis.empty()) {
    L = lattice::lattice_from_basis(cfg.lattice_basis);
  } else if (!cfg.lattice_c.empty()) {
    L = cfg.lattice_Q > 0
            ? lattice::congruence_lattice({cfg.lattice_c, cfg.lattice_Q})
            : lattice::solution_lattice(cfg.lattice_c);
  } else {
    throw std::invalid_argument("lattice: provide --basis or --c");
  }

  lattice::EnumerationBudget budget;
  budget.box_limit = cfg.enum_budget;

  json res;
  res["ambient_dim"] = L.ambient_dim();
  res["rank"] = L.rank();
  res["basis"] = L.basis();
  res["det"] = L.determinant();
  res["gram_det"] = L.gram_determinant_str();
  try {
    res["minima"] = L.minima(budget);
    res["minima_sq"] = L.minima_squared(budget);
    res["reduced_basis"] = L.reduced_basis(budget);
    auto loss = lattice::sieve_loss_bounds(L, budget);
    res["sieve_loss"] = json{{"lower", loss.lower}, {"sup_estimate", loss.sup_estimate}};
    if (cfg.lattice_X >= 0) {
      auto points = lattice::enumerate_points(L, cfg.lattice_X, budget);
      res["X"] = cfg.lattice_X;
      res["points_in_ball"] = points.size();
      res["prime_points"] = lattice::prime_point_count(L, cfg.lattice_X, budget);
    }
  } catch (const BudgetExceeded& e) {
    report.warnings.push_back(std::string("budget exhausted: ") + e.what());
    report.exit_code = 2;
  }
  return res;
}

json run_variance(const ExperimentConfig& cfg) {
  counts::XiBudget budget;
  budget.sieve_limit = cfg.sieve_limit;
  auto res = counts::variance_experiment(cfg.d, cfg.n, cfg.A, cfg.B > 0 ? cfg.B : -1, cfg.samples,
                                         cfg.seed, cfg.epsilon, budget);
  json j;
  j["A"] = res.A;
  j["B"] = res.B;
  j["epsilon"] = res.epsilon;
  j["samples"] = res.rows.size();
  j["mean_sq_diff"] = res.mean_sq_diff;
  j["std_error"] = res.std_error;
  j["comparison_scale"] = res.comparison_scale;
  json rows = json::array();
  for (auto& row : res.rows) {
    rows.push_back(json{{"form_id", row.index},
                        {"A", res.A},
                        {"B", res.B},
                        {"N_prime", row.n_prime},
                        {"N_ploc", row.n_ploc},
                        {"diff_sq", row.diff_sq},
                        {"coeffs", row.coeffs}});
  }
  j["rows"] = rows;
  return j;
}

json run_e_prime(const ExperimentConfig& cfg) {
  counts::XiBudget budget;
  budget.sieve_limit = cfg.sieve_limit;
  auto xi = counts::prime_vectors(cfg.d, cfg.n, cfg.B, budget);
  double e = counts::e_prime(cfg.d, cfg.n, cfg.B, budget);
  json res;
  res["B"] = cfg.B;
  res["xi_size"] = xi.vectors.size();
  res["pairs"] = double(xi.vectors.size()) * double(xi.vectors.size() ? xi.vectors.size() - 1 : 0);
  res["E_prime"] = e;
  res["E_prime_over_B_sq"] = e / (cfg.B * cfg.B);  // Lemma-shape annotation, no pass/fail claim
  return res;
}

json config_json(const ExperimentConfig& cfg) {
  json j;
  j["subcommand"] = cfg.subcommand;
  j["d"] = cfg.d;
  j["n"] = cfg.n;
  j["A"] = cfg.A;
  j["B"] = cfg.B;
  j["samples"] = cfg.samples;
  j["mc_samples"] = cfg.mc_samples;
  j["seed"] = cfg.seed;
  j["p_max"] = cfg.p_max;
  j["r_max"] = cfg.r_max;
  j["epsilon"] = cfg.epsilon;
  j["gamma"] = cfg.gamma;
  j["p"] = cfg.p;
  j["N"] = cfg.N;
  j["r"] = cfg.r;
  j["Q"] = cfg.Q;
  j["form"] = cfg.form_coeffs;
  j["list_solutions"] = cfg.list_solutions;
  j["lattice_c"] = cfg.lattice_c;
  j["lattice_Q"] = cfg.lattice_Q;
  j["lattice_basis"] = cfg.lattice_basis;
  j["lattice_X"] = cfg.lattice_X;
  j["with_product"] = cfg.with_product;
  j["product_samples"] = cfg.product_samples;
  j["sieve_limit"] = cfg.sieve_limit;
  j["enum_budget"] = cfg.enum_budget;
  j["format"] = cfg.format;
  return j;
}

std::string variance_csv(const json& results) {
  std::string out = "form_id,A,B,N_prime,N_ploc,diff_sq\n";
  for (auto& row : results.at("rows")) {
    out += row.at("form_id").dump();
    out += ",";
    out += row.at("A").dump();
    out += ",";
    out += row.at("B").dump();
    out += ",";
    out += row.at("N_prime").dump();
    out += ",";
    out += row.at("N_ploc").dump();
    out += ",";
    out += row.at("diff_sq").dump();
    out += "\n";
  }
  return out;
}

}  // namespace

ExperimentReport run(const ExperimentConfig& cfg) {
  if (cfg.format != "json" && cfg.format != "csv")
    throw std::invalid_argument("format must be json or csv");
  if (cfg.format == "csv" && cfg.subcommand != "variance")
    throw std::invalid_argument("csv output is defined for the variance subcommand only");

  ExperimentReport report;
  auto start = std::chrono::steady_clock::now();

  json results;
  try {
    if (cfg.subcommand == "density") results = run_density(cfg, report.warnings);
    else if (cfg.subcommand == "local-test") results = run_local_test(cfg);
    else if (cfg.subcommand == "count") results = run_count(cfg);
    else if (cfg.subcommand == "sigma-stats") results = run_sigma_stats(cfg);
    else if (cfg.subcommand == "tau") results = run_tau(cfg);
    else if (cfg.subcommand == "lattice") results = run_lattice(cfg, report);
    else if (cfg.subcommand == "variance") results = run_variance(cfg);
    else if (cfg.subcommand == "e-prime") results = run_e_prime(cfg);
    else throw std::invalid_argument("unknown subcommand: " + cfg.subcommand);
  } catch (const BudgetExceeded& e) {
    report.warnings.push_back(std::string("budget exhausted: ") + e.what());
    report.exit_code = 2;
    results = json{{"error", e.what()}};
  }

  auto end = std::chrono::steady_clock::now();
  report.wall_ms = std::chrono::duration<double, std::milli>(end - start).count();

  json doc;
  doc["schema_version"] = kSchemaVersion;
  doc["artifact_version"] = kArtifactVersion;
  doc["monomial_order"] = forms::kMonomialOrder;
  doc["subcommand"] = cfg.subcommand;
  doc["config"] = config_json(cfg);
  doc["results"] = results;
  doc["warnings"] = report.warnings;
  report.results_json = doc.dump();  // determinism scope: everything up to here
  doc["timing"] = json{{"wall_ms", report.wall_ms}};

  report.payload = cfg.format == "csv" ? variance_csv(results) : doc.dump(2) + "\n";
  return report;
}

int run_and_write(const ExperimentConfig& cfg) {
  ExperimentReport report = run(cfg);
  if (cfg.out_path.empty()) {
    std::cout << report.payload;
  } else {
    std::ofstream out(cfg.out_path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot open output file: " + cfg.out_path);
    out << report.payload;
  }
  return report.exit_code;
}

}  // namespace primal::runner

#include "aprlab/experiments.hpp"
#include "aprlab/exponents.hpp"
#include "aprlab/norms.hpp"
#include "aprlab/operators.hpp"
#include "aprlab/rubio.hpp"
#include "aprlab/serialize.hpp"
#include "aprlab/weights.hpp"

#include "CLI11.hpp"

#include <fstream>
#include <iostream>
#include <sstream>

namespace {

using namespace aprlab;

std::pair<int, int> parse_grid(const std::string& s) {
  auto comma = s.find(',');
  if (comma == std::string::npos) throw CLI::ValidationError("--grid expects d,L");
  return {std::stoi(s.substr(0, comma)), std::stoi(s.substr(comma + 1))};
}

std::vector<Exponent> parse_exponent_list(const std::string& s) {
  std::vector<Exponent> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ',')) out.push_back(parse_exponent(item));
  return out;
}

std::string read_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::invalid_argument("cannot open '" + path + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_file(const std::string& path, const std::string& text) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write '" + path + "'");
  out << text;
}

int cmd_constants(const std::string& grid, const std::string& p, const std::string& r,
                  const std::string& pvec, const std::string& rvec, const std::string& kind,
                  double param, std::uint64_t seed) {
  auto [d, L] = parse_grid(grid);
  Grid g(d, L);
  CubeFamily fam = CubeFamily::preferred(g);
  BaseMeasure leb = BaseMeasure::lebesgue(g);
  auto gen = [&](std::uint64_t s) {
    if (kind == "constant") return Weight::constant(g, 1.0);
    if (kind == "power") return power_weight(g, param);
    return random_a1_weight(g, param, s, fam);
  };
  if (!pvec.empty()) {
    auto ps = parse_exponent_list(pvec);
    auto rs = parse_exponent_list(rvec);
    std::vector<Weight> ws;
    for (std::size_t i = 0; i < ps.size(); ++i) ws.push_back(gen(seed + i));
    ConstantCert cert = multilinear_constant(ws, p_vector(ps), r_vector(rs), fam);
    std::cout << constant_cert_to_json(cert) << "\n";
    return 0;
  }
  Weight w = gen(seed);
  ConstantCert cert = apr_constant(w, parse_exponent(p), parse_exponent(r), leb, fam);
  std::cout << constant_cert_to_json(cert) << "\n";
  return 0;
}

int cmd_rdf(int case_id, const std::string& grid, int K, const std::string& bmode,
            std::uint64_t seed, std::string p, std::string r, std::string p0, std::string r0,
            std::string q0, const std::string& q, double tau0, long x0,
            const std::string& out_path) {
  // per-case regime defaults when the caller did not pin the exponents
  if (p.empty()) p = (case_id == 1) ? "2" : "4";
  if (r.empty()) r = (case_id == 1) ? "2" : "4";
  if (p0.empty()) p0 = (case_id == 1) ? "4" : "2";
  if (r0.empty()) r0 = (case_id == 1) ? "4" : "2";
  if (q0.empty()) q0 = (case_id == 3) ? "4" : ((case_id == 1) ? "4" : "2");
  auto [d, L] = parse_grid(grid);
  Grid g(d, L);
  CubeFamily fam = CubeFamily::preferred(g);
  BoundMode mode;
  mode.kind = (bmode == "buckley") ? BoundMode::Kind::Buckley : BoundMode::Kind::Empirical;
  mode.seed = seed;
  Rng rng(seed);
  GridFunction wf(g);
  for (double& x : wf.values()) x = std::exp(rng.uniform(-0.8, 0.8));
  Weight w(wf);

  OffdiagConstruction res = [&] {
    if (case_id == 1) {
      GridFunction gg(g);
      for (double& x : gg.values()) x = rng.uniform(0.0, 2.0);
      return construct_case1(w, gg, parse_exponent(p), parse_exponent(r), parse_exponent(p0),
                             parse_exponent(r0), parse_exponent(q0), K, fam, mode);
    }
    if (case_id == 2) {
      GridFunction f(g);
      for (double& x : f.values()) x = rng.uniform(0.0, 2.0);
      GridFunction h = case2_canonical_witness(f, parse_exponent(q), parse_exponent(q0));
      return construct_case2(w, h, parse_exponent(p), parse_exponent(r), parse_exponent(p0),
                             parse_exponent(r0), parse_exponent(q0), parse_exponent(q), K, fam,
                             mode);
    }
    return construct_case3(w, x0, tau0, parse_exponent(p), parse_exponent(r),
                           parse_exponent(p0), parse_exponent(r0), parse_exponent(q0), K, fam,
                           mode);
  }();

  std::ostringstream os;
  os << "{\n  \"case\": " << res.case_id << ",\n  \"B\": " << format_double(res.B)
     << ",\n  \"K\": " << res.K << ",\n  \"w_constant\": " << constant_cert_to_json(res.w_constant)
     << ",\n  \"W_constant\": " << constant_cert_to_json(res.W_constant)
     << ",\n  \"certificates\": " << cert_entries_to_json(res.certs) << ",\n  \"reports\": [";
  for (std::size_t i = 0; i < res.reports.size(); ++i)
    os << (i ? ", " : "") << "{\"name\": \"" << res.reports[i].first
       << "\", \"value\": " << format_double(res.reports[i].second) << "}";
  os << "]\n}\n";
  if (!out_path.empty())
    write_file(out_path, os.str());
  else
    std::cout << os.str();

  for (const auto& c : res.certs)
    if (!c.holds()) return 1;
  return 0;
}

int cmd_extrapolate(const std::string& start, const std::string& target, const std::string& r) {
  auto path = extrapolation_path(p_vector(parse_exponent_list(start)),
                                 p_vector(parse_exponent_list(target)),
                                 r_vector(parse_exponent_list(r)));
  if (path.empty()) {
    std::cout << "empty path (start equals target)\n";
    return 0;
  }
  for (const auto& t : path) {
    for (std::size_t i = 0; i < t.size(); ++i)
      std::cout << (i ? "," : "") << format_exponent(t[i]);
    std::cout << "\n";
  }
  return 0;
}

int cmd_sparse_check(const std::string& file, bool generate, const std::string& grid,
                     double zeta, std::uint64_t seed, const std::string& out_path) {
  if (generate) {
    auto [d, L] = parse_grid(grid);
    Rng rng(seed);
    DyadicGrid dg = DyadicGrid::random_shift(Grid(d, L), rng);
    SparseFamily fam = sparse_generate(dg, zeta, seed);
    std::string text = sparse_family_to_json(fam);
    if (!out_path.empty())
      write_file(out_path, text);
    else
      std::cout << text << "\n";
    return 0;
  }
  SparseFamily fam = sparse_family_from_json(read_file(file));
  std::string why;
  if (sparse_verify(fam, &why)) {
    std::cout << "valid sparse family: " << fam.members.size() << " cubes, zeta = " << fam.zeta
              << "\n";
    return 0;
  }
  std::cout << "INVALID sparse family: " << why << "\n";
  return 1;
}

int cmd_experiments(const std::string& config_path, const std::string& out_override,
                    std::uint64_t seed_override, bool seed_given) {
  ExperimentConfig cfg = config_from_json(read_file(config_path));
  if (!out_override.empty()) cfg.output = out_override;
  if (seed_given) cfg.seed = seed_override;
  Report rep = run_experiment(cfg);
  if (!cfg.output.empty()) {
    write_file(cfg.output + ".csv", rep.csv());
    write_file(cfg.output + ".json", rep.summary_json());
  }
  std::cout << rep.summary_json() << "\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"multilinear Muckenhoupt weight calculus on finite dyadic grids"};
  app.require_subcommand(1);

  std::string grid = "1,3";
  std::uint64_t seed = 1;
  std::string out_path;

  auto* constants = app.add_subcommand("constants", "weight class constants with certificates");
  std::string c_p = "2", c_r = "2", c_pvec, c_rvec, c_kind = "random_a1";
  double c_param = 0.5;
  constants->add_option("--grid", grid, "grid as d,L");
  constants->add_option("--p", c_p, "one-weight exponent p");
  constants->add_option("--r", c_r, "one-weight exponent r");
  constants->add_option("--pvec", c_pvec, "multilinear p vector, comma separated");
  constants->add_option("--rvec", c_rvec, "multilinear r vector, comma separated");
  constants->add_option("--kind", c_kind, "weight generator: constant|power|random_a1");
  constants->add_option("--param", c_param, "generator parameter (power a or delta)");
  constants->add_option("--seed", seed, "generator seed");

  auto* rdf = app.add_subcommand("rdf", "Rubio de Francia construction certificates");
  int r_case = 1, r_K = 16;
  std::string r_bmode = "empirical";
  std::string r_p, r_r, r_p0, r_r0, r_q0, r_q = "4";
  double r_tau0 = 0.2;
  long r_x0 = 0;
  rdf->add_option("--case", r_case, "construction case 1|2|3")->check(CLI::Range(1, 3));
  rdf->add_option("--grid", grid, "grid as d,L");
  rdf->add_option("--K", r_K, "truncation depth");
  rdf->add_option("--B-mode", r_bmode, "buckley|empirical");
  rdf->add_option("--seed", seed, "instance seed");
  rdf->add_option("--p", r_p, "target p");
  rdf->add_option("--r", r_r, "target r");
  rdf->add_option("--p0", r_p0, "hypothesis p0");
  rdf->add_option("--r0", r_r0, "hypothesis r0");
  rdf->add_option("--q0", r_q0, "hypothesis q0");
  rdf->add_option("--q", r_q, "target q (case 2)");
  rdf->add_option("--tau0", r_tau0, "ball scale (case 3)");
  rdf->add_option("--x0", r_x0, "ball center cell (case 3)");
  rdf->add_option("--out", out_path, "write the certificate bundle to a file");

  auto* extrap = app.add_subcommand("extrapolate-exponents", "one-coordinate extrapolation path");
  std::string e_start = "2,2", e_target = "4,4", e_r = "1,1,1";
  extrap->add_option("--start", e_start, "start p vector");
  extrap->add_option("--target", e_target, "target q vector");
  extrap->add_option("--r", e_r, "r vector (length m+1)");

  auto* sparse = app.add_subcommand("sparse-check", "verify (or generate) sparse family files");
  std::string s_file;
  bool s_generate = false;
  double s_zeta = 0.5;
  sparse->add_option("file", s_file, "sparse family JSON to verify");
  sparse->add_flag("--generate", s_generate, "generate a family instead of verifying");
  sparse->add_option("--grid", grid, "grid as d,L (generate mode)");
  sparse->add_option("--zeta", s_zeta, "sparsity constant (generate mode)");
  sparse->add_option("--seed", seed, "generator seed");
  sparse->add_option("--out", out_path, "output path (generate mode)");

  auto* experiments = app.add_subcommand("experiments", "randomized inequality-ratio studies");
  auto* exp_run = experiments->add_subcommand("run", "run a config");
  std::string x_config;
  bool x_seed_given = false;
  exp_run->add_option("config", x_config, "experiment config JSON")->required();
  exp_run->add_option("--out", out_path, "override the report output prefix");
  exp_run->add_option("--seed", seed, "override the config seed")
      ->each([&](const std::string&) { x_seed_given = true; });

  auto* verify = app.add_subcommand("verify", "invariant batteries");
  std::string v_suite = "all";
  verify->add_option("suite", v_suite, "identities|rdf|lemma_main|sparse|all");
  verify->add_option("--grid", grid, "grid as d,L");
  verify->add_option("--seed", seed, "battery seed");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    if (constants->parsed())
      return cmd_constants(grid, c_p, c_r, c_pvec, c_rvec, c_kind, c_param, seed);
    if (rdf->parsed())
      return cmd_rdf(r_case, grid, r_K, r_bmode, seed, r_p, r_r, r_p0, r_r0, r_q0, r_q, r_tau0,
                     r_x0, out_path);
    if (extrap->parsed()) return cmd_extrapolate(e_start, e_target, e_r);
    if (sparse->parsed())
      return cmd_sparse_check(s_file, s_generate, grid, s_zeta, seed, out_path);
    if (experiments->parsed()) return cmd_experiments(x_config, out_path, seed, x_seed_given);
    if (verify->parsed()) {
      auto [d, L] = parse_grid(grid);
      int failures = verify_suite(v_suite, std::cout, d, L, seed);
      std::cout << (failures == 0 ? "verify: all checks passed\n"
                                  : "verify: " + std::to_string(failures) + " failures\n");
      return failures == 0 ? 0 : 1;
    }
  } catch (const std::invalid_argument& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 2;
}

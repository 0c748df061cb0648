#include "aprlab/experiments.hpp"

#include "aprlab/dyadic.hpp"
#include "aprlab/norms.hpp"
#include "aprlab/operators.hpp"
#include "aprlab/random.hpp"
#include "aprlab/rubio.hpp"
#include "aprlab/serialize.hpp"
#include "aprlab/weights.hpp"

#include "json.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <mutex>
#include <optional>
#include <ostream>
#include <sstream>
#include <thread>

namespace aprlab {

using nlohmann::json;

ExperimentConfig config_from_json(const std::string& text) {
  json j = json::parse(text);
  ExperimentConfig cfg;
  cfg.experiment = j.at("experiment").get<std::string>();
  if (j.contains("grid")) {
    const auto& g = j.at("grid");
    if (g.contains("d")) cfg.d = g.at("d").get<int>();
    if (g.contains("L")) cfg.L = g.at("L").get<int>();
    if (g.contains("n")) cfg.n = g.at("n").get<int>();
    if (g.contains("m")) cfg.m = g.at("m").get<int>();
    cfg.L2 = g.contains("L2") ? g.at("L2").get<int>() : cfg.L;
  }
  if (j.contains("exponents"))
    for (const auto& [k, v] : j.at("exponents").items())
      cfg.exponents[k] = v.get<std::string>();
  if (j.contains("weight_gen")) {
    const auto& w = j.at("weight_gen");
    if (w.contains("kind")) cfg.weight_kind = w.at("kind").get<std::string>();
    if (w.contains("param")) cfg.weight_param = w.at("param").get<double>();
  }
  if (j.contains("variant")) cfg.variant = j.at("variant").get<std::string>();
  if (j.contains("trials")) cfg.trials = j.at("trials").get<int>();
  if (j.contains("seed")) cfg.seed = j.at("seed").get<std::uint64_t>();
  if (j.contains("K")) cfg.K = j.at("K").get<int>();
  if (j.contains("kmax")) cfg.kmax = j.at("kmax").get<int>();
  if (j.contains("mc_samples")) cfg.mc_samples = j.at("mc_samples").get<int>();
  if (j.contains("output")) cfg.output = j.at("output").get<std::string>();
  return cfg;
}

std::string Report::csv() const {
  std::ostringstream os;
  os << "trial,seed,constant,lhs,rhs,ratio\n";
  for (const TrialRow& r : rows)
    os << r.trial << ',' << r.seed << ',' << format_double(r.constant) << ','
       << format_double(r.lhs) << ',' << format_double(r.rhs) << ',' << format_double(r.ratio)
       << '\n';
  return os.str();
}

double Report::max_ratio() const {
  double m = 0.0;
  for (const TrialRow& r : rows) m = std::max(m, r.ratio);
  return m;
}

double Report::median_ratio() const {
  if (rows.empty()) return 0.0;
  std::vector<double> rs;
  for (const TrialRow& r : rows) rs.push_back(r.ratio);
  std::sort(rs.begin(), rs.end());
  std::size_t n = rs.size();
  return n % 2 ? rs[n / 2] : 0.5 * (rs[n / 2 - 1] + rs[n / 2]);
}

std::string Report::summary_json() const {
  json j;
  j["experiment"] = config.experiment;
  j["grid"] = {{"d", config.d}, {"L", config.L}, {"n", config.n}, {"m", config.m},
               {"L2", config.L2}};
  j["seed"] = config.seed;
  j["weight_gen"] = {{"kind", config.weight_kind}, {"param", config.weight_param}};
  if (!config.variant.empty()) j["variant"] = config.variant;
  j["trials"] = static_cast<int>(rows.size());
  j["max_ratio"] = format_double(max_ratio());
  j["median_ratio"] = format_double(median_ratio());
  if (!rows.empty()) {
    const TrialRow* worst = &rows.front();
    for (const TrialRow& r : rows)
      if (r.ratio > worst->ratio) worst = &r;
    j["argmax_instance"] = {{"trial", worst->trial},
                            {"seed", worst->seed},
                            {"constant", format_double(worst->constant)},
                            {"ratio", format_double(worst->ratio)}};
  }
  // envelope: rows sorted by weight constant, max ratio per decile
  std::vector<TrialRow> sorted = rows;
  std::sort(sorted.begin(), sorted.end(),
            [](const TrialRow& a, const TrialRow& b) { return a.constant < b.constant; });
  json env = json::array();
  if (!sorted.empty()) {
    std::size_t n = sorted.size();
    for (int dec = 0; dec < 10; ++dec) {
      std::size_t lo = n * static_cast<std::size_t>(dec) / 10;
      std::size_t hi = n * static_cast<std::size_t>(dec + 1) / 10;
      if (lo >= hi) continue;
      double cmax = 0.0, rmax = 0.0;
      for (std::size_t i = lo; i < hi; ++i) {
        cmax = std::max(cmax, sorted[i].constant);
        rmax = std::max(rmax, sorted[i].ratio);
      }
      env.push_back({{"constant_upto", format_double(cmax)}, {"max_ratio", format_double(rmax)}});
    }
  }
  j["envelope_by_constant_decile"] = env;
  return j.dump(2);
}

namespace {

Exponent exp_of(const ExperimentConfig& cfg, const std::string& name,
                const std::string& fallback) {
  auto it = cfg.exponents.find(name);
  return parse_exponent(it != cfg.exponents.end() ? it->second : fallback);
}

Weight make_weight(const ExperimentConfig& cfg, const Grid& g, const CubeFamily& fam,
                   std::uint64_t seed) {
  if (cfg.weight_kind == "constant") return Weight::constant(g, 1.0);
  if (cfg.weight_kind == "power") return power_weight(g, cfg.weight_param);
  if (cfg.weight_kind == "random_a1") return random_a1_weight(g, cfg.weight_param, seed, fam);
  throw std::invalid_argument("unknown weight generator kind '" + cfg.weight_kind + "'");
}

GridFunction random_nonneg(const Grid& g, Rng& rng) {
  GridFunction f(g);
  for (double& x : f.values()) x = rng.uniform(0.0, 2.0);
  return f;
}

GridFunction random_signed(const Grid& g, Rng& rng) {
  GridFunction f(g);
  for (double& x : f.values()) x = rng.uniform(-1.0, 1.0);
  return f;
}

std::uint64_t omega_hash(const ShiftPattern& omega) {
  std::uint64_t h = 0x243f6a8885a308d3ULL;
  for (const auto& w : omega) h = mix_seed(h, (static_cast<std::uint64_t>(w[0]) << 1) | w[1]);
  return h;
}

GridFunction expect_shifts(const ExperimentConfig& cfg, const Grid& g,
                           const std::function<GridFunction(const DyadicGrid&)>& fn,
                           std::uint64_t seed) {
  if (g.dim * g.depth <= 10) return expect_shifts_exact(g, fn);
  return expect_shifts_mc(g, fn, cfg.mc_samples, seed);
}

// Trials are independent (all state is derived from the per-trial seed), so
// they run on a worker pool; rows are collected by trial index, which keeps
// reports byte-identical regardless of scheduling.
template <typename Body>
std::vector<TrialRow> run_trials(int n, Body&& body) {
  std::vector<std::optional<TrialRow>> slots(static_cast<std::size_t>(std::max(n, 0)));
  std::exception_ptr error;
  std::mutex error_mu;
  std::atomic<int> next{0};
  unsigned workers = std::max(1u, std::min<unsigned>(std::thread::hardware_concurrency(),
                                                     static_cast<unsigned>(std::max(n, 1))));
  std::vector<std::thread> pool;
  pool.reserve(workers);
  for (unsigned w = 0; w < workers; ++w)
    pool.emplace_back([&] {
      for (int t = next.fetch_add(1); t < n; t = next.fetch_add(1)) {
        try {
          slots[static_cast<std::size_t>(t)] = body(t);
        } catch (...) {
          std::lock_guard<std::mutex> lock(error_mu);
          if (!error) error = std::current_exception();
          return;
        }
      }
    });
  for (auto& th : pool) th.join();
  if (error) std::rethrow_exception(error);
  std::vector<TrialRow> rows;
  for (auto& slot : slots)
    if (slot) rows.push_back(*slot);
  return rows;
}

Report run_offdiag_ratio(const ExperimentConfig& cfg) {
  Grid g(cfg.d, cfg.L);
  CubeFamily fam = CubeFamily::preferred(g);
  BaseMeasure leb = BaseMeasure::lebesgue(g);
  Exponent p0 = exp_of(cfg, "p0", "2"), r0 = exp_of(cfg, "r0", "2"),
           q0 = exp_of(cfg, "q0", "2"), p = exp_of(cfg, "p", "4");
  OffdiagTargets tgt = offdiag_targets(p0, r0, q0, p);

  Report rep{cfg, {}};
  rep.rows = run_trials(cfg.trials, [&](int t) -> std::optional<TrialRow> {
    std::uint64_t s = mix_seed(cfg.seed, static_cast<std::uint64_t>(t));
    Rng rng(s);
    Weight w = make_weight(cfg, g, fam, mix_seed(s, 1));
    GridFunction gg = random_nonneg(g, rng);
    GridFunction f = (cfg.variant == "identity") ? gg : hl_maximal(gg, leb, fam);
    NormSpec lhs_spec{tgt.q, &w.fn(), nullptr};
    NormSpec rhs_spec{p, &w.fn(), nullptr};
    double lhs = lp_norm(f, lhs_spec);
    double rhs = lp_norm(gg, rhs_spec);
    double constant = apr_constant(w, p, tgt.r, leb, fam).value;
    return TrialRow{t, s, constant, lhs, rhs, rhs > 0 ? lhs / rhs : 0.0};
  });
  return rep;
}

Report run_multilinear_extrapolate(const ExperimentConfig& cfg) {
  Grid g(cfg.d, cfg.L);
  CubeFamily fam = CubeFamily::preferred(g);
  Exponent q1 = exp_of(cfg, "q1", "3"), q2 = exp_of(cfg, "q2", "3");
  ExponentVector qv = p_vector({q1, q2});
  ExponentVector rv = r_vector({exp_of(cfg, "r1", "1"), exp_of(cfg, "r2", "1"),
                                exp_of(cfg, "r3", "1")});
  Exponent q = qv.reciprocal_sum();

  Report rep{cfg, {}};
  rep.rows = run_trials(cfg.trials, [&](int t) -> std::optional<TrialRow> {
    std::uint64_t s = mix_seed(cfg.seed, static_cast<std::uint64_t>(t));
    Rng rng(s);
    Weight v1 = make_weight(cfg, g, fam, mix_seed(s, 1));
    Weight v2 = make_weight(cfg, g, fam, mix_seed(s, 2));
    GridFunction f1 = random_nonneg(g, rng), f2 = random_nonneg(g, rng);

    // sparse-form-dominated bilinear operator sum_Q <f1>_Q <f2>_Q 1_Q
    DyadicGrid d(g);
    SparseFamily sf = sparse_generate(d, 0.5, mix_seed(s, 3));
    GridFunction tf(g);
    for (const auto& mset : sf.members) {
      DiscreteCube q_cube = d.footprint(mset.cube);
      double a = cell_average(f1, q_cube) * cell_average(f2, q_cube);
      for_each_cell(g, q_cube, [&](long idx) { tf[static_cast<std::size_t>(idx)] += a; });
    }

    GridFunction vprod = v1.fn() * v2.fn();
    NormSpec lhs_spec{q, &vprod, nullptr};
    double lhs = lp_norm(tf, lhs_spec);
    NormSpec s1{q1, &v1.fn(), nullptr}, s2{q2, &v2.fn(), nullptr};
    double rhs = lp_norm(f1, s1) * lp_norm(f2, s2);
    double constant = multilinear_constant({v1, v2}, qv, rv, fam).value;
    return TrialRow{t, s, constant, lhs, rhs, rhs > 0 ? lhs / rhs : 0.0};
  });
  return rep;
}

Report run_sparse_domination(const ExperimentConfig& cfg) {
  Grid g(cfg.d, cfg.L);
  CubeFamily fam = CubeFamily::preferred(g);
  Exponent p1 = exp_of(cfg, "p1", "3"), p2 = exp_of(cfg, "p2", "3");
  Exponent p = p_vector({p1, p2}).reciprocal_sum();
  ExponentVector pv = p_vector({p1, p2});
  ExponentVector rv = r_vector({Exponent::from_value(1), Exponent::from_value(1),
                                Exponent::from_value(1)});

  Report rep{cfg, {}};
  rep.rows = run_trials(cfg.trials, [&](int t) -> std::optional<TrialRow> {
    std::uint64_t s = mix_seed(cfg.seed, static_cast<std::uint64_t>(t));
    Rng rng(s);
    int kk = t % (cfg.kmax + 1);
    std::array<int, 3> complexity{kk, (t / 2) % (cfg.kmax + 1), 0};
    auto form = static_cast<ShiftForm>(1 + t % 3);
    DyadicGrid d = DyadicGrid::random_shift(g, rng);
    int deepest = std::max({complexity[0], complexity[1], complexity[2]});
    if (deepest + 1 > g.depth) return std::nullopt;
    ShiftSpec spec = ShiftSpec::random(d, complexity, form, 0.5, 1.0, mix_seed(s, 4));

    Weight w1 = make_weight(cfg, g, fam, mix_seed(s, 1));
    Weight w2 = make_weight(cfg, g, fam, mix_seed(s, 2));
    GridFunction f1 = random_signed(g, rng), f2 = random_signed(g, rng);
    GridFunction u = shift_apply(spec, f1, f2);
    GridFunction wprod = w1.fn() * w2.fn();
    NormSpec lhs_spec{p, &wprod, nullptr};
    NormSpec s1{p1, &w1.fn(), nullptr}, s2{p2, &w2.fn(), nullptr};
    double lhs = lp_norm(u, lhs_spec);
    double rhs = (1.0 + deepest) * lp_norm(f1, s1) * lp_norm(f2, s2);
    double constant = multilinear_constant({w1, w2}, pv, rv, fam).value;
    return TrialRow{t, s, constant, lhs, rhs, rhs > 0 ? lhs / rhs : 0.0};
  });
  return rep;
}

Report run_lemma_ratio(const ExperimentConfig& cfg) {
  Grid g(cfg.d, cfg.L);
  CubeFamily fam = CubeFamily::preferred(g);
  Exponent p = exp_of(cfg, "p", "2");
  std::string variant = cfg.variant.empty() ? "lower_sf" : cfg.variant;

  Report rep{cfg, {}};
  rep.rows = run_trials(cfg.trials, [&](int t) -> std::optional<TrialRow> {
    std::uint64_t s = mix_seed(cfg.seed, static_cast<std::uint64_t>(t));
    Rng rng(s);
    Weight nu = make_weight(cfg, g, fam, mix_seed(s, 1));
    BaseMeasure mu = BaseMeasure::from_density(nu.fn());
    double lhs = 0.0, rhs = 0.0;

    if (variant == "lower_sf") {
      // Haar sums with lattice-independent coefficients; the function itself
      // depends on the shift through the Haar system
      std::vector<std::vector<double>> coef(static_cast<std::size_t>(g.depth));
      for (int level = 0; level < g.depth; ++level) {
        coef[static_cast<std::size_t>(level)].resize(
            static_cast<std::size_t>(1L << (g.dim * level)));
        for (double& c : coef[static_cast<std::size_t>(level)]) c = rng.uniform(-1.0, 1.0);
      }
      auto g_of = [&](const DyadicGrid& d) {
        GridFunction out(g);
        for (int level = 0; level < g.depth; ++level)
          for (long i = 0; i < d.cubes_at_level(level); ++i)
            out += coef[static_cast<std::size_t>(level)][static_cast<std::size_t>(i)] *
                   haar(d, d.cube_at(level, i), {1, g.dim == 2 ? 1 : 0});
        return out;
      };
      GridFunction eg = expect_shifts(cfg, g, g_of, mix_seed(s, 5));
      GridFunction esf = expect_shifts(
          cfg, g, [&](const DyadicGrid& d) { return square_function(g_of(d), d); },
          mix_seed(s, 5));
      lhs = lp_norm(eg, p, mu);
      rhs = lp_norm(esf, p, mu);
    } else if (variant == "block_sf") {
      GridFunction gg = random_signed(g, rng);
      rhs = lp_norm(gg, p, mu);
      for (int k = 0; k <= std::min(cfg.kmax, g.depth - 1); ++k) {
        GridFunction esq = expect_shifts(
            cfg, g,
            [&](const DyadicGrid& d) {
              GridFunction b = block_square_function(gg, d, k, fam);
              return b * b;
            },
            mix_seed(s, 6));
        GridFunction root = cw_pow(esq, 0.5);
        lhs = std::max(lhs, lp_norm(root, p, mu));
      }
    } else if (variant == "paraprod") {
      GridFunction gg = random_signed(g, rng);
      rhs = lp_norm(gg, p, mu);
      auto fn = [&](const DyadicGrid& d) {
        ParaproductSpec gamma =
            ParaproductSpec::random(d, 1, 1.0, 1.0, mix_seed(s, omega_hash(d.omega())));
        GridFunction acc(g);
        for (const auto& e : gamma.coeffs()) {
          double avg = cube_average(gg, d, e.K);
          double scale = e.a * e.a * avg * avg / d.volume(e.K);
          d.for_each_cell(e.K, [&](long idx) { acc[static_cast<std::size_t>(idx)] += scale; });
        }
        return acc;
      };
      GridFunction esq = expect_shifts(cfg, g, fn, mix_seed(s, 7));
      lhs = lp_norm(cw_pow(esq, 0.5), p, mu);
    } else if (variant == "mz") {
      Exponent p1 = exp_of(cfg, "p1", "2"), p2 = exp_of(cfg, "p2", "2");
      Exponent q1 = exp_of(cfg, "q1", "2"), q2 = exp_of(cfg, "q2", "inf");
      Exponent sexp = exp_of(cfg, "s", "3/2");
      Exponent q = p_vector({q1, q2}).reciprocal_sum();
      if (q.is_infinity())
        throw std::invalid_argument("mz variant needs 1/q = 1/q1 + 1/q2 > 0");
      Weight w1 = make_weight(cfg, g, fam, mix_seed(s, 11));
      Weight w2 = make_weight(cfg, g, fam, mix_seed(s, 12));
      const int NI = 2, NK = 2;
      double sv = sexp.value();

      auto functions = [&](std::uint64_t stream, const DyadicGrid& d) {
        std::vector<std::vector<GridFunction>> f(NK);
        for (int k = 0; k < NK; ++k)
          for (int i = 0; i < NI; ++i) {
            Rng r2(mix_seed(mix_seed(s, stream), omega_hash(d.omega()) +
                                                      static_cast<std::uint64_t>(k * NI + i)));
            f[static_cast<std::size_t>(k)].push_back(random_signed(g, r2));
          }
        return f;
      };
      auto lhs_fn = [&](const DyadicGrid& d) {
        ShiftSpec spec = ShiftSpec::random(d, {1, 0, 0}, ShiftForm::NoncancelSlot3, 0.6, 1.0,
                                           mix_seed(s, 13));
        auto f1 = functions(21, d), f2 = functions(22, d);
        GridFunction out(g);
        double qv = q.is_infinity() ? 0.0 : q.value();
        std::vector<GridFunction> tij;
        for (int k = 0; k < NK; ++k) {
          GridFunction inner_sum(g);
          for (int i = 0; i < NI; ++i)
            for (int j = 0; j < NI; ++j) {
              GridFunction tf = shift_apply(spec, f1[static_cast<std::size_t>(k)]
                                                      [static_cast<std::size_t>(i)],
                                            f2[static_cast<std::size_t>(k)]
                                              [static_cast<std::size_t>(j)]);
              for (std::size_t c = 0; c < inner_sum.size(); ++c)
                inner_sum[c] += std::pow(std::fabs(tf[c]), sv);
            }
          for (std::size_t c = 0; c < out.size(); ++c)
            out[c] += std::pow(inner_sum[c], qv / sv);
        }
        for (std::size_t c = 0; c < out.size(); ++c) out[c] = std::pow(out[c], 1.0 / qv);
        return out;
      };
      GridFunction e_lhs = expect_shifts(cfg, g, lhs_fn, mix_seed(s, 14));
      GridFunction wprod = w1.fn() * w2.fn();
      Exponent pfull = p_vector({p1, p2}).reciprocal_sum();
      NormSpec lhs_spec{pfull, &wprod, nullptr};
      lhs = lp_norm(e_lhs, lhs_spec);

      auto rhs_factor = [&](std::uint64_t stream, const Exponent& qi, const Exponent& pi,
                            const Weight& wi) {
        auto fn = [&](const DyadicGrid& d) {
          auto f = functions(stream, d);
          GridFunction nrm(g);
          for (std::size_t c = 0; c < nrm.size(); ++c) {
            std::vector<std::vector<double>> rows(NK, std::vector<double>(NI));
            for (int k = 0; k < NK; ++k)
              for (int i = 0; i < NI; ++i)
                rows[static_cast<std::size_t>(k)][static_cast<std::size_t>(i)] =
                    f[static_cast<std::size_t>(k)][static_cast<std::size_t>(i)][c];
            double v = nested_seq_norm(rows, qi, sexp);
            nrm[c] = v * v;
          }
          return nrm;
        };
        GridFunction esq = expect_shifts(cfg, g, fn, mix_seed(s, stream));
        GridFunction root = cw_pow(esq, 0.5);
        NormSpec spec{pi, &wi.fn(), nullptr};
        return lp_norm(root, spec);
      };
      rhs = rhs_factor(21, q1, p1, w1) * rhs_factor(22, q2, p2, w2);
    } else {
      throw std::invalid_argument("unknown lemma-ratio variant '" + variant + "'");
    }

    double constant = ap_constant(nu, Exponent::from_value(2), BaseMeasure::lebesgue(g), fam)
                          .value;
    return TrialRow{t, s, constant, lhs, rhs, rhs > 0 ? lhs / rhs : 0.0};
  });
  return rep;
}

Report run_tensor_mixed_norm(const ExperimentConfig& cfg) {
  Grid g1(cfg.n, cfg.L), g2(cfg.m, cfg.L2);
  Exponent p1 = exp_of(cfg, "p1", "2"), p2 = exp_of(cfg, "p2", "inf");
  Exponent q1 = exp_of(cfg, "q1", "3"), q2 = exp_of(cfg, "q2", "3");
  Exponent p = p_vector({p1, p2}).reciprocal_sum();
  Exponent q = p_vector({q1, q2}).reciprocal_sum();

  Report rep{cfg, {}};
  rep.rows = run_trials(cfg.trials, [&](int t) -> std::optional<TrialRow> {
    std::uint64_t s = mix_seed(cfg.seed, static_cast<std::uint64_t>(t));
    Rng rng(s);
    DyadicGrid d1 = DyadicGrid::random_shift(g1, rng);
    DyadicGrid d2 = DyadicGrid::random_shift(g2, rng);
    auto op_of = [&](const DyadicGrid& d, std::uint64_t stream) -> ModelOperator {
      if ((t + static_cast<int>(stream)) % 2 == 0)
        return ModelOperator(ShiftSpec::random(
            d, {t % 2, 0, (t / 2) % 2}, static_cast<ShiftForm>(1 + t % 3), 0.6, 1.0,
            mix_seed(s, stream)));
      return ModelOperator(
          ParaproductSpec::random(d, 1 + t % 3, 0.7, 1.0, mix_seed(s, stream)));
    };
    ModelOperator A = op_of(d1, 31), B = op_of(d2, 32);

    ProductGridFunction f1(g1, g2), f2(g1, g2);
    for (double& x : f1.values()) x = rng.uniform(-1.0, 1.0);
    for (double& x : f2.values()) x = rng.uniform(-1.0, 1.0);

    ProductGridFunction out = tensor_apply(A, B, f1, f2);
    double lhs = mixed_norm(out, p, q);
    double rhs = mixed_norm(f1, p1, q1) * mixed_norm(f2, p2, q2);
    return TrialRow{t, s, 1.0, lhs, rhs, rhs > 0 ? lhs / rhs : 0.0};
  });
  return rep;
}

}  // namespace

Report run_experiment(const ExperimentConfig& cfg) {
  if (cfg.trials < 0) throw std::invalid_argument("trials must be nonnegative");
  if (cfg.experiment == "offdiag-ratio") return run_offdiag_ratio(cfg);
  if (cfg.experiment == "multilinear-extrapolate") return run_multilinear_extrapolate(cfg);
  if (cfg.experiment == "sparse-domination") return run_sparse_domination(cfg);
  if (cfg.experiment == "lemma-ratio") return run_lemma_ratio(cfg);
  if (cfg.experiment == "tensor-mixed-norm") return run_tensor_mixed_norm(cfg);
  throw std::invalid_argument("unknown experiment '" + cfg.experiment + "'");
}

namespace {

class Battery {
 public:
  Battery(std::ostream& out, std::string suite) : out_(out), suite_(std::move(suite)) {}

  // a named check over `count` seeded instances; fn returns true on pass and
  // may fill `detail` with a replayable description
  template <typename Fn>
  void run(const std::string& name, int count, std::uint64_t seed, Fn&& fn) {
    int bad = 0;
    for (int i = 0; i < count; ++i) {
      std::uint64_t s = mix_seed(seed, static_cast<std::uint64_t>(i));
      json detail;
      bool ok = false;
      std::string error;
      try {
        ok = fn(s, detail);
      } catch (const std::exception& e) {
        error = e.what();
      }
      if (!ok) {
        ++bad;
        json rec;
        rec["suite"] = suite_;
        rec["check"] = name;
        rec["instance_seed"] = s;
        if (!detail.is_null()) rec["detail"] = detail;
        if (!error.empty()) rec["exception"] = error;
        out_ << "FAIL " << rec.dump() << '\n';
      }
    }
    out_ << (bad == 0 ? "PASS " : "FAIL ") << suite_ << "/" << name << " (" << (count - bad)
         << "/" << count << ")\n";
    failures_ += bad;
  }

  int failures() const { return failures_; }

 private:
  std::ostream& out_;
  std::string suite_;
  int failures_ = 0;
};

void suite_identities(Battery& b, int d, int L) {
  Grid g(d, L);
  b.run("exponent-scale-identities", 1000, 101, [&](std::uint64_t s, json&) {
    Rng rng(s);
    // random admissible pair, rejection sampled
    for (;;) {
      std::vector<Exponent> rs, ps;
      std::size_t m = static_cast<std::size_t>(rng.uniform_int(2, 3));
      for (std::size_t i = 0; i <= m; ++i) {
        int den = rng.uniform_int(1, 8);
        rs.push_back(Exponent::from_reciprocal(Rational(rng.uniform_int(1, den), den)));
      }
      for (std::size_t i = 0; i < m; ++i) {
        int den = rng.uniform_int(1, 8);
        Rational hi = rs[i].reciprocal();
        ps.push_back(Exponent::from_reciprocal(hi * Rational(rng.uniform_int(0, den), den)));
      }
      auto p = p_vector(ps);
      auto r = r_vector(rs);
      if (!preceq_star(r, p)) continue;
      auto ds = derived_scales(p, r);
      Rational sum(0);
      for (const auto& dd : ds.deltas) sum += dd.inv;
      return sum == ds.r.reciprocal() - 1 && (preceq_star(r, p) == (ds.min_delta_inv() >= 0));
    }
  });
  b.run("telescoping-and-haar", 60, 102, [&](std::uint64_t s, json& detail) {
    Rng rng(s);
    DyadicGrid dg = DyadicGrid::random_shift(g, rng);
    GridFunction f = random_signed(g, rng);
    GridFunction recon(g, f.integral());
    for (int level = 0; level < g.depth; ++level)
      for (long i = 0; i < dg.cubes_at_level(level); ++i) {
        Cube c = dg.cube_at(level, i);
        recon += martingale_diff(f, dg, c);
        GridFunction viaHaar(g);
        for (int eta = 1; eta < (1 << g.dim); ++eta) {
          GridFunction h = haar(dg, c, {eta & 1, (eta >> 1) & 1});
          viaHaar += inner(f, h) * h;
        }
        GridFunction md = martingale_diff(f, dg, c);
        for (std::size_t k = 0; k < md.size(); ++k)
          if (std::fabs(viaHaar[k] - md[k]) > 1e-12) {
            detail["cube_level"] = c.level;
            return false;
          }
      }
    for (std::size_t k = 0; k < f.size(); ++k)
      if (std::fabs(recon[k] - f[k]) > 1e-12) {
        detail["cell"] = k;
        return false;
      }
    return true;
  });
  b.run("mixed-norm-composition", 60, 103, [&](std::uint64_t s, json&) {
    Rng rng(s);
    Grid g1(1, std::min(L, 3)), g2(1, std::min(L, 3));
    ProductGridFunction f(g1, g2);
    for (double& x : f.values()) x = rng.uniform(-1.0, 1.0);
    Exponent p = Exponent::from_value(Rational(rng.uniform_int(1, 6), 2));
    Exponent q = Exponent::from_value(Rational(rng.uniform_int(1, 6), 2));
    double a = mixed_norm(f, p, q);
    double bb = lp_norm(slice_norms(f, q), p);
    return std::fabs(a - bb) <= 1e-12 * std::max(1.0, a);
  });
  b.run("multilinear-two-forms", 30, 104, [&](std::uint64_t s, json&) {
    Rng rng(s);
    GridFunction w1(g), w2(g);
    for (double& x : w1.values()) x = std::exp(rng.uniform(-1.0, 1.0));
    for (double& x : w2.values()) x = std::exp(rng.uniform(-1.0, 1.0));
    CubeFamily fam = CubeFamily::preferred(g);
    auto rv = r_vector({Exponent::from_value(1), Exponent::from_value(1),
                        Exponent::from_value(1)});
    // the call itself asserts delta-form vs case-form agreement
    multilinear_constant({Weight(w1), Weight(w2)},
                         p_vector({Exponent::from_value(4), Exponent::from_value(4)}), rv,
                         CubeFamily::preferred(g));
    multilinear_constant({Weight(w1), Weight(w2)},
                         p_vector({Exponent::infinity(), Exponent::infinity()}), rv, fam);
    return true;
  });
}

void suite_rdf(Battery& b, int d, int L) {
  Grid g(d, L);
  CubeFamily fam = CubeFamily::preferred(g);
  BaseMeasure leb = BaseMeasure::lebesgue(g);
  b.run("pointwise-certs-any-B", 120, 201, [&](std::uint64_t s, json&) {
    Rng rng(s);
    GridFunction h = random_nonneg(g, rng);
    double B = rng.uniform(0.1, 4.0);
    int K = rng.uniform_int(0, 6);
    PositiveOperator m = [&](const GridFunction& f) { return hl_maximal(f, leb, fam); };
    RdFResult r = rdf_iterate(h, m, B, K);
    return r.certs.domination && r.certs.truncated_a1;
  });
  b.run("certified-B-norm-cert", 40, 202, [&](std::uint64_t s, json& detail) {
    Rng rng(s);
    GridFunction wf(g);
    for (double& x : wf.values()) x = std::exp(rng.uniform(-0.8, 0.8));
    Weight u(cw_pow(wf, -2.0));
    BaseMeasure mu = BaseMeasure::from_density(u.fn());
    Exponent t = Exponent::from_value(2);
    BoundMode mode;
    mode.seed = s;
    double B = maximal_norm_bound_M(t, u, fam, mode);
    PositiveOperator m = [&](const GridFunction& f) { return hl_maximal(f, leb, fam); };
    NormFunctional norm = [&](const GridFunction& f) { return lp_norm(f, t, mu); };
    RdFResult r = rdf_iterate(random_nonneg(g, rng), m, B, 16, norm);
    detail["norm_ratio"] = r.certs.norm_ratio;
    return r.certs.norm_ratio <= 2.0 + 1e-9;
  });
}

void suite_lemma_main(Battery& b, int d, int L) {
  Grid g(d, std::min(L, 3));
  CubeFamily fam = CubeFamily::preferred(g);
  auto p44 = p_vector({Exponent::from_value(4), Exponent::from_value(4)});
  auto r111 = r_vector({Exponent::from_value(1), Exponent::from_value(1),
                        Exponent::from_value(1)});
  b.run("forward-certs", 100, 301, [&](std::uint64_t s, json& detail) {
    Rng rng(s);
    GridFunction w1(g), w2(g);
    for (double& x : w1.values()) x = std::exp(rng.uniform(-0.8, 0.8));
    for (double& x : w2.values()) x = std::exp(rng.uniform(-0.8, 0.8));
    auto fw = lemma_main_forward({Weight(w1), Weight(w2)}, p44, r111, fam);
    for (const auto& c : fw.certs)
      if (!c.holds()) {
        detail["cert"] = c.name;
        detail["value"] = c.value;
        detail["bound"] = c.bound;
        return false;
      }
    return true;
  });
  b.run("inverse-roundtrip-and-rewrites", 100, 302, [&](std::uint64_t s, json& detail) {
    Rng rng(s);
    GridFunction w1(g), w2(g), f(g);
    for (double& x : w1.values()) x = std::exp(rng.uniform(-0.8, 0.8));
    for (double& x : w2.values()) x = std::exp(rng.uniform(-0.8, 0.8));
    for (double& x : f.values()) x = rng.uniform(0.0, 2.0);
    std::vector<Weight> ws{Weight(w1), Weight(w2)};
    auto fw = lemma_main_forward(ws, p44, r111, fam);
    auto inv = lemma_main_inverse({ws[0]}, fw.big, p44, r111, fam);
    for (std::size_t i = 0; i < inv.w_m.size(); ++i)
      if (std::fabs(inv.w_m[i] - ws[1][i]) > 1e-12 * std::max(1.0, ws[1][i])) {
        detail["stage"] = "roundtrip";
        return false;
      }
    if (!inv.product_bound.holds()) {
      detail["stage"] = "product-bound";
      return false;
    }
    auto nr = norm_rewrite_check(f, ws, p44, r111);
    bool ok = std::fabs(nr.lhs - nr.rhs) <= 1e-9 * std::max(1.0, nr.lhs) &&
              std::fabs(nr.lhs2 - nr.rhs2) <= 1e-9 * std::max(1.0, nr.lhs2);
    if (!ok) detail["stage"] = "norm-rewrite";
    return ok;
  });
}

void suite_sparse(Battery& b, int d, int L) {
  Grid g(d, L);
  b.run("generate-verify", 60, 401, [&](std::uint64_t s, json&) {
    Rng rng(s);
    DyadicGrid dg = DyadicGrid::random_shift(g, rng);
    double zeta = rng.uniform(0.2, 0.95);
    SparseFamily fam = sparse_generate(dg, zeta, s);
    return sparse_verify(fam) && !fam.members.empty();
  });
  b.run("tamper-detection", 60, 402, [&](std::uint64_t s, json& detail) {
    Rng rng(s);
    DyadicGrid dg = DyadicGrid::random_shift(g, rng);
    SparseFamily fam = sparse_generate(dg, 0.5, s);
    if (fam.members.size() < 2) return true;
    SparseFamily bad = fam;
    bad.members[1].major_cells = bad.members[0].major_cells;
    std::string why;
    bool rejected = !sparse_verify(bad, &why);
    if (!rejected) detail["tamper"] = "overlap accepted";
    else detail["why"] = why;
    return rejected;
  });
  b.run("normalization-rejection", 60, 403, [&](std::uint64_t s, json&) {
    Rng rng(s);
    DyadicGrid dg = DyadicGrid::random_shift(g, rng);
    ShiftSpec spec = ShiftSpec::random(dg, {1, 0, 0}, ShiftForm::NoncancelSlot1, 0.6, 1.0, s);
    if (spec.coeffs().empty()) return true;
    auto bad = spec.coeffs();
    bad[static_cast<std::size_t>(rng.next_u64() % bad.size())].a *= 1.01;
    try {
      ShiftSpec reject(dg, {1, 0, 0}, ShiftForm::NoncancelSlot1, bad);
      return false;  // must have thrown
    } catch (const std::invalid_argument&) {
      return true;
    }
  });
}

}  // namespace

int verify_suite(const std::string& suite, std::ostream& out, int d, int L, std::uint64_t seed) {
  (void)seed;
  bool all = suite == "all";
  bool known = all;
  Battery b(out, suite);
  if (all || suite == "identities") {
    suite_identities(b, d, L);
    known = true;
  }
  if (all || suite == "rdf") {
    suite_rdf(b, d, std::min(L, 3));
    known = true;
  }
  if (all || suite == "lemma_main") {
    suite_lemma_main(b, d, L);
    known = true;
  }
  if (all || suite == "sparse") {
    suite_sparse(b, d, L);
    known = true;
  }
  if (!known) throw std::invalid_argument("unknown verify suite '" + suite + "'");
  return b.failures();
}

}  // namespace aprlab

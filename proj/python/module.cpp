#include "aprlab/dyadic.hpp"
#include "aprlab/experiments.hpp"
#include "aprlab/exponents.hpp"
#include "aprlab/norms.hpp"
#include "aprlab/operators.hpp"
#include "aprlab/rubio.hpp"
#include "aprlab/serialize.hpp"
#include "aprlab/weights.hpp"

#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <sstream>

namespace py = pybind11;
using namespace aprlab;

namespace {

GridFunction to_grid_function(const Grid& g, const py::array_t<double>& a) {
  if (a.size() != g.cell_count())
    throw std::invalid_argument("array length does not match the grid cell count");
  std::vector<double> v(a.data(), a.data() + a.size());
  return GridFunction(g, std::move(v));
}

py::array_t<double> to_array(const GridFunction& f) {
  return py::array_t<double>(static_cast<py::ssize_t>(f.size()), f.values().data());
}

ProductGridFunction to_product(const Grid& g1, const Grid& g2, const py::array_t<double>& a) {
  auto buf = a.request();
  if (buf.ndim != 2 || buf.shape[0] != g1.cell_count() || buf.shape[1] != g2.cell_count())
    throw std::invalid_argument("expected a 2-D array shaped (cells1, cells2)");
  std::vector<double> v(static_cast<std::size_t>(a.size()));
  auto r = a.unchecked<2>();
  for (py::ssize_t i = 0; i < buf.shape[0]; ++i)
    for (py::ssize_t j = 0; j < buf.shape[1]; ++j)
      v[static_cast<std::size_t>(i * buf.shape[1] + j)] = r(i, j);
  return ProductGridFunction(g1, g2, std::move(v));
}

std::vector<Exponent> parse_list(const std::vector<std::string>& xs) {
  std::vector<Exponent> out;
  for (const auto& s : xs) out.push_back(parse_exponent(s));
  return out;
}

py::dict cert_to_dict(const ConstantCert& c) {
  py::dict d;
  d["constant"] = c.value;
  d["cube_family"] = c.cube_family;
  d["formula_variant"] = c.formula_variant;
  d["argmax_start"] = py::make_tuple(c.argmax.start[0], c.argmax.start[1]);
  d["argmax_side"] = c.argmax.side;
  return d;
}

py::list cert_entries_to_list(const std::vector<CertEntry>& certs) {
  py::list out;
  for (const auto& c : certs) {
    py::dict d;
    d["name"] = c.name;
    d["value"] = c.value;
    d["bound"] = c.bound;
    d["holds"] = c.holds();
    out.append(d);
  }
  return out;
}

CubeFamily family_for(const Grid& g, const std::string& name) {
  if (name == "auto") return CubeFamily::preferred(g);
  if (name == "all") return CubeFamily::all_discrete(g);
  if (name == "dyadic") return CubeFamily::dyadic(DyadicGrid(g));
  throw std::invalid_argument("family must be auto|all|dyadic");
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "multilinear Muckenhoupt weight calculus on finite periodic dyadic grids";

  // --- exact exponent calculus ---------------------------------------------
  m.def("exponent_roundtrip",
        [](const std::string& s) { return format_exponent(parse_exponent(s)); },
        py::arg("exponent"));
  m.def(
      "reciprocal_sum",
      [](const std::vector<std::string>& exps) {
        return format_exponent(reciprocal_sum(parse_list(exps)));
      },
      py::arg("exponents"));
  m.def(
      "dual_reciprocal",
      [](const std::string& p) { return to_string(dual(parse_exponent(p)).inv); },
      py::arg("p"), "1 - 1/p as an exact rational string (may be negative)");
  m.def(
      "preceq_star",
      [](const std::vector<std::string>& r, const std::vector<std::string>& p) {
        return preceq_star(r_vector(parse_list(r)), p_vector(parse_list(p)));
      },
      py::arg("r"), py::arg("p"));
  m.def(
      "prec",
      [](const std::vector<std::string>& r, const std::vector<std::string>& p) {
        return prec(r_vector(parse_list(r)), p_vector(parse_list(p)));
      },
      py::arg("r"), py::arg("p"));
  m.def(
      "derived_scales",
      [](const std::vector<std::string>& p, const std::vector<std::string>& r) {
        DerivedScales ds = derived_scales(p_vector(parse_list(p)), r_vector(parse_list(r)));
        py::dict d;
        d["r"] = format_exponent(ds.r);
        d["inv_p_next"] = to_string(ds.p_next.inv);
        py::list deltas;
        for (const auto& x : ds.deltas) deltas.append(to_string(x.inv));
        d["inv_deltas"] = deltas;
        return d;
      },
      py::arg("p"), py::arg("r"));
  m.def(
      "offdiag_targets",
      [](const std::string& p0, const std::string& r0, const std::string& q0,
         const std::string& p) {
        OffdiagTargets t = offdiag_targets(parse_exponent(p0), parse_exponent(r0),
                                           parse_exponent(q0), parse_exponent(p));
        return py::make_tuple(format_exponent(t.r), format_exponent(t.q));
      },
      py::arg("p0"), py::arg("r0"), py::arg("q0"), py::arg("p"));
  m.def(
      "extrapolation_path",
      [](const std::vector<std::string>& start, const std::vector<std::string>& target,
         const std::vector<std::string>& r) {
        auto path = extrapolation_path(p_vector(parse_list(start)), p_vector(parse_list(target)),
                                       r_vector(parse_list(r)));
        py::list out;
        for (const auto& vec : path) {
          py::list row;
          for (std::size_t i = 0; i < vec.size(); ++i) row.append(format_exponent(vec[i]));
          out.append(row);
        }
        return out;
      },
      py::arg("start"), py::arg("target"), py::arg("r"));

  // --- weights ----------------------------------------------------------------
  m.def(
      "ap_constant",
      [](int d, int L, const py::array_t<double>& w, const std::string& p,
         const std::string& family) {
        Grid g(d, L);
        return cert_to_dict(ap_constant(Weight(to_grid_function(g, w)), parse_exponent(p),
                                        BaseMeasure::lebesgue(g), family_for(g, family)));
      },
      py::arg("d"), py::arg("L"), py::arg("w"), py::arg("p"), py::arg("family") = "auto");
  m.def(
      "apr_constant",
      [](int d, int L, const py::array_t<double>& w, const std::string& p, const std::string& r,
         const std::string& family) {
        Grid g(d, L);
        return cert_to_dict(apr_constant(Weight(to_grid_function(g, w)), parse_exponent(p),
                                         parse_exponent(r), BaseMeasure::lebesgue(g),
                                         family_for(g, family)));
      },
      py::arg("d"), py::arg("L"), py::arg("w"), py::arg("p"), py::arg("r"),
      py::arg("family") = "auto");
  m.def(
      "multilinear_constant",
      [](int d, int L, const std::vector<py::array_t<double>>& ws,
         const std::vector<std::string>& p, const std::vector<std::string>& r,
         const std::string& family) {
        Grid g(d, L);
        std::vector<Weight> weights;
        for (const auto& w : ws) weights.emplace_back(to_grid_function(g, w));
        return cert_to_dict(multilinear_constant(weights, p_vector(parse_list(p)),
                                                 r_vector(parse_list(r)), family_for(g, family)));
      },
      py::arg("d"), py::arg("L"), py::arg("ws"), py::arg("p"), py::arg("r"),
      py::arg("family") = "auto");
  m.def(
      "lemma_main_forward",
      [](int d, int L, const std::vector<py::array_t<double>>& ws,
         const std::vector<std::string>& p, const std::vector<std::string>& r,
         const std::string& family) {
        Grid g(d, L);
        std::vector<Weight> weights;
        for (const auto& w : ws) weights.emplace_back(to_grid_function(g, w));
        auto fw = lemma_main_forward(weights, p_vector(parse_list(p)), r_vector(parse_list(r)),
                                     family_for(g, family));
        py::dict out;
        out["what"] = to_array(fw.what.fn());
        out["W"] = to_array(fw.big.fn());
        out["base"] = cert_to_dict(fw.base);
        out["certs"] = cert_entries_to_list(fw.certs);
        return out;
      },
      py::arg("d"), py::arg("L"), py::arg("ws"), py::arg("p"), py::arg("r"),
      py::arg("family") = "auto");
  m.def(
      "power_weight",
      [](int d, int L, double a) { return to_array(power_weight(Grid(d, L), a).fn()); },
      py::arg("d"), py::arg("L"), py::arg("a"));
  m.def(
      "random_a1_weight",
      [](int d, int L, double delta, std::uint64_t seed) {
        Grid g(d, L);
        return to_array(random_a1_weight(g, delta, seed, CubeFamily::preferred(g)).fn());
      },
      py::arg("d"), py::arg("L"), py::arg("delta"), py::arg("seed"));

  // --- dyadic calculus and operators -------------------------------------------
  m.def(
      "haar",
      [](int d, int L, int level, const std::vector<int>& coord, const std::vector<int>& eta) {
        DyadicGrid dg{Grid(d, L)};
        Cube c{level, {coord[0], d == 2 ? coord[1] : 0}};
        return to_array(haar(dg, c, {eta[0], d == 2 ? eta[1] : 0}));
      },
      py::arg("d"), py::arg("L"), py::arg("level"), py::arg("coord"), py::arg("eta"));
  m.def(
      "square_function",
      [](int d, int L, const py::array_t<double>& f) {
        Grid g(d, L);
        return to_array(square_function(to_grid_function(g, f), DyadicGrid(g)));
      },
      py::arg("d"), py::arg("L"), py::arg("f"));
  m.def(
      "hl_maximal",
      [](int d, int L, const py::array_t<double>& f, const std::string& family) {
        Grid g(d, L);
        return to_array(hl_maximal(to_grid_function(g, f), BaseMeasure::lebesgue(g),
                                   family_for(g, family)));
      },
      py::arg("d"), py::arg("L"), py::arg("f"), py::arg("family") = "auto");
  m.def(
      "random_shift_apply",
      [](int d, int L, const std::vector<int>& complexity, int form, double fill,
         double amplitude, std::uint64_t seed, const py::array_t<double>& f1,
         const py::array_t<double>& f2) {
        Grid g(d, L);
        DyadicGrid dg(g);
        ShiftSpec spec = ShiftSpec::random(dg, {complexity[0], complexity[1], complexity[2]},
                                           static_cast<ShiftForm>(form), fill, amplitude, seed);
        return to_array(shift_apply(spec, to_grid_function(g, f1), to_grid_function(g, f2)));
      },
      py::arg("d"), py::arg("L"), py::arg("complexity"), py::arg("form"), py::arg("fill"),
      py::arg("amplitude"), py::arg("seed"), py::arg("f1"), py::arg("f2"));
  m.def(
      "sparse_generate_json",
      [](int d, int L, double zeta, std::uint64_t seed) {
        Rng rng(seed);
        DyadicGrid dg = DyadicGrid::random_shift(Grid(d, L), rng);
        return sparse_family_to_json(sparse_generate(dg, zeta, seed));
      },
      py::arg("d"), py::arg("L"), py::arg("zeta"), py::arg("seed"));
  m.def(
      "sparse_verify_json",
      [](const std::string& text) {
        std::string why;
        bool ok = sparse_verify(sparse_family_from_json(text), &why);
        return py::make_tuple(ok, why);
      },
      py::arg("json_text"));
  m.def(
      "sparse_form_json",
      [](const std::string& text, const std::vector<std::string>& rvec,
         const std::vector<py::array_t<double>>& fs, const py::array_t<double>& h) {
        SparseFamily s = sparse_family_from_json(text);
        const Grid& g = s.grid.grid();
        std::vector<GridFunction> gfs;
        for (const auto& f : fs) gfs.push_back(to_grid_function(g, f));
        return sparse_form(s, r_vector(parse_list(rvec)), gfs, to_grid_function(g, h));
      },
      py::arg("json_text"), py::arg("r"), py::arg("fs"), py::arg("h"));

  // --- norms ---------------------------------------------------------------------
  m.def(
      "lp_norm",
      [](int d, int L, const py::array_t<double>& f, const std::string& p) {
        Grid g(d, L);
        return lp_norm(to_grid_function(g, f), parse_exponent(p));
      },
      py::arg("d"), py::arg("L"), py::arg("f"), py::arg("p"));
  m.def(
      "mixed_norm",
      [](int L1, int L2, const py::array_t<double>& f, const std::string& p,
         const std::string& q) {
        Grid g1(1, L1), g2(1, L2);
        return mixed_norm(to_product(g1, g2, f), parse_exponent(p), parse_exponent(q));
      },
      py::arg("L1"), py::arg("L2"), py::arg("f"), py::arg("p"), py::arg("q"));

  // --- Rubio de Francia constructions -----------------------------------------------
  m.def(
      "rdf_case",
      [](int case_id, int d, int L, int K, std::uint64_t seed, std::string p, std::string r,
         std::string p0, std::string r0, std::string q0, const std::string& q, double tau0,
         long x0) {
        if (p.empty()) p = (case_id == 1) ? "2" : "4";
        if (r.empty()) r = (case_id == 1) ? "2" : "4";
        if (p0.empty()) p0 = (case_id == 1) ? "4" : "2";
        if (r0.empty()) r0 = (case_id == 1) ? "4" : "2";
        if (q0.empty()) q0 = (case_id == 2) ? "2" : "4";
        Grid g(d, L);
        CubeFamily fam = CubeFamily::preferred(g);
        BoundMode mode;
        mode.seed = seed;
        Rng rng(seed);
        GridFunction wf(g);
        for (double& x : wf.values()) x = std::exp(rng.uniform(-0.8, 0.8));
        Weight w(wf);
        OffdiagConstruction res = [&] {
          if (case_id == 1) {
            GridFunction gg(g);
            for (double& x : gg.values()) x = rng.uniform(0.0, 2.0);
            return construct_case1(w, gg, parse_exponent(p), parse_exponent(r),
                                   parse_exponent(p0), parse_exponent(r0), parse_exponent(q0),
                                   K, fam, mode);
          }
          if (case_id == 2) {
            GridFunction f(g);
            for (double& x : f.values()) x = rng.uniform(0.0, 2.0);
            return construct_case2(w, case2_canonical_witness(f, parse_exponent(q),
                                                              parse_exponent(q0)),
                                   parse_exponent(p), parse_exponent(r), parse_exponent(p0),
                                   parse_exponent(r0), parse_exponent(q0), parse_exponent(q), K,
                                   fam, mode);
          }
          return construct_case3(w, x0, tau0, parse_exponent(p), parse_exponent(r),
                                 parse_exponent(p0), parse_exponent(r0), parse_exponent(q0), K,
                                 fam, mode);
        }();
        py::dict out;
        out["case"] = res.case_id;
        out["B"] = res.B;
        out["K"] = res.K;
        out["w_constant"] = cert_to_dict(res.w_constant);
        out["W_constant"] = cert_to_dict(res.W_constant);
        out["W"] = to_array(res.W.fn());
        out["certs"] = cert_entries_to_list(res.certs);
        return out;
      },
      py::arg("case_id"), py::arg("d") = 1, py::arg("L") = 3, py::arg("K") = 16,
      py::arg("seed") = 1, py::arg("p") = "", py::arg("r") = "", py::arg("p0") = "",
      py::arg("r0") = "", py::arg("q0") = "", py::arg("q") = "4", py::arg("tau0") = 0.2,
      py::arg("x0") = 0);

  // --- experiments ------------------------------------------------------------------
  m.def(
      "run_experiment",
      [](const std::string& config_json) {
        Report rep = run_experiment(config_from_json(config_json));
        py::dict out;
        out["csv"] = rep.csv();
        out["summary"] = rep.summary_json();
        out["max_ratio"] = rep.max_ratio();
        return out;
      },
      py::arg("config_json"));
  m.def(
      "verify_suite",
      [](const std::string& suite, int d, int L) {
        std::ostringstream os;
        int failures = verify_suite(suite, os, d, L);
        return py::make_tuple(failures, os.str());
      },
      py::arg("suite"), py::arg("d") = 1, py::arg("L") = 4);
}

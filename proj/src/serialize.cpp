#include "aprlab/serialize.hpp"

#include "json.hpp"

#include <cstdio>

namespace aprlab {

using nlohmann::json;

std::string format_double(double x) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", x);
  return buf;
}

namespace {

json omega_to_json(const ShiftPattern& omega, int dim) {
  json arr = json::array();
  for (const auto& w : omega) {
    json level = json::array();
    for (int a = 0; a < dim; ++a) level.push_back(static_cast<int>(w[a]));
    arr.push_back(level);
  }
  return arr;
}

ShiftPattern omega_from_json(const json& arr, int dim, int depth) {
  ShiftPattern omega(static_cast<std::size_t>(depth), {0, 0});
  if (static_cast<int>(arr.size()) != depth)
    throw std::invalid_argument("omega must carry one entry per level");
  for (int l = 0; l < depth; ++l)
    for (int a = 0; a < dim; ++a)
      omega[static_cast<std::size_t>(l)][a] =
          static_cast<std::uint8_t>(arr[static_cast<std::size_t>(l)][static_cast<std::size_t>(a)]
                                        .get<int>());
  return omega;
}

json cube_to_json(const Cube& c, int dim) {
  json j;
  j["level"] = c.level;
  json coords = json::array();
  for (int a = 0; a < dim; ++a) coords.push_back(c.coord[a]);
  j["coords"] = coords;
  return j;
}

Cube cube_from_json(const json& j, int dim) {
  Cube c{j.at("level").get<int>(), {0, 0}};
  for (int a = 0; a < dim; ++a)
    c.coord[a] = j.at("coords")[static_cast<std::size_t>(a)].get<int>();
  return c;
}

}  // namespace

std::string grid_function_to_json(const GridFunction& f, const ShiftPattern* omega) {
  const Grid& g = f.grid();
  json j;
  j["d"] = g.dim;
  j["L"] = g.depth;
  ShiftPattern zero(static_cast<std::size_t>(g.depth), {0, 0});
  j["omega"] = omega_to_json(omega ? *omega : zero, g.dim);
  json vals = json::array();
  for (double x : f.values()) vals.push_back(format_double(x));
  j["values"] = vals;
  return j.dump();
}

GridFunction grid_function_from_json(const std::string& text, ShiftPattern* omega_out) {
  json j = json::parse(text);
  Grid g(j.at("d").get<int>(), j.at("L").get<int>());
  if (omega_out) *omega_out = omega_from_json(j.at("omega"), g.dim, g.depth);
  std::vector<double> vals;
  for (const auto& v : j.at("values")) vals.push_back(std::stod(v.get<std::string>()));
  return GridFunction(g, std::move(vals));
}

std::string sparse_family_to_json(const SparseFamily& s) {
  const Grid& g = s.grid.grid();
  json j;
  j["d"] = g.dim;
  j["L"] = g.depth;
  j["omega"] = omega_to_json(s.grid.omega(), g.dim);
  j["zeta"] = s.zeta;
  json cubes = json::array();
  for (const auto& m : s.members) {
    json e = cube_to_json(m.cube, g.dim);
    e["E"] = m.major_cells;
    cubes.push_back(e);
  }
  j["cubes"] = cubes;
  return j.dump(2);
}

SparseFamily sparse_family_from_json(const std::string& text) {
  json j = json::parse(text);
  Grid g(j.at("d").get<int>(), j.at("L").get<int>());
  DyadicGrid d(g, omega_from_json(j.at("omega"), g.dim, g.depth));
  SparseFamily s{d, j.at("zeta").get<double>(), {}};
  for (const auto& e : j.at("cubes")) {
    SparseFamily::Member m{cube_from_json(e, g.dim), {}};
    for (const auto& c : e.at("E")) m.major_cells.push_back(c.get<long>());
    s.members.push_back(std::move(m));
  }
  return s;
}

std::string shift_spec_to_json(const ShiftSpec& s) {
  const Grid& g = s.grid().grid();
  json j;
  j["d"] = g.dim;
  j["L"] = g.depth;
  j["omega"] = omega_to_json(s.grid().omega(), g.dim);
  j["complexity"] = s.complexity();
  j["form"] = static_cast<int>(s.form());
  json coeffs = json::array();
  for (const auto& e : s.coeffs()) {
    json entry;
    entry["K"] = cube_to_json(e.K, g.dim);
    entry["I1"] = cube_to_json(e.I1, g.dim);
    entry["I2"] = cube_to_json(e.I2, g.dim);
    entry["I3"] = cube_to_json(e.I3, g.dim);
    entry["a"] = format_double(e.a);
    coeffs.push_back(entry);
  }
  j["coeffs"] = coeffs;
  return j.dump(2);
}

ShiftSpec shift_spec_from_json(const std::string& text) {
  json j = json::parse(text);
  Grid g(j.at("d").get<int>(), j.at("L").get<int>());
  DyadicGrid d(g, omega_from_json(j.at("omega"), g.dim, g.depth));
  std::array<int, 3> complexity{};
  for (int i = 0; i < 3; ++i)
    complexity[static_cast<std::size_t>(i)] =
        j.at("complexity")[static_cast<std::size_t>(i)].get<int>();
  auto form = static_cast<ShiftForm>(j.at("form").get<int>());
  std::vector<ShiftSpec::Entry> coeffs;
  for (const auto& e : j.at("coeffs"))
    coeffs.push_back({cube_from_json(e.at("K"), g.dim), cube_from_json(e.at("I1"), g.dim),
                      cube_from_json(e.at("I2"), g.dim), cube_from_json(e.at("I3"), g.dim),
                      std::stod(e.at("a").get<std::string>())});
  return ShiftSpec(d, complexity, form, std::move(coeffs));
}

std::string paraproduct_spec_to_json(const ParaproductSpec& s) {
  const Grid& g = s.grid().grid();
  json j;
  j["d"] = g.dim;
  j["L"] = g.depth;
  j["omega"] = omega_to_json(s.grid().omega(), g.dim);
  j["form"] = s.form();
  json coeffs = json::array();
  for (const auto& e : s.coeffs()) {
    json entry;
    entry["K"] = cube_to_json(e.K, g.dim);
    entry["a"] = format_double(e.a);
    coeffs.push_back(entry);
  }
  j["coeffs"] = coeffs;
  return j.dump(2);
}

ParaproductSpec paraproduct_spec_from_json(const std::string& text) {
  json j = json::parse(text);
  Grid g(j.at("d").get<int>(), j.at("L").get<int>());
  DyadicGrid d(g, omega_from_json(j.at("omega"), g.dim, g.depth));
  std::vector<ParaproductSpec::Entry> coeffs;
  for (const auto& e : j.at("coeffs"))
    coeffs.push_back({cube_from_json(e.at("K"), g.dim), std::stod(e.at("a").get<std::string>())});
  return ParaproductSpec(d, j.at("form").get<int>(), std::move(coeffs));
}

std::string constant_cert_to_json(const ConstantCert& c) {
  json j;
  j["constant"] = format_double(c.value);
  j["cube_family"] = c.cube_family;
  j["argmax_cube"] = {{"start", {c.argmax.start[0], c.argmax.start[1]}}, {"side", c.argmax.side}};
  j["formula_variant"] = c.formula_variant;
  return j.dump();
}

std::string cert_entries_to_json(const std::vector<CertEntry>& certs) {
  json arr = json::array();
  for (const auto& c : certs) {
    json j;
    j["name"] = c.name;
    j["value"] = format_double(c.value);
    j["bound"] = format_double(c.bound);
    j["holds"] = c.holds();
    arr.push_back(j);
  }
  return arr.dump(2);
}

}  // namespace aprlab

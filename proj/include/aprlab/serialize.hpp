#pragma once

#include "aprlab/dyadic.hpp"
#include "aprlab/grid.hpp"
#include "aprlab/operators.hpp"
#include "aprlab/weights.hpp"

#include <string>

namespace aprlab {

// Doubles print as shortest-round-trip decimal strings so files re-read
// bit-exactly.
std::string format_double(double x);

// {"d":., "L":., "omega":[[...],...], "values":["...",...]}, row-major cells
std::string grid_function_to_json(const GridFunction& f, const ShiftPattern* omega = nullptr);
GridFunction grid_function_from_json(const std::string& text, ShiftPattern* omega_out = nullptr);

std::string sparse_family_to_json(const SparseFamily& s);
SparseFamily sparse_family_from_json(const std::string& text);

std::string shift_spec_to_json(const ShiftSpec& s);
ShiftSpec shift_spec_from_json(const std::string& text);

std::string paraproduct_spec_to_json(const ParaproductSpec& s);
ParaproductSpec paraproduct_spec_from_json(const std::string& text);

std::string constant_cert_to_json(const ConstantCert& c);
std::string cert_entries_to_json(const std::vector<CertEntry>& certs);

}  // namespace aprlab

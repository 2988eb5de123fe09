#include "copolab/json_io.hpp"

#include <cmath>
#include <cstdint>
#include <fstream>
#include <sstream>

namespace copolab {

namespace {

using nlohmann::json;

const json& require_field(const json& j, const char* field, const char* context) {
  if (!j.contains(field)) {
    throw InputError(std::string(context) + ": missing field \"" + field + "\"");
  }
  return j.at(field);
}

long require_int(const json& j, const char* field, const char* context) {
  const json& v = require_field(j, field, context);
  if (!v.is_number_integer()) {
    throw InputError(std::string(context) + ": field \"" + field + "\" must be an integer");
  }
  return v.get<long>();
}

double to_real(const json& v, const std::string& where) {
  if (!v.is_number()) throw InputError(where + " must be a number");
  return v.get<double>();
}

/// Flat row-major list of n*n reals -> n x n matrix.
Matrix parse_flat_square(const json& v, long n, const std::string& where) {
  if (!v.is_array()) throw InputError(where + " must be an array of reals");
  if (static_cast<long>(v.size()) != n * n) {
    throw InputError(where + " has " + std::to_string(v.size()) + " entries, expected " +
                     std::to_string(n * n) + " (row-major " + std::to_string(n) + "x" +
                     std::to_string(n) + ")");
  }
  Matrix m(n, n);
  for (long r = 0; r < n; ++r) {
    for (long c = 0; c < n; ++c) {
      m(r, c) = to_real(v[static_cast<std::size_t>(r * n + c)],
                        where + " entry " + std::to_string(r * n + c));
    }
  }
  return m;
}

/// 2-D array of rows -> matrix; all rows must have equal length.
Matrix parse_rows(const json& v, const std::string& where) {
  if (!v.is_array() || v.empty()) throw InputError(where + " must be a non-empty 2-D array");
  const long rows = static_cast<long>(v.size());
  if (!v[0].is_array()) throw InputError(where + " must be a 2-D array");
  const long cols = static_cast<long>(v[0].size());
  Matrix m(rows, cols);
  for (long r = 0; r < rows; ++r) {
    const json& row = v[static_cast<std::size_t>(r)];
    if (!row.is_array() || static_cast<long>(row.size()) != cols) {
      throw InputError(where + " row " + std::to_string(r) + " has mismatched length");
    }
    for (long c = 0; c < cols; ++c) {
      m(r, c) = to_real(row[static_cast<std::size_t>(c)],
                        where + " entry (" + std::to_string(r) + "," + std::to_string(c) + ")");
    }
  }
  return m;
}

StructureConstants parse_structure_constants(const json& v) {
  if (!v.is_array()) throw InputError("structure_constants must be a d x d x d array");
  const long d = static_cast<long>(v.size());
  StructureConstants sc;
  sc.d = d;
  sc.table.assign(static_cast<std::size_t>(d), Matrix::Zero(d, d));
  for (long i = 0; i < d; ++i) {
    const json& plane = v[static_cast<std::size_t>(i)];
    if (!plane.is_array() || static_cast<long>(plane.size()) != d) {
      throw InputError("structure_constants[" + std::to_string(i) + "] must have " +
                       std::to_string(d) + " rows");
    }
    for (long jj = 0; jj < d; ++jj) {
      const json& row = plane[static_cast<std::size_t>(jj)];
      if (!row.is_array() || static_cast<long>(row.size()) != d) {
        throw InputError("structure_constants[" + std::to_string(i) + "][" +
                         std::to_string(jj) + "] must have " + std::to_string(d) + " entries");
      }
      for (long k = 0; k < d; ++k) {
        sc.table[static_cast<std::size_t>(i)](jj, k) =
            to_real(row[static_cast<std::size_t>(k)],
                    "structure_constants[" + std::to_string(i) + "][" + std::to_string(jj) +
                        "][" + std::to_string(k) + "]");
      }
    }
  }
  const double anti = sc.antisymmetry_residual();
  if (anti >= 1e-10) {
    throw InputError("structure constants are not antisymmetric (residual " +
                     std::to_string(anti) + ")");
  }
  const double jac = sc.jacobi_residual();
  if (jac >= 1e-9) {
    throw InputError("structure constants violate the Jacobi identity (residual " +
                     std::to_string(jac) + ")");
  }
  return sc;
}

LieRep parse_linear_rep(const json& j, const TolerancePolicy& policy) {
  const long n = require_int(j, "ambient_dim", "linear_rep");
  if (n < 1) throw InputError("linear_rep: ambient_dim must be positive");

  const json& gens = require_field(j, "generators", "linear_rep");
  if (!gens.is_array()) throw InputError("linear_rep: generators must be an array");
  std::vector<Matrix> generators;
  for (std::size_t i = 0; i < gens.size(); ++i) {
    generators.push_back(parse_flat_square(gens[i], n, "generator " + std::to_string(i)));
  }

  std::vector<Matrix> discrete;
  if (j.contains("discrete_elements") && !j.at("discrete_elements").is_null()) {
    const json& de = j.at("discrete_elements");
    if (!de.is_array()) throw InputError("linear_rep: discrete_elements must be an array");
    for (std::size_t i = 0; i < de.size(); ++i) {
      discrete.push_back(parse_flat_square(de[i], n, "discrete element " + std::to_string(i)));
    }
  }

  bool orthogonal = false;
  if (j.contains("orthogonal")) {
    if (!j.at("orthogonal").is_boolean()) {
      throw InputError("linear_rep: orthogonal must be a boolean");
    }
    orthogonal = j.at("orthogonal").get<bool>();
  }
  return LieRep(n, std::move(generators), policy, orthogonal, std::move(discrete));
}

SymPairInput parse_sym_pair(const json& j) {
  SymPairInput input;
  input.sc = parse_structure_constants(require_field(j, "structure_constants", "sym_pair"));
  input.sigma_inv = parse_rows(require_field(j, "involution", "sym_pair"), "involution");
  input.inner = parse_rows(require_field(j, "inner", "sym_pair"), "inner");
  if (input.sigma_inv.rows() != input.sc.d || input.sigma_inv.cols() != input.sc.d) {
    throw InputError("involution must be " + std::to_string(input.sc.d) + "x" +
                     std::to_string(input.sc.d));
  }
  if (input.inner.rows() != input.sc.d || input.inner.cols() != input.sc.d) {
    throw InputError("inner must be " + std::to_string(input.sc.d) + "x" +
                     std::to_string(input.sc.d));
  }
  if (j.contains("embedding") && !j.at("embedding").is_null()) {
    const json& emb = j.at("embedding");
    if (!emb.is_array() || static_cast<long>(emb.size()) != input.sc.d) {
      throw InputError("embedding must supply one flat row-major matrix per basis element");
    }
    if (!emb.empty()) {
      if (!emb[0].is_array() || emb[0].empty()) {
        throw InputError("embedding matrices must be non-empty arrays");
      }
      const long ne = static_cast<long>(std::lround(std::sqrt(static_cast<double>(emb[0].size()))));
      if (ne * ne != static_cast<long>(emb[0].size())) {
        throw InputError("embedding matrices must be square (row-major)");
      }
      for (std::size_t i = 0; i < emb.size(); ++i) {
        input.embedding.push_back(parse_flat_square(emb[i], ne, "embedding " + std::to_string(i)));
      }
    }
  }
  return input;
}

TripleDatumInput parse_triple_datum(const json& j) {
  TripleDatumInput input;
  input.sc = parse_structure_constants(require_field(j, "structure_constants", "triple_datum"));
  const auto parse_indices = [&](const char* field) {
    const json& v = require_field(j, field, "triple_datum");
    if (!v.is_array()) throw InputError(std::string("triple_datum: ") + field + " must be an array");
    std::vector<long> out;
    for (std::size_t i = 0; i < v.size(); ++i) {
      if (!v[i].is_number_integer()) {
        throw InputError(std::string("triple_datum: ") + field + "[" + std::to_string(i) +
                         "] must be an integer");
      }
      const long idx = v[i].get<long>();
      if (idx < 0 || idx >= input.sc.d) {
        throw InputError(std::string("triple_datum: ") + field + " index " +
                         std::to_string(idx) + " out of range [0, " +
                         std::to_string(input.sc.d) + ")");
      }
      out.push_back(idx);
    }
    return out;
  };
  input.h_indices = parse_indices("h_indices");
  input.n_indices = parse_indices("n_indices");
  return input;
}

json matrix_to_flat(const Matrix& m) {
  json a = json::array();
  for (long r = 0; r < m.rows(); ++r) {
    for (long c = 0; c < m.cols(); ++c) a.push_back(m(r, c));
  }
  return a;
}

json matrix_to_rows(const Matrix& m) {
  json rows = json::array();
  for (long r = 0; r < m.rows(); ++r) {
    json row = json::array();
    for (long c = 0; c < m.cols(); ++c) row.push_back(m(r, c));
    rows.push_back(std::move(row));
  }
  return rows;
}

}  // namespace

ParsedInput parse_input(const json& j, const TolerancePolicy& policy) {
  if (!j.is_object()) throw InputError("input must be a JSON object");
  const json& kind = require_field(j, "kind", "input");
  if (!kind.is_string()) throw InputError("input: kind must be a string");
  const std::string k = kind.get<std::string>();
  if (k == "linear_rep") return parse_linear_rep(j, policy);
  if (k == "sym_pair") return parse_sym_pair(j);
  if (k == "triple_datum") return parse_triple_datum(j);
  throw InputError("input: unknown kind \"" + k +
                   "\" (expected linear_rep, sym_pair or triple_datum)");
}

ParsedInput parse_input_file(const std::string& path, const TolerancePolicy& policy) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open input file: " + path);
  json j;
  try {
    in >> j;
  } catch (const json::parse_error& e) {
    throw InputError("JSON parse error in " + path + ": " + e.what());
  }
  return parse_input(j, policy);
}

json linear_rep_to_json(const LieRep& rep) {
  json j;
  j["kind"] = "linear_rep";
  j["ambient_dim"] = rep.ambient_dim();
  json gens = json::array();
  for (const Matrix& g : rep.generators()) gens.push_back(matrix_to_flat(g));
  j["generators"] = std::move(gens);
  if (!rep.discrete_elements().empty()) {
    json de = json::array();
    for (const Matrix& e : rep.discrete_elements()) de.push_back(matrix_to_flat(e));
    j["discrete_elements"] = std::move(de);
  }
  j["orthogonal"] = rep.orthogonal();
  return j;
}

json sym_pair_to_json(const StructureConstants& sc, const Matrix& inner,
                      const Matrix& sigma_inv, const std::vector<Matrix>& embedding) {
  json j;
  j["kind"] = "sym_pair";
  json table = json::array();
  for (long i = 0; i < sc.d; ++i) {
    json plane = json::array();
    for (long jj = 0; jj < sc.d; ++jj) {
      json row = json::array();
      for (long k = 0; k < sc.d; ++k) row.push_back(sc.table[static_cast<std::size_t>(i)](jj, k));
      plane.push_back(std::move(row));
    }
    table.push_back(std::move(plane));
  }
  j["structure_constants"] = std::move(table);
  j["involution"] = matrix_to_rows(sigma_inv);
  j["inner"] = matrix_to_rows(inner);
  if (!embedding.empty()) {
    json emb = json::array();
    for (const Matrix& m : embedding) emb.push_back(matrix_to_flat(m));
    j["embedding"] = std::move(emb);
  }
  return j;
}

json triple_datum_to_json(const StructureConstants& sc, const std::vector<long>& h_indices,
                          const std::vector<long>& n_indices) {
  json j = sym_pair_to_json(sc, Matrix(), Matrix(), {});
  j.erase("involution");
  j.erase("inner");
  j["kind"] = "triple_datum";
  j["h_indices"] = h_indices;
  j["n_indices"] = n_indices;
  return j;
}

std::string digest_bytes(const std::string& bytes) {
  std::uint64_t hash = 0xcbf29ce484222325ULL;
  for (unsigned char c : bytes) {
    hash ^= c;
    hash *= 0x100000001b3ULL;
  }
  std::ostringstream out;
  out << "fnv1a64:" << std::hex << hash;
  return out.str();
}

}  // namespace copolab

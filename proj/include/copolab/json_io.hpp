#pragma once

#include "copolab/liealg.hpp"

#include <json.hpp>

#include <string>
#include <variant>
#include <vector>

namespace copolab {

struct SymPairInput {
  StructureConstants sc;
  Matrix inner;
  Matrix sigma_inv;
  std::vector<Matrix> embedding;
};

struct TripleDatumInput {
  StructureConstants sc;
  std::vector<long> h_indices;
  std::vector<long> n_indices;
};

using ParsedInput = std::variant<LieRep, SymPairInput, TripleDatumInput>;

/// Parse a top-level input object with "kind" in
/// {"linear_rep", "sym_pair", "triple_datum"}. Violations throw InputError
/// with a field diagnostic; a non-closed generator set throws
/// NotClosedError naming the offending bracket pair.
ParsedInput parse_input(const nlohmann::json& j, const TolerancePolicy& policy);

ParsedInput parse_input_file(const std::string& path, const TolerancePolicy& policy);

/// Serializers matching the input schema exactly.
nlohmann::json linear_rep_to_json(const LieRep& rep);
nlohmann::json sym_pair_to_json(const StructureConstants& sc, const Matrix& inner,
                                const Matrix& sigma_inv,
                                const std::vector<Matrix>& embedding);
nlohmann::json triple_datum_to_json(const StructureConstants& sc,
                                    const std::vector<long>& h_indices,
                                    const std::vector<long>& n_indices);

/// FNV-1a 64-bit digest of raw bytes, "fnv1a64:<hex>".
std::string digest_bytes(const std::string& bytes);

}  // namespace copolab

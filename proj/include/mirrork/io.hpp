#pragma once

// JSON formats (glattice/1, mackey/1, eqcw/1, e2/1, homology) and aligned
// text tables. Parsers reject unknown versions and unknown fields with
// ValidationError.

#include "mirrork/bredon.hpp"
#include "mirrork/catalog.hpp"
#include "mirrork/ktheory.hpp"

#include <json.hpp>

#include <string>
#include <vector>

namespace mirrork {

using Json = nlohmann::ordered_json;

/// Integers that fit in 64 bits are numbers, larger ones decimal strings.
Json integer_to_json(const Integer& n);
Integer integer_from_json(const Json& j);
Json matrix_to_json(const IntMatrix& m);
/// Shape must be rows x cols; an empty array stands for any matrix with no rows.
IntMatrix matrix_from_json(const Json& j, std::size_t rows, std::size_t cols);
/// [free_rank, [torsion...]]
Json abgroup_to_json(const AbGroup& a);
AbGroup abgroup_from_json(const Json& j);

Json group_to_json(const FiniteGroup& g);
FiniteGroup group_from_json(const Json& j);

/// Action listed on a generating set (greedy, smallest indices first).
Json glattice_to_json(const GLattice& lattice);
GLattice glattice_from_json(const Json& j);

Json mackey_to_json(const MackeyData& m);
/// Every subgroup must be listed. Missing conjugations default to the identity.
/// Violations of tr o res = [H:K] are appended to warnings when given.
MackeyData mackey_from_json(const Json& j, std::vector<std::string>* warnings = nullptr);

Json complex_to_json(const EquivariantCellComplex& x);
/// {"H": [[free_rank, [torsion...]], ...]}
Json homology_to_json(const std::vector<AbGroup>& h);
Json presentation_to_json(const Presentation& p);
Json e2_to_json(const E2Page& page);
Json swan_to_json(const std::vector<SwanDegree>& s);

/// Reads a file and parses it as JSON; ValidationError on I/O or syntax errors.
Json read_json_file(const std::string& path);
/// "catalog:<name>" or a glattice/1 file.
GLattice load_lattice(const std::string& source);

/// Columns padded to equal width; the first row is the header.
std::string format_table(const std::vector<std::vector<std::string>>& rows);
std::string format_homology(const std::vector<AbGroup>& h);
/// Grid with q increasing upwards and p to the right.
std::string format_e2(const E2Page& page);

}  // namespace mirrork

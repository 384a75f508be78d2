// SPDX-License-Identifier: MIT
//
// File formats and text surfaces:
//   - lineage files: JSON ("dnf" / "aggregate" with monoid + terms) and a
//     line-oriented plain-text DNF form (one clause per line, whitespace
//     separated, '#' comments) selected by the .dnf extension
//   - attribution reports: CSV (variable,banzhaf,shapley_num,shapley_den,
//     shapley_float) and a JSON mirror carrying metadata and exact values as
//     decimal strings
//   - deterministic instance generator (same params + seed => identical bytes)
//   - DOT export of d-trees

#pragma once

#include <cstdint>
#include <optional>
#include <string>

#include "attribution.hpp"
#include "engine.hpp"

namespace facta {

/// Loads a lineage file; the parser is chosen by extension (".dnf" => plain
/// text, anything else JSON). Throws InputError with line context on
/// malformed input.
Instance load_lineage(const std::string& path);

/// Same from an in-memory buffer; format is "json" or "dnf".
Instance load_lineage_string(const std::string& text, const std::string& format,
                             const std::string& source = "<string>");

/// CSV serialization of a report. Exact integers/rationals; the float column
/// is display-only (round-to-nearest double).
std::string report_csv(const Report& rep);
/// JSON mirror of the same report (exact values as decimal strings).
std::string report_json(const Report& rep);
/// Writes in the requested format ("csv" | "json"); path "-" means stdout.
void write_report(const Report& rep, const std::string& format,
                  const std::string& path);

struct GeneratorParams {
  int vars = 4;
  int clauses = 3;
  int width = 2;        // clause width (each clause draws `width` base vars)
  int duplication = 1;  // symmetric copies per base variable
  std::optional<MonoidKind> monoid;  // empty: boolean DNF instance
  long long value_min = 1;  // aggregate term values (COUNT forces 1)
  long long value_max = 9;
  std::uint64_t seed = 0;
};

/// Produces a lineage file (JSON text). Each of the `clauses` base clauses
/// draws `width` distinct base variables; every base variable is materialized
/// as `duplication` symmetric copies and each base clause expands to the full
/// cartesian product over its variables' copies (so duplication > 1
/// guarantees liftable structure). Aggregate mode emits one term per base
/// clause. Byte-identical output for equal params.
std::string generate(const GeneratorParams& p);

/// DOT digraph of a tree. When `run` is given (boolean trees), nodes carry
/// p/g annotations from the gradient pass.
std::string dot_export(const DTree& t, const VarTable& vars,
                       const BanzhafRun* run = nullptr);

}  // namespace facta

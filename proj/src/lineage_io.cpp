// SPDX-License-Identifier: MIT

#include "lineage_io.hpp"

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <random>
#include <set>
#include <sstream>

#include <json.hpp>

namespace facta {

namespace {

using Json = nlohmann::json;
using OrderedJson = nlohmann::ordered_json;

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InputError("cannot open file: " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  if (in.bad()) throw InputError("cannot read file: " + path);
  return buf.str();
}

bool ends_with(const std::string& s, const std::string& suffix) {
  return s.size() >= suffix.size() &&
         s.compare(s.size() - suffix.size(), suffix.size(), suffix) == 0;
}

std::size_t line_of_byte(const std::string& text, std::size_t byte) {
  std::size_t line = 1;
  for (std::size_t i = 0; i < byte && i < text.size(); ++i)
    if (text[i] == '\n') ++line;
  return line;
}

VarId intern_checked(VarTable& vars, const std::string& name) {
  if (!is_valid_var_name(name))
    throw InputError("invalid variable name '" + name +
                     "' (allowed characters: A-Za-z0-9_.:-)");
  return vars.intern(name);
}

/// Reads a JSON clause array-of-strings into a normalized Clause.
Clause parse_clause(const Json& j, VarTable& vars) {
  if (!j.is_array() || j.empty())
    throw InputError("each clause must be a non-empty array of variable names");
  Clause c;
  for (const Json& item : j) {
    if (!item.is_string())
      throw InputError("clause entries must be variable-name strings");
    c.push_back(intern_checked(vars, item.get<std::string>()));
  }
  normalize_clause(c);
  return c;
}

/// The optional explicit universe. Returns interned ids (sorted later).
std::optional<std::vector<VarId>> parse_variables(const Json& j, VarTable& vars) {
  if (!j.contains("variables")) return std::nullopt;
  const Json& list = j.at("variables");
  if (!list.is_array())
    throw InputError("'variables' must be an array of names");
  std::vector<VarId> out;
  for (const Json& item : list) {
    if (!item.is_string())
      throw InputError("'variables' entries must be strings");
    out.push_back(intern_checked(vars, item.get<std::string>()));
  }
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

void require_covered(const std::vector<VarId>& universe,
                     const std::vector<VarId>& used, const VarTable& vars) {
  for (VarId v : used)
    if (!std::binary_search(universe.begin(), universe.end(), v))
      throw InputError("variable '" + vars.name(v) +
                       "' appears in a clause but not in 'variables'");
}

Rational parse_term_value(const Json& term) {
  if (!term.contains("value"))
    throw InputError("aggregate term missing 'value'");
  const Json& v = term.at("value");
  if (v.is_string()) {
    std::optional<Rational> r = parse_decimal(v.get<std::string>());
    if (!r)
      throw InputError("term value '" + v.get<std::string>() +
                       "' is not a plain decimal");
    return *r;
  }
  if (v.is_number_integer()) {
    if (v.is_number_unsigned())
      return Rational(BigInt(v.get<std::uint64_t>()));
    return Rational(BigInt(v.get<std::int64_t>()));
  }
  throw InputError(
      "term values must be decimal strings or integers (floating-point JSON "
      "numbers lose precision)");
}

Instance from_json(const std::string& text, const std::string& source) {
  Json doc;
  try {
    doc = Json::parse(text);
  } catch (const Json::parse_error& e) {
    throw InputError("JSON parse error in " + source + " (line " +
                     std::to_string(line_of_byte(text, e.byte)) +
                     "): " + e.what());
  }
  if (!doc.is_object() || !doc.contains("type") || !doc.at("type").is_string())
    throw InputError("lineage file must be an object with a 'type' field");
  std::string type = doc.at("type").get<std::string>();

  Instance inst;
  inst.source = source;

  if (type == "dnf") {
    if (!doc.contains("clauses") || !doc.at("clauses").is_array())
      throw InputError("dnf lineage needs a 'clauses' array");
    DnfFormula f;
    for (const Json& cj : doc.at("clauses"))
      f.clauses.push_back(parse_clause(cj, inst.vars));
    std::optional<std::vector<VarId>> declared =
        parse_variables(doc, inst.vars);
    std::vector<VarId> used = formula_vars(f);
    if (declared) {
      require_covered(*declared, used, inst.vars);
      f.universe = *declared;
    } else {
      f.universe = used;
    }
    inst.lineage = canonicalize(f, inst.vars);
    return inst;
  }

  if (type == "aggregate") {
    if (!doc.contains("monoid") || !doc.at("monoid").is_string())
      throw InputError("aggregate lineage needs a 'monoid' field");
    std::optional<MonoidKind> monoid =
        parse_monoid(doc.at("monoid").get<std::string>());
    if (!monoid)
      throw InputError("unknown monoid '" +
                       doc.at("monoid").get<std::string>() +
                       "' (expected sum|count|max|min)");
    if (!doc.contains("terms") || !doc.at("terms").is_array() ||
        doc.at("terms").empty())
      throw InputError("aggregate lineage needs a non-empty 'terms' array");

    BnpExpression e;
    e.monoid = *monoid;
    std::vector<VarId> used;
    for (const Json& tj : doc.at("terms")) {
      if (!tj.is_object() || !tj.contains("clauses") ||
          !tj.at("clauses").is_array())
        throw InputError("each term needs a 'clauses' array");
      BnpTerm term;
      for (const Json& cj : tj.at("clauses"))
        term.formula.clauses.push_back(parse_clause(cj, inst.vars));
      if (e.monoid == MonoidKind::Count && !tj.contains("value"))
        term.value = 1;  // COUNT may omit values
      else
        term.value = parse_term_value(tj);
      std::vector<VarId> tv = formula_vars(term.formula);
      used.insert(used.end(), tv.begin(), tv.end());
      e.terms.push_back(std::move(term));
    }
    std::sort(used.begin(), used.end());
    used.erase(std::unique(used.begin(), used.end()), used.end());
    std::optional<std::vector<VarId>> declared =
        parse_variables(doc, inst.vars);
    if (declared) {
      require_covered(*declared, used, inst.vars);
      e.universe = *declared;
    } else {
      e.universe = used;
    }
    for (BnpTerm& t : e.terms) {
      t.formula.universe = e.universe;
      t.formula = canonicalize(t.formula, inst.vars);
    }
    validate_bnp(e, inst.vars);
    inst.lineage = std::move(e);
    return inst;
  }

  throw InputError("unknown lineage type '" + type +
                   "' (expected 'dnf' or 'aggregate')");
}

Instance from_dnf_text(const std::string& text, const std::string& source) {
  Instance inst;
  inst.source = source;
  DnfFormula f;
  std::istringstream in(text);
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    std::size_t hash = line.find('#');
    if (hash != std::string::npos) line.resize(hash);
    std::istringstream tokens(line);
    Clause c;
    std::string tok;
    while (tokens >> tok) {
      if (!is_valid_var_name(tok))
        throw InputError(source + ":" + std::to_string(lineno) +
                         ": invalid variable name '" + tok + "'");
      c.push_back(inst.vars.intern(tok));
    }
    if (c.empty()) continue;  // blank / comment-only line
    normalize_clause(c);
    f.clauses.push_back(std::move(c));
  }
  f.universe = formula_vars(f);
  inst.lineage = canonicalize(f, inst.vars);
  return inst;
}

std::string double_repr(double d) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", d);
  return buf;
}

OrderedJson rational_json(const Rational& r) {
  OrderedJson o;
  o["num"] = boost::multiprecision::numerator(r).str();
  o["den"] = boost::multiprecision::denominator(r).str();
  o["float"] = to_double(r);
  return o;
}

// Deterministic bounded sampling: std::uniform_int_distribution is
// implementation-defined, and generated files must be byte-identical across
// platforms for a given seed.
std::uint64_t bounded(std::mt19937_64& rng, std::uint64_t n) {
  const std::uint64_t threshold = (-n) % n;  // 2^64 mod n
  for (;;) {
    std::uint64_t r = rng();
    if (r >= threshold) return r % n;
  }
}

}  // namespace

Instance load_lineage(const std::string& path) {
  std::string text = read_file(path);
  if (ends_with(path, ".dnf")) return from_dnf_text(text, path);
  return from_json(text, path);
}

Instance load_lineage_string(const std::string& text, const std::string& format,
                             const std::string& source) {
  if (format == "dnf") return from_dnf_text(text, source);
  if (format == "json") return from_json(text, source);
  throw InputError("unknown lineage format '" + format +
                   "' (expected 'json' or 'dnf')");
}

std::string report_csv(const Report& rep) {
  std::ostringstream out;
  out << "variable,banzhaf,shapley_num,shapley_den,shapley_float\n";
  for (const ReportRow& row : rep.rows) {
    out << row.variable << ',';
    if (row.banzhaf) out << format_exact(*row.banzhaf);
    out << ',';
    if (row.shapley) {
      out << boost::multiprecision::numerator(*row.shapley).str() << ','
          << boost::multiprecision::denominator(*row.shapley).str() << ','
          << double_repr(to_double(*row.shapley));
    } else {
      out << ",,";
    }
    out << '\n';
  }
  return out.str();
}

std::string report_json(const Report& rep) {
  OrderedJson doc;
  doc["source"] = rep.source;
  doc["kind"] = rep.kind;
  if (rep.monoid.empty())
    doc["monoid"] = nullptr;
  else
    doc["monoid"] = rep.monoid;
  doc["method"] = rep.method;
  doc["measure"] = rep.measure;
  doc["lifted"] = rep.lifted;
  doc["universe_size"] = rep.universe_size;
  if (rep.tree) {
    OrderedJson t;
    t["size"] = rep.tree->size.str();
    t["dag_size"] = rep.tree->dag_size;
    t["depth"] = rep.tree->depth;
    t["var_count"] = rep.tree->var_count;
    t["shannon_count"] = rep.tree->shannon_count.str();
    OrderedJson gates;
    for (const auto& [kind, count] : rep.tree->gate_histogram)
      gates[dkind_name(kind)] = count.str();
    t["gates"] = gates;
    doc["tree"] = t;
  } else {
    doc["tree"] = nullptr;
  }
  if (rep.root_probability)
    doc["root_probability"] = rational_json(*rep.root_probability);
  else
    doc["root_probability"] = nullptr;
  OrderedJson timings;
  timings["compile_seconds"] = rep.compile_seconds;
  timings["attribution_seconds"] = rep.attribution_seconds;
  doc["timings"] = timings;
  OrderedJson rows = OrderedJson::array();
  for (const ReportRow& row : rep.rows) {
    OrderedJson r;
    r["variable"] = row.variable;
    if (row.banzhaf)
      r["banzhaf"] = format_exact(*row.banzhaf);
    else
      r["banzhaf"] = nullptr;
    if (row.shapley)
      r["shapley"] = rational_json(*row.shapley);
    else
      r["shapley"] = nullptr;
    rows.push_back(r);
  }
  doc["rows"] = rows;
  return doc.dump(2) + "\n";
}

void write_report(const Report& rep, const std::string& format,
                  const std::string& path) {
  std::string text;
  if (format == "csv")
    text = report_csv(rep);
  else if (format == "json")
    text = report_json(rep);
  else
    throw InputError("unknown report format '" + format +
                     "' (expected 'csv' or 'json')");
  if (path == "-") {
    std::fwrite(text.data(), 1, text.size(), stdout);
    return;
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) throw InputError("cannot open output file: " + path);
  out << text;
  if (!out) throw InputError("cannot write output file: " + path);
}

std::string generate(const GeneratorParams& p) {
  if (p.vars < 1) throw InputError("generator: vars must be >= 1");
  if (p.clauses < 1) throw InputError("generator: clauses must be >= 1");
  if (p.width < 1) throw InputError("generator: width must be >= 1");
  if (p.width > p.vars)
    throw InputError("generator: width (" + std::to_string(p.width) +
                     ") exceeds vars (" + std::to_string(p.vars) + ")");
  if (p.duplication < 1) throw InputError("generator: duplication must be >= 1");
  if (p.value_min > p.value_max)
    throw InputError("generator: value_min exceeds value_max");

  std::mt19937_64 rng(p.seed);
  const int dup = p.duplication;

  auto copy_name = [&](int base, int copy) {
    std::string n = "x" + std::to_string(base);
    if (dup > 1) n += "c" + std::to_string(copy);
    return n;
  };

  std::vector<std::string> variables;
  for (int i = 0; i < p.vars; ++i)
    for (int j = 0; j < dup; ++j) variables.push_back(copy_name(i, j));

  // Base clauses: exactly `width` distinct base variables each.
  std::vector<std::vector<int>> base_clauses;
  for (int c = 0; c < p.clauses; ++c) {
    std::set<int> picked;
    while (static_cast<int>(picked.size()) < p.width)
      picked.insert(static_cast<int>(bounded(rng, p.vars)));
    base_clauses.emplace_back(picked.begin(), picked.end());
  }

  // Cartesian expansion over copies (odometer, last slot fastest).
  auto expand = [&](const std::vector<int>& base) {
    OrderedJson clauses = OrderedJson::array();
    std::vector<int> digit(base.size(), 0);
    for (;;) {
      OrderedJson clause = OrderedJson::array();
      for (std::size_t i = 0; i < base.size(); ++i)
        clause.push_back(copy_name(base[i], digit[i]));
      clauses.push_back(clause);
      std::size_t i = base.size();
      while (i-- > 0) {
        if (++digit[i] < dup) break;
        digit[i] = 0;
        if (i == 0) return clauses;
      }
      if (digit == std::vector<int>(base.size(), 0)) return clauses;
    }
  };

  OrderedJson doc;
  doc["type"] = p.monoid ? "aggregate" : "dnf";
  if (p.monoid) doc["monoid"] = monoid_name(*p.monoid);
  doc["variables"] = variables;
  if (!p.monoid) {
    OrderedJson clauses = OrderedJson::array();
    for (const auto& base : base_clauses)
      for (OrderedJson& cl : expand(base)) clauses.push_back(std::move(cl));
    doc["clauses"] = clauses;
  } else {
    OrderedJson terms = OrderedJson::array();
    for (const auto& base : base_clauses) {
      long long value =
          *p.monoid == MonoidKind::Count
              ? 1
              : p.value_min +
                    static_cast<long long>(bounded(
                        rng, static_cast<std::uint64_t>(p.value_max -
                                                        p.value_min + 1)));
      OrderedJson term;
      term["clauses"] = expand(base);
      term["value"] = std::to_string(value);
      terms.push_back(term);
    }
    doc["terms"] = terms;
  }
  return doc.dump(2) + "\n";
}

std::string dot_export(const DTree& t, const VarTable& vars,
                       const BanzhafRun* run) {
  std::ostringstream out;
  out << "digraph dtree {\n  node [fontname=\"Helvetica\"];\n";
  if (t.root == kNoNode) {
    out << "}\n";
    return out.str();
  }
  std::vector<NodeId> order = t.reachable();

  // A Const0 reached as a child of a semimodule gate denotes Bottom.
  std::vector<bool> isBottom(t.dag_size(), false);
  for (NodeId id : order) {
    const DNode& n = t.node(id);
    if (!n.semimodule) continue;
    for (NodeId c : n.children)
      if (t.node(c).kind == DKind::Const0) isBottom[c] = true;
  }

  for (NodeId id : order) {
    const DNode& n = t.node(id);
    std::string label;
    switch (n.kind) {
      case DKind::Const0: label = isBottom[id] ? "\xE2\x8A\xA5" : "0"; break;
      case DKind::Const1: label = "1"; break;
      case DKind::Var: label = vars.name(n.var); break;
      case DKind::Value: label = format_exact(n.value); break;
      case DKind::IndOr: label = "\xE2\x8A\x95"; break;       // (+)
      case DKind::IndAnd: label = "\xE2\x8A\x99"; break;      // (.)
      case DKind::Shannon: label = "\xE2\x8A\x94"; break;     // |_|
      case DKind::ScalarMul: label = "\xE2\x8A\x97"; break;   // (x)
    }
    if (run && !n.semimodule && n.kind != DKind::Const0 &&
        n.kind != DKind::Const1) {
      label += "\\np=" + double_repr(to_double(run->node_p[id]));
      label += "\\ng=" + format_exact(run->node_g[id]);
    }
    out << "  n" << id << " [label=\"" << label << "\"];\n";
    if (n.kind == DKind::Shannon) {
      out << "  n" << id << " -> n" << n.children[0] << " [label=\"c\"];\n";
      out << "  n" << id << " -> n" << n.children[1] << " [label=\"1\"];\n";
      out << "  n" << id << " -> n" << n.children[2] << " [label=\"0\"];\n";
    } else if (n.kind == DKind::ScalarMul) {
      for (std::size_t i = 0; i + 1 < n.children.size(); ++i)
        out << "  n" << id << " -> n" << n.children[i] << ";\n";
      out << "  n" << id << " -> n" << n.children.back()
          << " [label=\"m\"];\n";
    } else {
      for (NodeId c : n.children) out << "  n" << id << " -> n" << c << ";\n";
    }
  }
  out << "}\n";
  return out.str();
}

}  // namespace facta

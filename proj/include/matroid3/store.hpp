#pragma once

#include <cctype>
#include <fstream>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "canonical.hpp"
#include "invariants.hpp"
#include "represent.hpp"

namespace matroid3 {

inline constexpr int kSchemaVersion = 1;

struct RecordFlags {
  bool supersolvable = false;
  bool divisionally_free = false;
  bool inductively_free = false;
  // Balancedness is defined through the roots of chi, so these stay null
  // whenever chi does not split integrally.
  std::optional<bool> atom_balanced;
  std::optional<bool> coatom_balanced;
  std::optional<bool> strongly_balanced;

  bool operator==(const RecordFlags& o) const {
    return supersolvable == o.supersolvable && divisionally_free == o.divisionally_free &&
           inductively_free == o.inductively_free && atom_balanced == o.atom_balanced &&
           coatom_balanced == o.coatom_balanced && strongly_balanced == o.strongly_balanced;
  }
};

struct RecordRepresentability {
  std::vector<int> battery;  // field orders, in search order
  std::vector<bool> found;   // parallel to battery

  bool any() const {
    for (bool f : found)
      if (f) return true;
    return false;
  }

  bool operator==(const RecordRepresentability& o) const {
    return battery == o.battery && found == o.found;
  }
};

// One stored matroid with its invariants. Records are keyed by
// (n, blocks); the stored block list is the minimal image under Sym(n).
struct MatroidRecord {
  int n = 0;
  BlockList blocks;
  MultiplicityVector mv;
  long long b2 = 0;
  std::optional<std::pair<long long, long long>> chi_roots;
  BivariatePolynomial tutte;
  std::optional<RecordFlags> flags;
  std::optional<RecordRepresentability> representability;
  unsigned long long aut_order = 0;

  bool classified() const { return flags.has_value() && representability.has_value(); }

  bool operator==(const MatroidRecord& o) const {
    return n == o.n && blocks == o.blocks && mv == o.mv && b2 == o.b2 && chi_roots == o.chi_roots &&
           tutte == o.tutte && flags == o.flags && representability == o.representability &&
           aut_order == o.aut_order;
  }
};

// Everything derivable without freeness recursion or field search.
inline MatroidRecord base_record(const TwoPartition& M) {
  MatroidRecord r;
  r.n = M.n;
  r.blocks = minimal_image(M.n, M.blocks);
  r.mv = multiplicity_vector(M);
  CharacteristicData d = characteristic_data(r.mv);
  r.b2 = d.b2;
  if (d.splits) r.chi_roots = std::make_pair(d.a, d.b);
  r.tutte = tutte(M);
  r.aut_order = blocklist_stabilizer(M.n, r.blocks).order();
  return r;
}

struct ClassifyOptions {
  std::vector<FieldSpec> battery = default_battery();
  // When set, inductive-freeness recursion reuses verdicts across calls; the
  // classification driver walks records by ascending size, so deletions of a
  // larger matroid usually hit an already-stored answer.
  FreenessMemo* memo = nullptr;
};

inline MatroidRecord classify(const TwoPartition& M, const ClassifyOptions& options = {}) {
  MatroidRecord r = base_record(M);
  RecordFlags flags;
  flags.supersolvable = is_supersolvable(M).value;
  flags.divisionally_free = is_divisionally_free(M);
  if (options.memo != nullptr)
    flags.inductively_free = is_inductively_free(M, *options.memo);
  else
    flags.inductively_free = is_inductively_free(M);
  if (r.chi_roots.has_value()) {
    Balancedness bal = balancedness(M);
    flags.atom_balanced = bal.atom_balanced;
    flags.coatom_balanced = bal.coatom_balanced;
    flags.strongly_balanced = bal.strongly_balanced;
  }
  r.flags = flags;

  RecordRepresentability rep;
  RepresentabilitySummary summary = representability_summary(M, options.battery);
  for (const RepresentationResult& res : summary.per_field) {
    rep.battery.push_back(res.field.q());
    rep.found.push_back(res.found);
  }
  r.representability = rep;
  return r;
}

// ---- line-delimited JSON persistence ----------------------------------

namespace detail {

using ordered_json = nlohmann::ordered_json;

inline ordered_json record_to_json(const MatroidRecord& r) {
  ordered_json j;
  j["schema_version"] = kSchemaVersion;
  j["n"] = r.n;
  ordered_json blocks = ordered_json::array();
  for (Block b : r.blocks) {
    ordered_json atoms = ordered_json::array();
    for (int a : block_atoms(b)) atoms.push_back(a + 1);
    blocks.push_back(std::move(atoms));
  }
  j["blocks"] = std::move(blocks);
  ordered_json mv = ordered_json::array();
  for (int k = 2; k < r.n; ++k) mv.push_back(r.mv.count(k));
  j["mv"] = std::move(mv);
  j["b2"] = r.b2;
  if (r.chi_roots)
    j["chi_roots"] = ordered_json::array({r.chi_roots->first, r.chi_roots->second});
  else
    j["chi_roots"] = nullptr;
  j["tutte"] = r.tutte.c;
  if (r.flags) {
    ordered_json f;
    f["supersolvable"] = r.flags->supersolvable;
    f["divisionally_free"] = r.flags->divisionally_free;
    f["inductively_free"] = r.flags->inductively_free;
    auto put_opt = [&f](const char* key, const std::optional<bool>& v) {
      if (v)
        f[key] = *v;
      else
        f[key] = nullptr;
    };
    put_opt("atom_balanced", r.flags->atom_balanced);
    put_opt("coatom_balanced", r.flags->coatom_balanced);
    put_opt("strongly_balanced", r.flags->strongly_balanced);
    j["flags"] = std::move(f);
  } else {
    j["flags"] = nullptr;
  }
  if (r.representability) {
    ordered_json rep;
    rep["battery"] = r.representability->battery;
    rep["found"] = r.representability->found;
    j["representability"] = std::move(rep);
  } else {
    j["representability"] = nullptr;
  }
  j["aut_order"] = r.aut_order;
  return j;
}

inline MatroidRecord record_from_json(const ordered_json& j) {
  if (!j.is_object()) throw std::runtime_error("record is not an object");
  static const char* const kKeys[] = {"schema_version", "n",     "blocks",
                                      "mv",             "b2",    "chi_roots",
                                      "tutte",          "flags", "representability",
                                      "aut_order"};
  for (const char* key : kKeys)
    if (!j.contains(key)) throw std::runtime_error(std::string("missing field '") + key + "'");
  for (const auto& item : j.items()) {
    bool known = false;
    for (const char* key : kKeys) known = known || item.key() == key;
    if (!known) throw std::runtime_error("unknown field '" + item.key() + "'");
  }
  if (j.at("schema_version").get<int>() != kSchemaVersion)
    throw std::runtime_error("unsupported schema version");

  MatroidRecord r;
  r.n = j.at("n").get<int>();
  std::vector<std::vector<int>> one_based;
  for (const auto& atoms : j.at("blocks")) one_based.push_back(atoms.get<std::vector<int>>());
  TwoPartition M = make_matroid(r.n, one_based);
  r.blocks = std::move(M.blocks);

  r.mv.n = r.n;
  r.mv.m.assign(static_cast<std::size_t>(r.n), 0);
  std::vector<int> mv_list = j.at("mv").get<std::vector<int>>();
  if (static_cast<int>(mv_list.size()) != r.n - 2) throw std::runtime_error("mv has the wrong length");
  for (int k = 2; k < r.n; ++k) r.mv.m[static_cast<std::size_t>(k)] = mv_list[static_cast<std::size_t>(k - 2)];
  if (r.mv != multiplicity_vector(TwoPartition{r.n, r.blocks}))
    throw std::runtime_error("mv does not match the block list");

  r.b2 = j.at("b2").get<long long>();
  if (!j.at("chi_roots").is_null()) {
    auto roots = j.at("chi_roots").get<std::vector<long long>>();
    if (roots.size() != 2) throw std::runtime_error("chi_roots must hold two roots");
    r.chi_roots = std::make_pair(roots[0], roots[1]);
  }
  r.tutte.c = j.at("tutte").get<std::vector<std::vector<long long>>>();
  if (!j.at("flags").is_null()) {
    const auto& f = j.at("flags");
    RecordFlags flags;
    flags.supersolvable = f.at("supersolvable").get<bool>();
    flags.divisionally_free = f.at("divisionally_free").get<bool>();
    flags.inductively_free = f.at("inductively_free").get<bool>();
    auto get_opt = [&f](const char* key) -> std::optional<bool> {
      if (f.at(key).is_null()) return std::nullopt;
      return f.at(key).get<bool>();
    };
    flags.atom_balanced = get_opt("atom_balanced");
    flags.coatom_balanced = get_opt("coatom_balanced");
    flags.strongly_balanced = get_opt("strongly_balanced");
    r.flags = flags;
  }
  if (!j.at("representability").is_null()) {
    const auto& rep = j.at("representability");
    RecordRepresentability rr;
    rr.battery = rep.at("battery").get<std::vector<int>>();
    rr.found = rep.at("found").get<std::vector<bool>>();
    if (rr.battery.size() != rr.found.size())
      throw std::runtime_error("representability arrays disagree in length");
    r.representability = std::move(rr);
  }
  r.aut_order = j.at("aut_order").get<unsigned long long>();
  return r;
}

inline std::string record_key(const MatroidRecord& r) {
  std::string key = std::to_string(r.n) + ":";
  for (Block b : r.blocks) key += std::to_string(b) + ",";
  return key;
}

}  // namespace detail

inline std::string record_to_line(const MatroidRecord& r) { return detail::record_to_json(r).dump(); }

inline void write_records(const std::string& path, const std::vector<MatroidRecord>& records) {
  std::map<std::string, std::size_t> seen;
  for (std::size_t i = 0; i < records.size(); ++i) {
    auto [it, fresh] = seen.emplace(detail::record_key(records[i]), i);
    if (!fresh)
      fail(errc::duplicate_key, "records " + std::to_string(it->second + 1) + " and " +
                                    std::to_string(i + 1) + " share a key");
  }
  std::ofstream out(path, std::ios::trunc);
  if (!out) fail(errc::parse_error, "cannot open '" + path + "' for writing");
  for (const MatroidRecord& r : records) out << record_to_line(r) << '\n';
  if (!out) fail(errc::parse_error, "write to '" + path + "' failed");
}

inline std::vector<MatroidRecord> read_records(const std::string& path) {
  std::ifstream in(path);
  if (!in) fail(errc::parse_error, "cannot open '" + path + "'");
  std::vector<MatroidRecord> records;
  std::map<std::string, std::size_t> seen;
  std::string line;
  for (long lineno = 1; std::getline(in, line); ++lineno) {
    if (line.empty()) continue;
    try {
      records.push_back(detail::record_from_json(detail::ordered_json::parse(line)));
    } catch (const std::exception& e) {
      fail(errc::parse_error, path + ":" + std::to_string(lineno) + ": " + e.what());
    }
    auto [it, fresh] = seen.emplace(detail::record_key(records.back()), records.size());
    if (!fresh)
      fail(errc::duplicate_key,
           path + ":" + std::to_string(lineno) + ": duplicate of record " + std::to_string(it->second));
  }
  return records;
}

// Canonicalize-then-scan lookup; accepts any labeling of the matroid.
inline const MatroidRecord* find_record(const std::vector<MatroidRecord>& records,
                                        const TwoPartition& M) {
  BlockList canon = minimal_image(M.n, M.blocks);
  for (const MatroidRecord& r : records)
    if (r.n == M.n && r.blocks == canon) return &r;
  return nullptr;
}

// ---- query expressions -------------------------------------------------

// Grammar:  expr := term ('or' term)*        term := factor ('and' factor)*
//           factor := 'not' factor | '(' expr ')' | field [cmp value]
//           cmp := = | == | != | < | <= | > | >=
//           value := integer | true | false | '(' int ',' int [',' int]* ')'
// Fields: n, b2, aut_order (numeric); supersolvable, divisionally_free,
// inductively_free, atom_balanced, coatom_balanced, strongly_balanced,
// int_split, representable (boolean, bare form allowed; null counts as
// false); mv, chi_roots (tuples, = and != only).
struct QueryNode {
  enum Kind { kAnd, kOr, kNot, kCompare } kind = kCompare;
  enum Cmp { kTruthy, kEq, kNe, kLt, kLe, kGt, kGe } cmp = kTruthy;
  std::vector<QueryNode> kids;
  std::string field;
  long long number = 0;
  bool boolean = false;
  std::vector<long long> tuple;
  enum ValueKind { kNone, kNumber, kBool, kTuple } value_kind = kNone;
};

namespace detail {

struct QueryLexer {
  std::string text;
  std::size_t pos = 0;

  void skip() {
    while (pos < text.size() && std::isspace(static_cast<unsigned char>(text[pos]))) ++pos;
  }

  std::string peek() {
    skip();
    if (pos >= text.size()) return "";
    char c = text[pos];
    if (std::isalpha(static_cast<unsigned char>(c))) {
      std::size_t end = pos;
      while (end < text.size() &&
             (std::isalnum(static_cast<unsigned char>(text[end])) || text[end] == '_' || text[end] == '-'))
        ++end;
      return text.substr(pos, end - pos);
    }
    if (std::isdigit(static_cast<unsigned char>(c))) {
      std::size_t end = pos;
      while (end < text.size() && std::isdigit(static_cast<unsigned char>(text[end]))) ++end;
      return text.substr(pos, end - pos);
    }
    for (const char* op : {"==", "!=", "<=", ">="})
      if (text.compare(pos, 2, op) == 0) return op;
    return text.substr(pos, 1);
  }

  std::string take() {
    std::string t = peek();
    pos += t.size();
    return t;
  }

  bool accept(const std::string& t) {
    if (peek() != t) return false;
    take();
    return true;
  }
};

inline const std::vector<std::string>& query_fields() {
  static const std::vector<std::string> fields = {
      "n",          "b2",         "aut_order",        "supersolvable",
      "divisionally_free", "inductively_free", "atom_balanced", "coatom_balanced",
      "strongly_balanced", "int_split",  "int-split",        "representable",
      "mv",         "chi_roots"};
  return fields;
}

inline QueryNode parse_expr(QueryLexer& lex);

inline QueryNode parse_factor(QueryLexer& lex) {
  if (lex.accept("not")) {
    QueryNode node;
    node.kind = QueryNode::kNot;
    node.kids.push_back(parse_factor(lex));
    return node;
  }
  if (lex.accept("(")) {
    QueryNode inner = parse_expr(lex);
    if (!lex.accept(")")) fail(errc::parse_error, "expected ')' in query");
    return inner;
  }
  std::string field = lex.take();
  if (field.empty()) fail(errc::parse_error, "query ended where a field was expected");
  bool known = false;
  for (const std::string& f : query_fields()) known = known || f == field;
  if (!known) fail(errc::unknown_field, "unknown query field '" + field + "'");

  QueryNode node;
  node.kind = QueryNode::kCompare;
  node.field = field == "int-split" ? "int_split" : field;

  static const std::pair<const char*, QueryNode::Cmp> kOps[] = {
      {"==", QueryNode::kEq}, {"!=", QueryNode::kNe}, {"<=", QueryNode::kLe},
      {">=", QueryNode::kGe}, {"=", QueryNode::kEq},  {"<", QueryNode::kLt},
      {">", QueryNode::kGt}};
  for (const auto& [tok, cmp] : kOps) {
    if (lex.accept(tok)) {
      node.cmp = cmp;
      std::string v = lex.peek();
      if (v == "true" || v == "false") {
        lex.take();
        node.boolean = v == "true";
        node.value_kind = QueryNode::kBool;
      } else if (v == "(") {
        lex.take();
        while (true) {
          std::string t = lex.take();
          if (t.empty() || !std::isdigit(static_cast<unsigned char>(t[0])))
            fail(errc::parse_error, "expected an integer in tuple");
          node.tuple.push_back(std::stoll(t));
          if (lex.accept(")")) break;
          if (!lex.accept(",")) fail(errc::parse_error, "expected ',' or ')' in tuple");
        }
        node.value_kind = QueryNode::kTuple;
      } else if (!v.empty() && std::isdigit(static_cast<unsigned char>(v[0]))) {
        lex.take();
        node.number = std::stoll(v);
        node.value_kind = QueryNode::kNumber;
      } else {
        fail(errc::parse_error, "expected a value after comparison in query");
      }
      break;
    }
  }

  const bool is_numeric = node.field == "n" || node.field == "b2" || node.field == "aut_order";
  const bool is_tuple = node.field == "mv" || node.field == "chi_roots";
  if (node.cmp == QueryNode::kTruthy) {
    if (is_numeric || is_tuple)
      fail(errc::parse_error, "field '" + node.field + "' needs an explicit comparison");
  } else if (is_numeric) {
    if (node.value_kind != QueryNode::kNumber)
      fail(errc::parse_error, "field '" + node.field + "' compares against an integer");
  } else if (is_tuple) {
    if (node.value_kind != QueryNode::kTuple || (node.cmp != QueryNode::kEq && node.cmp != QueryNode::kNe))
      fail(errc::parse_error, "field '" + node.field + "' supports = and != against a tuple");
  } else {
    if (node.value_kind == QueryNode::kTuple || node.value_kind == QueryNode::kNumber ||
        (node.cmp != QueryNode::kEq && node.cmp != QueryNode::kNe))
      fail(errc::parse_error, "field '" + node.field + "' is boolean");
  }
  return node;
}

inline QueryNode parse_term(QueryLexer& lex) {
  QueryNode node = parse_factor(lex);
  while (lex.accept("and")) {
    QueryNode parent;
    parent.kind = QueryNode::kAnd;
    parent.kids.push_back(std::move(node));
    parent.kids.push_back(parse_factor(lex));
    node = std::move(parent);
  }
  return node;
}

inline QueryNode parse_expr(QueryLexer& lex) {
  QueryNode node = parse_term(lex);
  while (lex.accept("or")) {
    QueryNode parent;
    parent.kind = QueryNode::kOr;
    parent.kids.push_back(std::move(node));
    parent.kids.push_back(parse_term(lex));
    node = std::move(parent);
  }
  return node;
}

inline bool record_bool_field(const MatroidRecord& r, const std::string& field) {
  if (field == "int_split") return r.chi_roots.has_value();
  if (field == "representable") return r.representability && r.representability->any();
  if (!r.flags) return false;
  if (field == "supersolvable") return r.flags->supersolvable;
  if (field == "divisionally_free") return r.flags->divisionally_free;
  if (field == "inductively_free") return r.flags->inductively_free;
  if (field == "atom_balanced") return r.flags->atom_balanced.value_or(false);
  if (field == "coatom_balanced") return r.flags->coatom_balanced.value_or(false);
  return r.flags->strongly_balanced.value_or(false);
}

}  // namespace detail

inline QueryNode parse_query(const std::string& text) {
  detail::QueryLexer lex{text};
  QueryNode node = detail::parse_expr(lex);
  if (!lex.peek().empty()) fail(errc::parse_error, "trailing input in query: '" + lex.peek() + "'");
  return node;
}

inline bool eval_query(const QueryNode& node, const MatroidRecord& r) {
  switch (node.kind) {
    case QueryNode::kAnd:
      return eval_query(node.kids[0], r) && eval_query(node.kids[1], r);
    case QueryNode::kOr:
      return eval_query(node.kids[0], r) || eval_query(node.kids[1], r);
    case QueryNode::kNot:
      return !eval_query(node.kids[0], r);
    case QueryNode::kCompare:
      break;
  }
  const std::string& f = node.field;
  if (f == "n" || f == "b2" || f == "aut_order") {
    long long v = f == "n" ? r.n : f == "b2" ? r.b2 : static_cast<long long>(r.aut_order);
    switch (node.cmp) {
      case QueryNode::kEq: return v == node.number;
      case QueryNode::kNe: return v != node.number;
      case QueryNode::kLt: return v < node.number;
      case QueryNode::kLe: return v <= node.number;
      case QueryNode::kGt: return v > node.number;
      case QueryNode::kGe: return v >= node.number;
      case QueryNode::kTruthy: break;
    }
    return false;
  }
  if (f == "mv" || f == "chi_roots") {
    bool eq = false;
    if (f == "mv") {
      std::vector<long long> have;
      for (int k = 2; k < r.n; ++k) have.push_back(r.mv.count(k));
      std::vector<long long> want = node.tuple;
      while (!have.empty() && have.back() == 0) have.pop_back();
      while (!want.empty() && want.back() == 0) want.pop_back();
      eq = have == want;
    } else if (r.chi_roots) {
      eq = node.tuple.size() == 2 && r.chi_roots->first == node.tuple[0] &&
           r.chi_roots->second == node.tuple[1];
    }
    return node.cmp == QueryNode::kNe ? !eq : eq;
  }
  bool v = detail::record_bool_field(r, f);
  if (node.cmp == QueryNode::kTruthy) return v;
  bool eq = v == node.boolean;
  return node.cmp == QueryNode::kNe ? !eq : eq;
}

inline std::vector<const MatroidRecord*> run_query(const std::vector<MatroidRecord>& records,
                                                   const std::string& expr) {
  QueryNode node = parse_query(expr);
  std::vector<const MatroidRecord*> out;
  for (const MatroidRecord& r : records)
    if (eval_query(node, r)) out.push_back(&r);
  return out;
}

// ---- derived scans ------------------------------------------------------

// The four-stage freeness filter over the stored size-n matroids:
// integrally splitting -> representable over the battery -> thereof not
// inductively free -> thereof strongly balanced. Candidate counterexamples
// to the freeness conjecture within the battery's reach survive all stages.
struct TeraoStages {
  long long int_split = 0;
  long long representable = 0;
  long long not_inductively_free = 0;
  long long strongly_balanced = 0;
  std::vector<const MatroidRecord*> survivors;
};

inline TeraoStages terao_pipeline(const std::vector<MatroidRecord>& records, int n) {
  TeraoStages stages;
  bool any_n = false;
  for (const MatroidRecord& r : records) {
    if (r.n != n) continue;
    any_n = true;
    if (!r.chi_roots) continue;
    if (!r.classified())
      fail(errc::incomplete_classification,
           "record " + blocklist_to_string(r.blocks) + " lacks flags or representability");
    ++stages.int_split;
    if (!r.representability->any()) continue;
    ++stages.representable;
    if (r.flags->inductively_free) continue;
    ++stages.not_inductively_free;
    if (!r.flags->strongly_balanced.value_or(false)) continue;
    ++stages.strongly_balanced;
    stages.survivors.push_back(&r);
  }
  if (!any_n)
    fail(errc::incomplete_classification, "store holds no records of size " + std::to_string(n));
  return stages;
}

// Matroids of size n sharing their multiplicity vector with no other stored
// matroid of that size, among those with integrally splitting chi. Two equal
// multiplicity vectors force equal Tutte polynomials in rank 3, and equal
// multiplicity vectors also force the same splitting behaviour, so counting
// within the integrally splitting slice equals counting against every stored
// size-n matroid.
inline long long tutte_unique_within(const std::vector<MatroidRecord>& records, int n) {
  std::map<std::vector<int>, int> freq;
  bool any_n = false;
  for (const MatroidRecord& r : records) {
    if (r.n != n) continue;
    any_n = true;
    ++freq[r.mv.m];
  }
  if (!any_n)
    fail(errc::incomplete_classification, "store holds no records of size " + std::to_string(n));
  long long unique = 0;
  for (const MatroidRecord& r : records)
    if (r.n == n && r.chi_roots && freq[r.mv.m] == 1) ++unique;
  return unique;
}

struct StoreStatsRow {
  int n = 0;
  long long total = 0;
  long long int_split = 0;
  long long classified = 0;
  long long supersolvable = 0;
  long long inductively_free = 0;
  long long divisionally_free = 0;
  long long representable = 0;
};

inline std::vector<StoreStatsRow> store_stats(const std::vector<MatroidRecord>& records) {
  std::map<int, StoreStatsRow> rows;
  for (const MatroidRecord& r : records) {
    StoreStatsRow& row = rows[r.n];
    row.n = r.n;
    ++row.total;
    if (r.chi_roots) ++row.int_split;
    if (r.classified()) ++row.classified;
    if (r.flags) {
      if (r.flags->supersolvable) ++row.supersolvable;
      if (r.flags->inductively_free) ++row.inductively_free;
      if (r.flags->divisionally_free) ++row.divisionally_free;
    }
    if (r.representability && r.representability->any()) ++row.representable;
  }
  std::vector<StoreStatsRow> out;
  for (auto& [n, row] : rows) out.push_back(row);
  return out;
}

}  // namespace matroid3

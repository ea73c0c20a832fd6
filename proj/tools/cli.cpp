#include "cli.hpp"

#include <chrono>
#include <fstream>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "cspimp/encoder.hpp"
#include "cspimp/error.hpp"
#include "cspimp/groebner.hpp"
#include "cspimp/imp.hpp"
#include "cspimp/oracle.hpp"
#include "generate.hpp"

namespace cspimp::cli {

using nlohmann::json;

namespace {

LoadedInstance parse_json(const std::string& text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    throw InvalidArgument(std::string("malformed json: ") + e.what());
  }
  auto field = [](const json& obj, const char* key, const std::string& where) -> const json& {
    if (!obj.is_object() || !obj.contains(key)) throw InvalidArgument(where + ": missing field '" + key + "'");
    return obj.at(key);
  };
  auto natural = [](const json& v, const std::string& where) {
    if (!v.is_number_integer() || v.get<long long>() < 0) throw InvalidArgument(where + ": expected a natural number");
    return static_cast<std::size_t>(v.get<long long>());
  };
  LoadedInstance out;
  out.instance.num_vars = natural(field(doc, "num_vars", "document"), "num_vars");
  const json& rels = field(doc, "relations", "document");
  if (!rels.is_array()) throw InvalidArgument("relations: expected an array");
  for (std::size_t i = 0; i < rels.size(); ++i) {
    const std::string where = "relations[" + std::to_string(i) + "]";
    const json& name = field(rels[i], "name", where);
    if (!name.is_string()) throw InvalidArgument(where + ".name: expected a string");
    const std::size_t arity = natural(field(rels[i], "arity", where), where + ".arity");
    const json& tuples = field(rels[i], "tuples", where);
    if (!tuples.is_array()) throw InvalidArgument(where + ".tuples: expected an array");
    std::vector<std::vector<int>> rows;
    for (std::size_t t = 0; t < tuples.size(); ++t) {
      const std::string tw = where + ".tuples[" + std::to_string(t) + "]";
      if (!tuples[t].is_array() || tuples[t].size() != arity)
        throw InvalidArgument(tw + ": expected " + std::to_string(arity) + " entries");
      std::vector<int> row;
      for (const auto& x : tuples[t]) {
        if (!x.is_number_integer() || (x.get<int>() != 0 && x.get<int>() != 1))
          throw InvalidArgument(tw + ": entries must be 0 or 1");
        row.push_back(x.get<int>());
      }
      rows.push_back(std::move(row));
    }
    try {
      out.language.add(Relation(name.get<std::string>(), arity, rows));
    } catch (const InvalidArgument& e) {
      throw InvalidArgument(where + ": " + e.what());
    }
  }
  const json& cons = field(doc, "constraints", "document");
  if (!cons.is_array()) throw InvalidArgument("constraints: expected an array");
  for (std::size_t i = 0; i < cons.size(); ++i) {
    const std::string where = "constraints[" + std::to_string(i) + "]";
    const json& rel = field(cons[i], "relation", where);
    if (!rel.is_string()) throw InvalidArgument(where + ".relation: expected a string");
    const json& scope = field(cons[i], "scope", where);
    if (!scope.is_array()) throw InvalidArgument(where + ".scope: expected an array");
    Constraint c{rel.get<std::string>(), {}};
    const Relation* r = out.language.find(c.relation);
    if (!r) throw InvalidArgument(where + ".relation: unknown relation '" + c.relation + "'");
    if (scope.size() != r->arity())
      throw InvalidArgument(where + ".scope: arity mismatch, relation '" + c.relation + "' has arity " +
                            std::to_string(r->arity()));
    for (std::size_t j = 0; j < scope.size(); ++j) {
      const std::size_t v = natural(scope[j], where + ".scope[" + std::to_string(j) + "]");
      if (v == 0 || v > out.instance.num_vars)
        throw InvalidArgument(where + ".scope[" + std::to_string(j) + "]: variable " + std::to_string(v) +
                              " outside 1.." + std::to_string(out.instance.num_vars));
      c.scope.push_back(static_cast<Var>(v));
    }
    out.instance.constraints.push_back(std::move(c));
  }
  if (doc.contains("metadata")) out.metadata = doc.at("metadata");
  return out;
}

LoadedInstance parse_dimacs(const std::string& text) {
  gen::Generated g;
  std::istringstream in(text);
  std::string line;
  std::size_t lineno = 0;
  bool header = false;
  std::size_t declared = 0;
  std::vector<Literal> pending;
  while (std::getline(in, line)) {
    ++lineno;
    std::istringstream ls(line);
    std::string tok;
    if (!(ls >> tok) || tok == "c" || tok[0] == 'c' || tok == "%") continue;
    const std::string where = "line " + std::to_string(lineno);
    if (tok == "p") {
      std::string kind;
      long long n = -1;
      long long m = -1;
      if (header || !(ls >> kind >> n >> m) || kind != "cnf" || n < 0 || m < 0)
        throw InvalidArgument(where + ": expected a single 'p cnf <vars> <clauses>' header");
      header = true;
      g.instance.num_vars = static_cast<std::size_t>(n);
      declared = static_cast<std::size_t>(m);
      continue;
    }
    if (!header) throw InvalidArgument(where + ": clause before the 'p cnf' header");
    ls.clear();
    ls.str(line);
    long long lit = 0;
    while (ls >> lit) {
      if (lit == 0) {
        gen::add_clause(g, pending);
        pending.clear();
        continue;
      }
      const auto v = static_cast<std::size_t>(lit < 0 ? -lit : lit);
      if (v > g.instance.num_vars)
        throw InvalidArgument(where + ": literal " + std::to_string(lit) + " outside the declared variables");
      pending.push_back({static_cast<Var>(v), lit > 0});
    }
    if (!ls.eof()) throw InvalidArgument(where + ": expected integer literals");
  }
  if (!header) throw InvalidArgument("missing 'p cnf' header");
  if (!pending.empty()) gen::add_clause(g, pending);
  if (g.instance.constraints.size() != declared)
    throw InvalidArgument("header declares " + std::to_string(declared) + " clauses, found " +
                          std::to_string(g.instance.constraints.size()));
  return LoadedInstance{std::move(g.instance), std::move(g.language), json()};
}

json polys_json(const std::vector<Polynomial>& ps) {
  json out = json::array();
  for (const auto& p : ps) out.push_back(format_polynomial(p));
  return out;
}

std::string bits(const Assignment& a) {
  std::string s;
  for (auto b : a) s += b ? '1' : '0';
  return s;
}

json partials_json(const std::vector<PartialAssignment>& ps) {
  json out = json::array();
  for (const auto& p : ps) out.push_back(p.str());
  return out;
}

json transcript_json(const DivisionTranscript& t) {
  json cof = json::array();
  for (const auto& q : t.cofactors) cof.push_back({{"divisor", q.divisor}, {"cofactor", format_polynomial(q.cofactor)}});
  return {{"cofactors", cof}, {"remainder", format_polynomial(t.remainder)}};
}

json classification_json(const Classification& cls) {
  json ops = json::array();
  for (Operation op : cls.operations()) ops.push_back(to_string(op));
  json out{{"tractability", cls.str()}, {"polymorphisms", ops}};
  if (cls.hard_degree >= 0) out["hard_degree"] = cls.hard_degree;
  return out;
}

std::uint32_t max_degree(const std::vector<Polynomial>& ps) {
  std::uint32_t d = 0;
  for (const auto& p : ps) d = std::max(d, p.degree());
  return d;
}

std::vector<Var> parse_var_list(const std::string& text) {
  std::vector<Var> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (!item.empty() && (item[0] == 'x' || item[0] == 'X')) item.erase(0, 1);
    try {
      std::size_t used = 0;
      const long long v = std::stoll(item, &used);
      if (used != item.size() || v <= 0) throw std::invalid_argument(item);
      out.push_back(static_cast<Var>(v));
    } catch (const std::exception&) {
      throw InvalidArgument("bad variable '" + item + "' in list '" + text + "'");
    }
  }
  return out;
}

struct Settings {
  std::string instance_path;
  std::string format = "auto";
  std::optional<std::size_t> budget;
  std::optional<std::size_t> max_vars;
  std::uint64_t seed = 1;
};

ImpOptions imp_options(const Settings& s) {
  ImpOptions o;
  if (s.budget) {
    o.buchberger.basis_limit = *s.budget;
    o.truncated.candidate_budget = *s.budget;
  }
  if (s.max_vars) {
    o.solver.max_vars = *s.max_vars;
    o.truncated.solver.max_vars = *s.max_vars;
    o.oracle_max_vars = *s.max_vars;
  }
  return o;
}

LoadedInstance load(const Settings& s) {
  if (s.instance_path.empty()) throw InvalidArgument("an instance file is required (--instance)");
  std::optional<InstanceFormat> fmt;
  if (s.format == "json") fmt = InstanceFormat::json;
  if (s.format == "dimacs") fmt = InstanceFormat::dimacs;
  return parse_instance(s.instance_path, fmt);
}

struct BasisResult {
  GroebnerBasis basis;
  std::string method;
  std::optional<BuchbergerStats> stats;
};

/// Reduced basis of the instance ideal; strategy "auto" follows the dispatch priority.
BasisResult compute_basis(const LoadedInstance& li, const std::string& strategy, std::optional<std::uint32_t> degree,
                          const MonomialOrder& ord, const ImpOptions& opts) {
  const Classification cls = classify_language(li.language);
  const bool grlex = ord.is_default_grlex();
  BasisResult out;
  BuchbergerStats stats;
  BuchbergerOptions bo = opts.buchberger;
  bo.stats = &stats;
  auto finish = [&](GroebnerBasis gb, std::string method) {
    out.basis = autoreduce(gb);
    out.method = std::move(method);
    out.stats = stats;
    if (degree) {
      std::vector<Polynomial> kept;
      for (auto& p : out.basis.polynomials)
        if (p.degree() <= *degree) kept.push_back(std::move(p));
      out.basis.polynomials = std::move(kept);
      out.basis.truncated_at = degree;
    }
  };
  std::string s = strategy;
  if (s == "auto") {
    if (cls.tractability == Tractability::majority) {
      s = "majority";
    } else if (cls.tractability == Tractability::min || cls.tractability == Tractability::max) {
      if (degree && grlex) {
        const TwoTermsKind kind = cls.tractability == Tractability::min ? TwoTermsKind::min : TwoTermsKind::max;
        TruncatedBasis tb = truncated_basis(li.instance, li.language, kind, *degree, opts.truncated);
        out.basis = std::move(tb.basis);
        out.method = kind == TwoTermsKind::min ? "truncated-min" : "truncated-max";
        return out;
      }
      s = "twoterms";
    } else {
      s = "generic";
    }
  }
  if (s == "generic") {
    finish(buchberger(encode_generic(li.instance, li.language), ord, Strategy::generic, bo), "generic");
  } else if (s == "majority") {
    finish(buchberger(encode_majority(li.instance, li.language), ord, Strategy::majority, bo), "majority");
  } else if (s == "twoterms") {
    GeneratorSet gens = cls.has(Operation::min) ? encode_min(li.instance, li.language)
                                                : encode_max(li.instance, li.language);
    finish(buchberger(gens, ord, Strategy::twoterms, bo), "twoterms");
  } else {
    throw InvalidArgument("unknown strategy '" + strategy + "'");
  }
  return out;
}

json basis_json(const BasisResult& r) {
  json out{{"method", r.method},
           {"polynomials", polys_json(r.basis.polynomials)},
           {"size", r.basis.polynomials.size()},
           {"max_degree", max_degree(r.basis.polynomials)},
           {"reduced", r.basis.reduced}};
  if (r.basis.truncated_at) out["truncated_at"] = *r.basis.truncated_at;
  if (r.stats) {
    out["stats"] = {{"insertions", r.stats->insertions},
                    {"pairs_processed", r.stats->pairs_processed},
                    {"coprime_skips", r.stats->coprime_skips},
                    {"structured_fallbacks", r.stats->structured_fallbacks},
                    {"structure_preserved", r.stats->structure_preserved}};
  }
  return out;
}

json verdict_json(const MembershipVerdict& v, bool verified) {
  json ev{{"kind", to_string(v.evidence)}, {"verified", verified}};
  if (!v.basis.empty()) ev["basis"] = polys_json(v.basis);
  if (v.domain_stage) ev["domain_stage"] = transcript_json(*v.domain_stage);
  if (v.evidence == EvidenceKind::syntactic || v.evidence == EvidenceKind::semantic || !v.basis.empty())
    ev["transcript"] = transcript_json(v.transcript);
  if (v.derivation) ev["derivation_steps"] = v.derivation->steps.size();
  if (!v.attestations.empty()) {
    json att = json::array();
    for (const auto& a : v.attestations)
      att.push_back({{"polynomial", format_polynomial(a.polynomial)}, {"nonvanishing", partials_json(a.nonvanishing)}});
    ev["attestations"] = att;
  }
  if (!v.sparse_steps.empty()) {
    json steps = json::array();
    for (const auto& s : v.sparse_steps)
      steps.push_back({{"weight", s.weight.get_str()},
                       {"member", format_polynomial(s.member)},
                       {"nonvanishing", partials_json(s.attestation)}});
    ev["sparse_steps"] = steps;
  }
  json out{{"decision", to_string(v.decision)}, {"pipeline", to_string(v.pipeline)}, {"evidence", ev}};
  if (!v.note.empty()) out["note"] = v.note;
  if (v.witness) out["witness"] = bits(*v.witness);
  if (v.pipeline == Pipeline::sparse_min || v.pipeline == Pipeline::sparse_max || v.sparse_fallback) {
    out["pair_tests"] = v.pair_tests;
    out["single_tests"] = v.single_tests;
    out["sparse_fallback"] = v.sparse_fallback;
  }
  return out;
}

MonomialOrder order_from(const std::string& kind, const std::string& priority) {
  std::vector<Var> prio = priority.empty() ? std::vector<Var>{} : parse_var_list(priority);
  if (kind == "grlex") return MonomialOrder(OrderKind::grlex, prio);
  if (kind == "lex") return MonomialOrder(OrderKind::lex, prio);
  throw InvalidArgument("unknown order '" + kind + "'");
}

}  // namespace

LoadedInstance parse_instance_text(const std::string& text, InstanceFormat format) {
  LoadedInstance li = format == InstanceFormat::json ? parse_json(text) : parse_dimacs(text);
  li.instance.validate(li.language);
  return li;
}

LoadedInstance parse_instance(const std::string& path, std::optional<InstanceFormat> format) {
  std::ifstream in(path);
  if (!in) throw InvalidArgument("cannot read '" + path + "'");
  std::stringstream buf;
  buf << in.rdbuf();
  if (!format) {
    const bool dimacs = path.ends_with(".cnf") || path.ends_with(".dimacs");
    format = dimacs ? InstanceFormat::dimacs : InstanceFormat::json;
  }
  try {
    return parse_instance_text(buf.str(), *format);
  } catch (const InvalidArgument& e) {
    throw InvalidArgument(path + ": " + e.what());
  }
}

json instance_to_json(const CspInstance& inst, const ConstraintLanguage& lang) {
  json rels = json::array();
  for (const auto& r : lang.relations()) {
    json tuples = json::array();
    for (std::size_t i = 0; i < r.size(); ++i) tuples.push_back(r.tuple(i));
    rels.push_back({{"name", r.name()}, {"arity", r.arity()}, {"tuples", tuples}});
  }
  json cons = json::array();
  for (const auto& c : inst.constraints) cons.push_back({{"relation", c.relation}, {"scope", c.scope}});
  return {{"num_vars", inst.num_vars}, {"relations", rels}, {"constraints", cons}};
}

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Ideal membership for Boolean CSP combinatorial ideals", "cspimp"};
  app.require_subcommand(1);
  Settings s;
  app.add_option("--budget", s.budget, "Basis size limit and truncated candidate budget");
  app.add_option("--max-vars", s.max_vars, "Variable limit for exhaustive search and the oracle");
  app.add_option("--seed", s.seed, "Seed for generate");

  auto with_instance = [&](CLI::App* sub) {
    sub->add_option("-i,--instance", s.instance_path, "Instance file (json or dimacs)")->required();
    sub->add_option("--format", s.format, "json, dimacs or auto")->check(CLI::IsMember({"auto", "json", "dimacs"}));
  };

  auto* classify = app.add_subcommand("classify", "Polymorphisms and tractability of the instance language");
  with_instance(classify);

  std::optional<std::uint32_t> degree;
  std::string strategy = "auto";
  std::string order = "grlex";
  std::string priority;
  auto* groebner = app.add_subcommand("groebner", "Reduced (or degree-truncated) Groebner basis");
  with_instance(groebner);
  groebner->add_option("--degree", degree, "Keep members of degree <= d (truncated basis for Min/Max)");
  groebner->add_option("--strategy", strategy, "generic, majority, twoterms or auto")
      ->check(CLI::IsMember({"auto", "generic", "majority", "twoterms"}));
  groebner->add_option("--order", order, "grlex or lex")->check(CLI::IsMember({"grlex", "lex"}));
  groebner->add_option("--priority", priority, "Variable priority, e.g. 3,1,2");

  std::string poly_text;
  bool sparse = false;
  auto* imp = app.add_subcommand("imp", "Decide whether a polynomial lies in the combinatorial ideal");
  with_instance(imp);
  imp->add_option("--poly", poly_text, "Polynomial, e.g. \"x1*x2 - x1\"")->required();
  imp->add_flag("--sparse", sparse, "Use the pairing algorithm (Min or Max languages)");

  auto* oracle = app.add_subcommand("oracle", "Enumerate solutions; with --poly also test membership by evaluation");
  with_instance(oracle);
  oracle->add_option("--poly", poly_text, "Polynomial to evaluate");

  std::string elim_vars;
  auto* eliminate = app.add_subcommand("eliminate", "Elimination ideal of the listed variables");
  with_instance(eliminate);
  eliminate->add_option("--vars", elim_vars, "Variables to eliminate, e.g. 1,3")->required();

  auto* reduce_cmd = app.add_subcommand("reduce", "Normal form of a polynomial modulo the reduced basis");
  with_instance(reduce_cmd);
  reduce_cmd->add_option("--poly", poly_text, "Polynomial")->required();

  std::string family = "2sat";
  std::size_t gen_n = 6;
  std::size_t gen_m = 8;
  std::size_t gen_width = 3;
  auto* generate = app.add_subcommand("generate", "Emit a random instance as json");
  generate->add_option("--family", family, "2sat, horn, dualhorn or chain")
      ->check(CLI::IsMember({"2sat", "horn", "dualhorn", "chain"}));
  generate->add_option("-n,--vars", gen_n, "Number of variables");
  generate->add_option("-m,--clauses", gen_m, "Number of clauses");
  generate->add_option("--width", gen_width, "Maximum clause width for horn and dualhorn");

  std::vector<std::string> args(argv + 1, argv + argc);
  std::reverse(args.begin(), args.end());
  try {
    app.parse(args);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return 0;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return 0;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n";
    return 1;
  }

  const auto start = std::chrono::steady_clock::now();
  json report{{"schema", report_schema}};
  json command{{"argv", json::array()}};
  for (int i = 1; i < argc; ++i) command["argv"].push_back(argv[i]);
  try {
    const ImpOptions opts = imp_options(s);
    if (*generate) {
      std::mt19937_64 rng(s.seed);
      gen::Generated g;
      if (family == "chain") {
        g = gen::degree_chain(gen_n);
      } else {
        const ClauseShape shape = family == "2sat"   ? ClauseShape::width2
                                  : family == "horn" ? ClauseShape::horn
                                                     : ClauseShape::dualhorn;
        g = gen::random_clauses(gen_n, gen_m, shape, gen_width, rng);
      }
      json doc = instance_to_json(g.instance, g.language);
      doc["metadata"] = {{"family", family}, {"seed", s.seed}};
      out << doc.dump(2) << "\n";
      return 0;
    }
    const LoadedInstance li = load(s);
    const Classification cls = classify_language(li.language);
    report["instance"] = {{"num_vars", li.instance.num_vars}, {"constraints", li.instance.constraints.size()}};
    report["classification"] = classification_json(cls);
    if (*classify) {
      command["name"] = "classify";
    } else if (*groebner) {
      command["name"] = "groebner";
      report["basis"] = basis_json(compute_basis(li, strategy, degree, order_from(order, priority), opts));
    } else if (*imp) {
      command["name"] = "imp";
      ImpQuery q{li.instance, li.language, parse_polynomial(poly_text), std::nullopt};
      MembershipVerdict v;
      if (sparse) {
        const bool min = cls.has(Operation::min);
        if (!min && !cls.has(Operation::max)) throw UnsupportedClass("--sparse needs a Min- or Max-closed language");
        v = decide_sparse(q, min ? TwoTermsKind::min : TwoTermsKind::max, opts);
      } else {
        v = decide(q, opts);
      }
      report["verdict"] = verdict_json(v, verify_evidence(v, q, opts));
    } else if (*oracle) {
      command["name"] = "oracle";
      SolutionSet sols = enumerate_solutions(li.instance, li.language, opts.oracle_max_vars);
      json pts = json::array();
      for (const auto& p : sols.points) pts.push_back(bits(p));
      report["solutions"] = {{"count", sols.points.size()}, {"points", pts}};
      if (!poly_text.empty()) {
        const bool in = membership_by_evaluation(sols, parse_polynomial(poly_text));
        report["verdict"] = {{"decision", in ? "In" : "NotIn"}, {"pipeline", "oracle"}};
      }
    } else if (*eliminate) {
      command["name"] = "eliminate";
      std::vector<Var> prio = parse_var_list(elim_vars);
      const std::size_t m = prio.size();
      for (Var v = 1; v <= li.instance.num_vars; ++v)
        if (std::find(prio.begin(), prio.end(), v) == prio.end()) prio.push_back(v);
      for (Var v : prio)
        if (v > li.instance.num_vars) throw InvalidArgument("variable x" + std::to_string(v) + " outside the instance");
      GeneratorSet elim = elimination_ideal(encode_generic(li.instance, li.language), m, prio, opts.buchberger);
      report["elimination"] = {{"eliminated", std::vector<Var>(prio.begin(), prio.begin() + m)},
                               {"polynomials", polys_json(elim.polynomials)}};
    } else if (*reduce_cmd) {
      command["name"] = "reduce";
      const Polynomial f = parse_polynomial(poly_text);
      if (f.max_var() > li.instance.num_vars) throw InvalidArgument("polynomial uses variables outside the instance");
      std::optional<std::uint32_t> d;
      if (cls.tractability == Tractability::min || cls.tractability == Tractability::max)
        d = std::max<std::uint32_t>(f.degree(), 2);
      BasisResult b = compute_basis(li, "auto", d, MonomialOrder::grlex(), opts);
      DivisionTranscript t = divide(f, b.basis.polynomials, MonomialOrder::grlex());
      report["basis"] = basis_json(b);
      report["reduction"] = transcript_json(t);
    }
  } catch (const BudgetExceeded& e) {
    err << "error: " << e.what() << "\n";
    return 2;
  } catch (const UnsupportedClass& e) {
    err << "error: " << e.what() << "\n";
    return 3;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return 1;
  }
  report["command"] = command;
  const double ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
  report["timings"] = {{"total_ms", ms}};
  out << report.dump(2) << "\n";
  return 0;
}

}  // namespace cspimp::cli

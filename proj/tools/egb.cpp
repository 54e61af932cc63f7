#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>

#include "CLI11.hpp"
#include "egb/interp.hpp"
#include "egb/rewrite.hpp"
#include "egb/saturate.hpp"
#include "egb/schema.hpp"
#include "egb/serialize.hpp"
#include "egb/text.hpp"

namespace {

using namespace egb;

struct DomainError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct Globals {
  bool quiet = false;
  bool trace = false;
};

Globals globals;

bool is_json_path(const std::string& path) {
  auto ext = std::filesystem::path(path).extension().string();
  return ext == ".json" || ext == ".egjson";
}

struct Loaded {
  ExtendedCospan graph;
  Signature signature;
  bool has_signature = false;
};

Loaded load_graph(const std::string& path, const std::string& term_name) {
  Loaded l;
  if (is_json_path(path)) {
    Signature sig;
    l.graph = load_cospan(path, &sig);
    l.signature = sig;
    l.has_signature = !sig.base_types().empty();
    return l;
  }
  Document doc = load_document(path);
  const Term* t = nullptr;
  if (!term_name.empty()) {
    t = doc.find_term(term_name);
    if (!t) throw DomainError("no term named '" + term_name + "' in " + path);
  } else if (const Term* m = doc.find_term("main")) {
    t = m;
  } else if (!doc.terms.empty()) {
    t = &doc.terms.front().second;
  } else {
    throw DomainError(path + " declares no term");
  }
  l.graph = interpret(*t);
  l.signature = doc.signature;
  l.has_signature = true;
  return l;
}

void emit(const std::string& text, const std::string& out_path) {
  if (out_path.empty() || out_path == "-") {
    std::cout << text;
    return;
  }
  std::ofstream f(out_path, std::ios::binary);
  if (!f) throw DomainError("cannot write " + out_path);
  f << text;
}

std::string render(const Loaded& l, const ExtendedCospan& c, const std::string& format) {
  if (format == "dot") return to_dot(renumbered(c));
  return to_json(c, l.has_signature ? &l.signature : nullptr);
}

void note(const std::string& msg) {
  if (!globals.quiet) std::cerr << msg << "\n";
}

void trace(const std::string& msg) {
  if (globals.trace) std::cerr << "trace: " << msg << "\n";
}

int report_violations(const std::string& what, const std::vector<Violation>& vs) {
  if (vs.empty()) return 0;
  for (const auto& v : vs) std::cerr << what << ": " << to_string(v) << "\n";
  return 1;
}

int cmd_check(const std::string& path, Signature& sig) {
  if (is_json_path(path)) {
    ExtendedCospan c = load_cospan(path);
    int rc = report_violations("validate", validate(c.carrier));
    rc |= report_violations("mda", is_mda(c));
    rc |= report_violations("well-typed", is_well_typed(c));
    if (rc == 0 && !globals.quiet) std::cout << "ok: " << c.carrier.element_count() << " elements\n";
    return rc;
  }
  Document doc = load_document(path, sig);
  sig = doc.signature;
  for (const auto& [name, t] : doc.terms) {
    ExtendedCospan c = interpret(t);
    auto vs = validate(c.carrier);
    for (auto& v : is_mda(c)) vs.push_back(v);
    for (auto& v : is_well_typed(c)) vs.push_back(v);
    if (report_violations("term " + name, vs)) return 1;
  }
  if (!globals.quiet)
    std::cout << "ok: " << doc.signature.base_types().size() << " types, " << doc.signature.ops().size() << " ops, "
              << doc.terms.size() << " terms, " << doc.rules.size() << " rules\n";
  return 0;
}

std::vector<RewriteRule> load_rules(const std::string& path, const Signature& sig) {
  Document doc = load_document(path, sig);
  std::vector<RewriteRule> out;
  for (const auto& r : doc.rules)
    for (auto& rr : interpret_rule(r)) out.push_back(std::move(rr));
  return out;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"e-graphs with bindings: interpret, rewrite and saturate string-diagram terms"};
  app.require_subcommand(1);
  app.fallthrough();
  app.add_flag("--quiet", globals.quiet, "Suppress informational output");
  app.add_flag("--trace", globals.trace, "Log rewrite steps to stderr");

  std::string input, input2, term_name, format = "json", out_path, rule_name, rules_path, report_path;
  std::size_t match_index = 0, max_iters = 16, max_elems = 2000;
  std::vector<std::string> schema_names;

  auto* check = app.add_subcommand("check", "Validate a signature/term/rule file or a cospan JSON file");
  std::vector<std::string> check_files;
  check->add_option("files", check_files, "Input files; declarations carry over to later files")
      ->required()
      ->check(CLI::ExistingFile);

  auto* interp = app.add_subcommand("interpret", "Interpret a term as an extended cospan");
  interp->add_option("termfile", input, "Term file")->required()->check(CLI::ExistingFile);
  interp->add_option("--term", term_name, "Term name (default: main, else the first)");
  interp->add_option("--out", format, "Output format")->check(CLI::IsMember({"json", "dot"}));
  interp->add_option("-o,--output", out_path, "Output path (default stdout)");

  auto* apply = app.add_subcommand("apply", "Apply one rule or schema at one match");
  apply->add_option("graph", input, "Term file or cospan JSON")->required()->check(CLI::ExistingFile);
  apply->add_option("--rule", rule_name, "Rule name or schema name")->required();
  apply->add_option("--rules", rules_path, "Rule file")->check(CLI::ExistingFile);
  apply->add_option("--match", match_index, "Match index in deterministic order");
  apply->add_option("--term", term_name, "Term name");
  apply->add_option("--out", format, "Output format")->check(CLI::IsMember({"json", "dot"}));
  apply->add_option("-o,--output", out_path, "Output path");

  auto* sat = app.add_subcommand("saturate", "Run equality saturation");
  sat->add_option("termfile", input, "Term file or cospan JSON")->required()->check(CLI::ExistingFile);
  sat->add_option("--rules", rules_path, "Rule file")->check(CLI::ExistingFile);
  sat->add_option("--schema", schema_names, "Lifted schemas (beta, eta, lambda-nat)");
  sat->add_option("--max-iters", max_iters, "Iteration limit")->check(CLI::PositiveNumber);
  sat->add_option("--max-elems", max_elems, "Element limit")->check(CLI::PositiveNumber);
  sat->add_option("--term", term_name, "Term name");
  sat->add_option("--out", format, "Output format")->check(CLI::IsMember({"json", "dot"}));
  sat->add_option("-o,--output", out_path, "Output path");
  sat->add_option("--report", report_path, "Write the saturation report as JSON");

  auto* iso = app.add_subcommand("iso", "Compare two cospans up to isomorphism");
  iso->add_option("a", input, "First cospan")->required()->check(CLI::ExistingFile);
  iso->add_option("b", input2, "Second cospan")->required()->check(CLI::ExistingFile);

  auto* exp = app.add_subcommand("export", "Convert a cospan JSON to canonical JSON or DOT");
  exp->add_option("file", input, "Cospan JSON")->required()->check(CLI::ExistingFile);
  exp->add_option("--out", format, "Output format")->check(CLI::IsMember({"json", "dot"}));
  exp->add_option("-o,--output", out_path, "Output path");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int rc = app.exit(e);
    return rc == 0 ? 0 : 2;
  }

  try {
    if (*check) {
      Signature sig;
      for (const auto& f : check_files)
        if (int rc = cmd_check(f, sig)) return rc;
      return 0;
    }

    if (*interp) {
      Loaded l = load_graph(input, term_name);
      emit(render(l, l.graph, format), out_path);
      return 0;
    }

    if (*apply) {
      Loaded l = load_graph(input, term_name);
      ExtendedCospan result;
      if (auto schema = schema_from_string(rule_name)) {
        auto sites = find_schema_sites(l.graph, *schema);
        if (match_index >= sites.size())
          throw DomainError(rule_name + ": " + std::to_string(sites.size()) + " sites, no site " +
                            std::to_string(match_index));
        auto inst = instantiate_schema(*schema, l.graph, sites[match_index]);
        auto out = apply_rewrite(l.graph, inst.rule, inst.match);
        if (!out.result) throw DomainError("no boundary complement (clause " + std::to_string(out.failed_clause) + "): " + out.reason);
        trace("apply " + rule_name + " anchor=" + to_string(sites[match_index]) + " case=" + to_string(out.kind));
        result = std::move(*out.result);
      } else {
        std::string path = rules_path.empty() ? input : rules_path;
        if (is_json_path(path)) throw DomainError("rules must come from a rule file (--rules)");
        auto rules = load_rules(path, l.signature);
        auto it = std::find_if(rules.begin(), rules.end(), [&](const auto& r) { return r.name == rule_name; });
        if (it == rules.end()) throw DomainError("no rule named '" + rule_name + "'");
        auto matches = find_convex_matches(*it, l.graph);
        if (match_index >= matches.size())
          throw DomainError(rule_name + ": " + std::to_string(matches.size()) + " matches, no match " +
                            std::to_string(match_index));
        auto out = apply_rewrite(l.graph, *it, matches[match_index]);
        if (!out.result) throw DomainError("no boundary complement (clause " + std::to_string(out.failed_clause) + "): " + out.reason);
        trace("apply " + rule_name + " match=" + std::to_string(match_index) + " case=" + to_string(out.kind));
        result = std::move(*out.result);
      }
      emit(render(l, result, format), out_path);
      return 0;
    }

    if (*sat) {
      Loaded l = load_graph(input, term_name);
      SaturationConfig cfg;
      cfg.max_iterations = max_iters;
      cfg.max_elements = max_elems;
      if (!rules_path.empty()) cfg.rules = load_rules(rules_path, l.signature);
      for (const auto& n : schema_names) {
        auto s = schema_from_string(n);
        if (!s) throw CLI::ValidationError("--schema", "unknown schema '" + n + "'");
        cfg.schemas.push_back(*s);
      }
      auto res = saturate(l.graph, cfg);
      for (const auto& e : res.report.trace)
        trace("iteration " + std::to_string(e.iteration) + " " + e.rule + " case=" + to_string(e.kind) +
              " elements=" + std::to_string(e.elements));
      note("saturate: " + std::to_string(res.report.iterations) + " iterations, " +
           std::to_string(res.report.applications) + " applications, " +
           (res.report.fixpoint ? std::string("fixpoint") : "stopped at the " + res.report.limit + " limit"));
      emit(render(l, res.graph, format), out_path);
      if (!report_path.empty()) emit(to_json(res.report), report_path);
      return 0;
    }

    if (*iso) {
      Loaded a = load_graph(input, "");
      Loaded b = load_graph(input2, "");
      bool same = find_cospan_iso(a.graph, b.graph).has_value();
      std::cout << (same ? "isomorphic" : "not isomorphic") << "\n";
      return same ? 0 : 1;
    }

    if (*exp) {
      if (!is_json_path(input)) throw DomainError("export reads cospan JSON; DOT is export-only");
      Loaded l = load_graph(input, "");
      emit(render(l, l.graph, format), out_path);
      return 0;
    }
  } catch (const CLI::ValidationError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 2;
}

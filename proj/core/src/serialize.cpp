#include "egb/serialize.hpp"

#include <fstream>
#include <functional>
#include <map>
#include <regex>
#include <sstream>

#include "egb/text.hpp"
#include "json.hpp"

namespace egb {

using nlohmann::json;

namespace {

json interface_json(const Interface& itf) {
  json in = json::array();
  for (VertexId v : itf.internal) in.push_back(v.value);
  return json{{"internal", in}, {"external", itf.external}};
}

json signature_json(const Signature& sig) {
  json ops = json::array();
  for (const auto& op : sig.ops()) {
    json in = json::array(), out = json::array();
    for (const auto& t : op.inputs) in.push_back(to_string(t));
    for (const auto& t : op.outputs) out.push_back(to_string(t));
    ops.push_back({{"name", op.name}, {"inputs", in}, {"outputs", out}});
  }
  return json{{"types", sig.base_types()}, {"ops", ops}};
}

std::string kind_name(ParentKind k) { return k == ParentKind::EParent ? "e" : "lambda"; }

ElemRef parse_ref(const std::string& s) {
  if (s.size() < 2 || (s[0] != 'v' && s[0] != 'e')) throw FormatError("bad element reference '" + s + "'");
  auto id = static_cast<std::uint32_t>(std::stoul(s.substr(1)));
  return s[0] == 'v' ? ElemRef::of(VertexId{id}) : ElemRef::of(EdgeId{id});
}

// Base names are collected from the label itself when no signature is given.
VertexType parse_type(const std::string& text, const Signature* sig) {
  Signature local;
  if (sig) local = *sig;
  static const std::regex ident("[A-Za-z_][A-Za-z0-9_']*");
  for (auto it = std::sregex_iterator(text.begin(), text.end(), ident); it != std::sregex_iterator(); ++it) {
    std::string n = it->str();
    if (n != "I" && !local.has_base_type(n)) local.add_base_type(n);
  }
  try {
    return VertexType(parse_object(text, local));
  } catch (const std::exception& e) {
    throw FormatError("bad vertex type '" + text + "': " + e.what());
  }
}

Word parse_types(const json& arr, const Signature* sig) {
  Word w;
  for (const auto& t : arr) w.push_back(parse_type(t.get<std::string>(), sig));
  return w;
}

Interface read_interface(const json& j) {
  Interface itf;
  for (const auto& v : j.at("internal")) itf.internal.push_back(VertexId{v.get<std::uint32_t>()});
  for (const auto& p : j.at("external")) itf.external.push_back(p.get<std::size_t>());
  return itf;
}

std::string dot_escape(const std::string& s) {
  std::string out;
  for (char c : s) {
    if (c == '"' || c == '\\') out += '\\';
    out += c;
  }
  return out;
}

}  // namespace

std::string to_json(const ExtendedCospan& c0, const Signature* sig, bool canonical) {
  ExtendedCospan c = canonical ? renumbered(c0) : c0;
  const auto& g = c.carrier;
  json j;
  if (sig) j["signature"] = signature_json(*sig);
  json vs = json::array();
  for (const auto& [v, t] : g.vertices()) vs.push_back({{"id", v.value}, {"type", to_string(t)}});
  j["vertices"] = vs;
  json es = json::array();
  for (const auto& [id, e] : g.edges()) {
    json src = json::array(), tgt = json::array();
    for (VertexId v : e.sources) src.push_back(v.value);
    for (VertexId v : e.targets) tgt.push_back(v.value);
    json ej{{"id", id.value}, {"kind", to_string(e.kind)}};
    if (e.kind == EdgeKind::Plain) ej["label"] = e.op.name;
    ej["sources"] = src;
    ej["targets"] = tgt;
    es.push_back(ej);
  }
  j["edges"] = es;
  json ps = json::array();
  for (const auto& [x, p] : g.parents())
    ps.push_back({{"child", to_string(x)}, {"parent", p.edge.value}, {"kind", kind_name(p.kind)}});
  j["parents"] = ps;
  std::map<std::pair<std::uint32_t, BlockId>, json> blocks;
  for (const auto& [x, b] : g.blocks()) {
    auto p = g.parent(x);
    if (!p) continue;
    auto& entry = blocks[{p->edge.value, b}];
    if (entry.is_null()) entry = json::array();
    entry.push_back(to_string(x));
  }
  json bs = json::array();
  for (const auto& [key, members] : blocks) bs.push_back({{"ebox", key.first}, {"block", key.second}, {"members", members}});
  j["blocks"] = bs;
  j["inputs"] = interface_json(c.inputs);
  j["outputs"] = interface_json(c.outputs);
  return j.dump(2) + "\n";
}

ExtendedCospan cospan_from_json(std::string_view text, Signature* sig_out) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    throw FormatError(std::string("malformed json: ") + e.what());
  }
  try {
    std::optional<Signature> sig;
    if (j.contains("signature")) {
      Signature s;
      for (const auto& t : j["signature"].at("types")) s.add_base_type(t.get<std::string>());
      for (const auto& op : j["signature"].at("ops"))
        s.add_op(OpSymbol{op.at("name").get<std::string>(), parse_types(op.at("inputs"), &s),
                          parse_types(op.at("outputs"), &s)});
      sig = s;
      if (sig_out) *sig_out = s;
    }
    const Signature* sp = sig ? &*sig : nullptr;
    ExtendedCospan c;
    auto& g = c.carrier;
    for (const auto& v : j.at("vertices"))
      g.insert_vertex(VertexId{v.at("id").get<std::uint32_t>()}, parse_type(v.at("type").get<std::string>(), sp));
    for (const auto& e : j.at("edges")) {
      Edge d;
      std::string kind = e.at("kind").get<std::string>();
      if (kind == "plain") d.kind = EdgeKind::Plain;
      else if (kind == "ebox") d.kind = EdgeKind::EBox;
      else if (kind == "lambda") d.kind = EdgeKind::LambdaBox;
      else throw FormatError("unknown edge kind '" + kind + "'");
      for (const auto& v : e.at("sources")) d.sources.push_back(VertexId{v.get<std::uint32_t>()});
      for (const auto& v : e.at("targets")) d.targets.push_back(VertexId{v.get<std::uint32_t>()});
      for (const auto* side : {&d.sources, &d.targets})
        for (VertexId v : *side)
          if (!g.has_vertex(v)) throw FormatError("edge refers to unknown vertex " + to_string(v));
      if (d.kind == EdgeKind::Plain) {
        d.op.name = e.at("label").get<std::string>();
        for (VertexId v : d.sources) d.op.inputs.push_back(g.vertex_type(v));
        for (VertexId v : d.targets) d.op.outputs.push_back(g.vertex_type(v));
        if (sp && !is_application_symbol(d.op)) {
          const OpSymbol* known = sp->find_op(d.op.name);
          if (!known || *known != d.op) throw FormatError("edge label '" + d.op.name + "' does not fit the signature");
        }
      }
      g.insert_edge(EdgeId{e.at("id").get<std::uint32_t>()}, d);
    }
    for (const auto& p : j.value("parents", json::array())) {
      ElemRef x = parse_ref(p.at("child").get<std::string>());
      EdgeId parent{p.at("parent").get<std::uint32_t>()};
      if (!g.has(x) || !g.has_edge(parent)) throw FormatError("parent entry refers to unknown elements");
      std::string k = p.at("kind").get<std::string>();
      if (k != "e" && k != "lambda") throw FormatError("unknown parent kind '" + k + "'");
      g.set_parent(x, ParentRef{parent, k == "e" ? ParentKind::EParent : ParentKind::LamParent});
    }
    for (const auto& b : j.value("blocks", json::array())) {
      BlockId id = b.at("block").get<BlockId>();
      for (const auto& m : b.at("members")) {
        ElemRef x = parse_ref(m.get<std::string>());
        if (!g.has(x)) throw FormatError("block member " + to_string(x) + " is unknown");
        g.set_block(x, id);
      }
    }
    c.inputs = read_interface(j.at("inputs"));
    c.outputs = read_interface(j.at("outputs"));
    for (const auto* itf : {&c.inputs, &c.outputs})
      for (VertexId v : itf->internal)
        if (!g.has_vertex(v)) throw FormatError("interface refers to unknown vertex " + to_string(v));
    return c;
  } catch (const json::exception& e) {
    throw FormatError(std::string("bad cospan json: ") + e.what());
  }
}

ExtendedCospan load_cospan(const std::string& path, Signature* sig) { return cospan_from_json(read_file(path), sig); }

std::string to_dot(const ExtendedCospan& c, const std::string& name) {
  const auto& g = c.carrier;
  std::map<std::optional<ParentRef>, std::map<std::optional<BlockId>, std::vector<ElemRef>>> scopes;
  for (const auto& [v, t] : g.vertices()) scopes[g.parent(v)][g.block(ElemRef::of(v))].push_back(ElemRef::of(v));
  for (const auto& [e, d] : g.edges()) scopes[g.parent(e)][g.block(ElemRef::of(e))].push_back(ElemRef::of(e));

  std::ostringstream os;
  os << "digraph \"" << dot_escape(name) << "\" {\n  compound=true;\n  rankdir=LR;\n";
  auto node = [&](ElemRef x, const std::string& indent) {
    if (x.is_vertex()) {
      os << indent << to_string(x) << " [shape=point, xlabel=\"" << dot_escape(to_string(g.vertex_type(x.vertex())))
         << "\"];\n";
      return;
    }
    const Edge& d = g.edge(x.edge());
    if (d.kind == EdgeKind::Plain)
      os << indent << to_string(x) << " [shape=box, label=\"" << dot_escape(d.op.name) << "\"];\n";
    else
      os << indent << to_string(x) << " [shape=" << (d.kind == EdgeKind::EBox ? "diamond" : "invhouse")
         << ", label=\"" << to_string(d.kind) << "\"];\n";
  };
  std::function<void(const std::optional<ParentRef>&, const std::string&)> emit;
  emit = [&](const std::optional<ParentRef>& scope, const std::string& indent) {
    auto it = scopes.find(scope);
    if (it == scopes.end()) return;
    for (const auto& [block, elems] : it->second) {
      std::string in = indent;
      if (block) {
        os << indent << "subgraph cluster_" << scope->edge.value << "_b" << *block << " {\n"
           << indent << "  label=\"block " << *block << "\";\n" << indent << "  style=dotted;\n";
        in += "  ";
      }
      for (ElemRef x : elems) {
        node(x, in);
        if (x.is_edge() && g.edge(x.edge()).kind != EdgeKind::Plain) {
          const Edge& d = g.edge(x.edge());
          os << in << "subgraph cluster_" << x.id << " {\n";
          if (d.kind == EdgeKind::EBox)
            os << in << "  style=dashed;\n";
          else
            os << in << "  style=rounded;\n";
          os << in << "  label=\"" << to_string(x) << "\";\n";
          emit(ParentRef{x.edge(), d.kind == EdgeKind::EBox ? ParentKind::EParent : ParentKind::LamParent}, in + "  ");
          os << in << "}\n";
        }
      }
      if (block) os << indent << "}\n";
    }
  };
  emit(std::nullopt, "  ");
  for (const auto& [id, d] : g.edges()) {
    for (VertexId v : d.sources) os << "  " << to_string(v) << " -> " << to_string(id) << ";\n";
    for (VertexId v : d.targets) os << "  " << to_string(id) << " -> " << to_string(v) << ";\n";
  }
  os << "}\n";
  return os.str();
}

std::string to_json(const SaturationReport& r) {
  json trace = json::array();
  for (const auto& e : r.trace) {
    json t{{"iteration", e.iteration}, {"rule", e.rule}, {"case", to_string(e.kind)},
           {"normalize_steps", e.normalize_steps}, {"elements", e.elements}};
    if (e.schema) {
      t["anchor"] = e.anchor.value;
    } else {
      json mv = json::array(), me = json::array();
      for (const auto& [a, b] : e.match.vertices) mv.push_back({a.value, b.value});
      for (const auto& [a, b] : e.match.edges) me.push_back({a.value, b.value});
      t["match"] = {{"vertices", mv}, {"edges", me}};
    }
    trace.push_back(t);
  }
  json j{{"iterations", r.iterations},
         {"applications", r.applications},
         {"skipped", r.skipped},
         {"rejected", r.rejected},
         {"initial_elements", r.initial_elements},
         {"final_elements", r.final_elements},
         {"elements_created", r.elements_created},
         {"fixpoint", r.fixpoint},
         {"limit_exceeded", r.limit_exceeded},
         {"limit", r.limit},
         {"trace", trace}};
  return j.dump(2) + "\n";
}

}  // namespace egb

#include "egb/text.hpp"

#include <cctype>
#include <fstream>
#include <sstream>

namespace egb {

namespace {

enum class Tok { Ident, Punct, End };

struct Token {
  Tok kind = Tok::End;
  std::string text;
  int line = 1;
  int col = 1;
};

class Lexer {
 public:
  explicit Lexer(std::string_view src) : src_(src) { advance(); }

  const Token& peek() const { return cur_; }

  Token next() {
    Token t = cur_;
    advance();
    return t;
  }

  bool is(const char* p) const { return cur_.kind != Tok::End && cur_.text == p; }

  bool accept(const char* p) {
    if (!is(p)) return false;
    advance();
    return true;
  }

  void expect(const char* p) {
    if (!accept(p)) fail(std::string("expected '") + p + "'");
  }

  std::string ident() {
    if (cur_.kind != Tok::Ident) fail("expected identifier");
    return next().text;
  }

  [[noreturn]] void fail(const std::string& msg) const {
    std::string got = cur_.kind == Tok::End ? "end of input" : "'" + cur_.text + "'";
    throw ParseError(cur_.line, cur_.col, msg + ", got " + got);
  }

 private:
  void skip() {
    while (pos_ < src_.size()) {
      char c = src_[pos_];
      if (c == '\n') {
        ++line_;
        col_ = 1;
        ++pos_;
      } else if (std::isspace(static_cast<unsigned char>(c))) {
        ++col_;
        ++pos_;
      } else if (c == '#' || (c == '/' && pos_ + 1 < src_.size() && src_[pos_ + 1] == '/')) {
        while (pos_ < src_.size() && src_[pos_] != '\n') ++pos_;
      } else {
        break;
      }
    }
  }

  void advance() {
    skip();
    cur_ = Token{};
    cur_.line = line_;
    cur_.col = col_;
    if (pos_ >= src_.size()) return;
    char c = src_[pos_];
    auto take = [&](std::size_t n) {
      cur_.text = std::string(src_.substr(pos_, n));
      pos_ += n;
      col_ += static_cast<int>(n);
    };
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
      std::size_t e = pos_;
      while (e < src_.size() && (std::isalnum(static_cast<unsigned char>(src_[e])) || src_[e] == '_' ||
                                 src_[e] == '\''))
        ++e;
      cur_.kind = Tok::Ident;
      take(e - pos_);
      return;
    }
    cur_.kind = Tok::Punct;
    if (src_.substr(pos_, 2) == "->" || src_.substr(pos_, 2) == "-o" || src_.substr(pos_, 2) == "=>") {
      take(2);
      return;
    }
    if (std::string_view(";*+|[](){},:=").find(c) != std::string_view::npos) {
      take(1);
      return;
    }
    throw ParseError(line_, col_, std::string("unexpected character '") + c + "'");
  }

  std::string_view src_;
  std::size_t pos_ = 0;
  int line_ = 1;
  int col_ = 1;
  Token cur_;
};

class Parser {
 public:
  Parser(Lexer& lx, const Signature& sig) : lx_(lx), sig_(sig) {}

  ObjectExpr object() {
    ObjectExpr lhs = tensor_obj();
    if (lx_.accept("-o")) return ObjectExpr::arrow(lhs, object());
    return lhs;
  }

  // Comma separated objects, flattened; stops before '|', ']' or '->'.
  Word word() {
    Word w;
    if (lx_.peek().kind == Tok::End || lx_.is("|") || lx_.is("]") || lx_.is("->") || lx_.is(";")) return w;
    do {
      auto o = object();
      auto part = word_of(o);
      w.insert(w.end(), part.begin(), part.end());
    } while (lx_.accept(","));
    return w;
  }

  Term term() {
    Term t = join_term();
    while (lx_.accept(";")) {
      if (stop_after_semicolon()) {
        pending_semicolon_ = true;
        break;
      }
      t = Term::seq(t, join_term());
    }
    return t;
  }

  // A top-level statement ends with ';'. Inside a statement the same symbol
  // means composition, so a ';' followed by a statement keyword, '=>' or end
  // of input terminates the statement instead.
  bool stop_after_semicolon() const {
    if (!top_level_) return false;
    const auto& p = lx_.peek();
    if (p.kind == Tok::End) return true;
    if (p.kind == Tok::Punct) return p.text == "=>" || p.text == ")" || p.text == "}";
    if (p.text == "type" || p.text == "op" || p.text == "term" || p.text == "rule") return true;
    return false;
  }

  bool take_pending_semicolon() {
    bool p = pending_semicolon_;
    pending_semicolon_ = false;
    return p;
  }

  void set_top_level(bool v) { top_level_ = v; }

 private:
  ObjectExpr tensor_obj() {
    std::vector<ObjectExpr> parts{atom_obj()};
    while (lx_.accept("*")) parts.push_back(atom_obj());
    return ObjectExpr::tensor(parts);
  }

  ObjectExpr atom_obj() {
    if (lx_.accept("(")) {
      auto o = object();
      lx_.expect(")");
      return o;
    }
    const auto& t = lx_.peek();
    std::string name = lx_.ident();
    if (name == "I") return ObjectExpr::unit();
    if (!sig_.has_base_type(name)) throw ParseError(t.line, t.col, "unknown type '" + name + "'");
    return ObjectExpr::base(name);
  }

  Term join_term() {
    Term t = tensor_term();
    while (lx_.accept("+")) t = Term::join(t, tensor_term());
    return t;
  }

  Term tensor_term() {
    Term t = atom_term();
    while (lx_.accept("*")) t = Term::tensor(t, atom_term());
    return t;
  }

  Term atom_term() {
    if (lx_.accept("(")) {
      bool saved = top_level_;
      top_level_ = false;
      Term t = term();
      top_level_ = saved;
      lx_.expect(")");
      return t;
    }
    Token tok = lx_.peek();
    std::string name = lx_.ident();
    if (lx_.is("[")) {
      if (name == "id") {
        lx_.expect("[");
        Word w = word();
        lx_.expect("]");
        return Term::id(w);
      }
      if (name == "sym" || name == "ev") {
        lx_.expect("[");
        Word a = word();
        lx_.expect("|");
        Word b = word();
        lx_.expect("]");
        return name == "sym" ? Term::sym(a, b) : Term::ev(a, b);
      }
      if (name == "lam") {
        lx_.expect("[");
        Word x = word();
        lx_.expect("|");
        Word a = word();
        lx_.expect("|");
        Word b = word();
        lx_.expect("]");
        lx_.expect("{");
        bool saved = top_level_;
        top_level_ = false;
        Term body = term();
        top_level_ = saved;
        lx_.expect("}");
        return Term::lambda(x, a, b, body);
      }
    }
    const OpSymbol* op = sig_.find_op(name);
    if (!op) throw ParseError(tok.line, tok.col, "unknown operation '" + name + "'");
    return Term::gen(*op);
  }

  Lexer& lx_;
  const Signature& sig_;
  bool top_level_ = false;
  bool pending_semicolon_ = false;
};

void typecheck(const Term& t, const Token& at) {
  try {
    type_of(t);
  } catch (const TypeError& e) {
    throw ParseError(at.line, at.col, std::string("type error: ") + e.what());
  }
}

void end_statement(Lexer& lx, Parser& p) {
  if (p.take_pending_semicolon()) return;
  lx.expect(";");
}

}  // namespace

const Term* Document::find_term(const std::string& name) const {
  for (const auto& [n, t] : terms)
    if (n == name) return &t;
  return nullptr;
}

const TermRule* Document::find_rule(const std::string& name) const {
  for (const auto& r : rules)
    if (r.name == name) return &r;
  return nullptr;
}

Document parse_document(std::string_view text, Signature base) {
  Document doc;
  doc.signature = std::move(base);
  Lexer lx(text);
  Parser p(lx, doc.signature);
  while (lx.peek().kind != Tok::End) {
    Token start = lx.peek();
    if (start.kind == Tok::Ident && start.text == "type") {
      lx.next();
      std::string name = lx.ident();
      if (name == "I") throw ParseError(start.line, start.col, "'I' is reserved for the unit");
      doc.signature.add_base_type(name);
      lx.expect(";");
    } else if (start.kind == Tok::Ident && start.text == "op") {
      lx.next();
      OpSymbol op;
      op.name = lx.ident();
      if (op.name == "id" || op.name == "sym" || op.name == "ev" || op.name == "lam")
        throw ParseError(start.line, start.col, "'" + op.name + "' is a reserved name");
      if (doc.signature.find_op(op.name))
        throw ParseError(start.line, start.col, "duplicate op name '" + op.name + "'");
      lx.expect(":");
      op.inputs = p.word();
      lx.expect("->");
      op.outputs = p.word();
      lx.expect(";");
      doc.signature.add_op(std::move(op));
    } else if (start.kind == Tok::Ident && start.text == "term" && lx.peek().kind == Tok::Ident) {
      lx.next();
      std::string name = lx.ident();
      lx.expect("=");
      p.set_top_level(true);
      Term t = p.term();
      p.set_top_level(false);
      end_statement(lx, p);
      typecheck(t, start);
      doc.terms.emplace_back(name, t);
    } else if (start.kind == Tok::Ident && start.text == "rule") {
      lx.next();
      TermRule r{lx.ident(), Term::id_unit(), Term::id_unit()};
      lx.expect(":");
      p.set_top_level(true);
      r.lhs = p.term();
      p.take_pending_semicolon();
      lx.expect("=>");
      r.rhs = p.term();
      p.set_top_level(false);
      end_statement(lx, p);
      typecheck(r.lhs, start);
      typecheck(r.rhs, start);
      try {
        check_rule(r);
      } catch (const TypeError& e) {
        throw ParseError(start.line, start.col, e.what());
      }
      doc.rules.push_back(std::move(r));
    } else {
      p.set_top_level(true);
      Term t = p.term();
      p.set_top_level(false);
      if (!p.take_pending_semicolon() && lx.peek().kind != Tok::End) lx.expect(";");
      typecheck(t, start);
      doc.terms.emplace_back("main", t);
    }
  }
  auto bad = validate_signature(doc.signature);
  if (!bad.empty()) throw ParseError(1, 1, bad.front().element + ": " + bad.front().message);
  return doc;
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

Document load_document(const std::string& path, Signature base) {
  return parse_document(read_file(path), std::move(base));
}

Term parse_term(std::string_view text, const Signature& sig) {
  Lexer lx(text);
  Parser p(lx, sig);
  Token start = lx.peek();
  Term t = p.term();
  if (lx.peek().kind != Tok::End) lx.fail("trailing input");
  typecheck(t, start);
  return t;
}

ObjectExpr parse_object(std::string_view text, const Signature& sig) {
  Lexer lx(text);
  Parser p(lx, sig);
  auto o = p.object();
  if (lx.peek().kind != Tok::End) lx.fail("trailing input");
  return o;
}

Word parse_word(std::string_view text, const Signature& sig) {
  Lexer lx(text);
  Parser p(lx, sig);
  auto w = p.word();
  if (lx.peek().kind != Tok::End) lx.fail("trailing input");
  return w;
}

}  // namespace egb

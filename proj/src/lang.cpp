#include "jetviber/lang.hpp"

#include <cctype>
#include <fstream>
#include <sstream>

namespace jetviber {

ParseError::ParseError(std::string source, int line, int column, const std::string& msg)
    : Error(source + ":" + std::to_string(line) + ":" + std::to_string(column) + ": " + msg),
      source_(std::move(source)),
      line_(line),
      column_(column),
      message_(msg) {}

// ---------------------------------------------------------------- Session

Session::Session() : ctx_(std::make_shared<Context>()) {}

const EquationModel& Session::equation() const {
  if (!equation_) throw Error("session declares no equation");
  return *equation_;
}

void Session::set_equation(EquationModel eq) { equation_.emplace(std::move(eq)); }

const NamedExpression* Session::find(const std::string& name) const {
  auto it = index_.find(name);
  return it == index_.end() ? nullptr : &named_[it->second];
}

void Session::add_named(NamedExpression e) {
  if (index_.count(e.name) || ctx_->is_declared(e.name)) throw Error("duplicate declaration of '" + e.name + "'");
  index_[e.name] = named_.size();
  named_.push_back(std::move(e));
}

std::vector<std::string> Session::bivector_names() const {
  std::vector<std::string> r;
  for (const auto& n : named_)
    if (n.bivector) r.push_back(n.name);
  return r;
}

Bivector Session::bivector(const std::string& name) const {
  const NamedExpression* e = find(name);
  if (!e || !e->bivector) throw Error("unknown bivector '" + name + "'");
  return Bivector(name, e->value);
}

const Instantiation* Session::find_instantiation(const std::string& label) const {
  for (const auto& i : instantiations_)
    if (i.label == label) return &i;
  return nullptr;
}

const Catalog* Session::find_catalog(const std::string& name) const {
  for (const auto& c : catalogs_)
    if (c.name == name) return &c;
  return nullptr;
}

// ------------------------------------------------------------------ Lexer

namespace {

struct Token {
  enum class Type { Ident, Number, String, Punct, End };
  Type type = Type::End;
  std::string text;
  int line = 1;
  int col = 1;
  std::size_t offset = 0;
};

std::vector<Token> tokenize(std::string_view s, const std::string& source) {
  std::vector<Token> out;
  int line = 1, col = 1;
  std::size_t i = 0;
  auto advance = [&]() {
    const unsigned char ch = static_cast<unsigned char>(s[i]);
    ++i;
    if (ch == '\n') {
      ++line;
      col = 1;
    } else if ((ch & 0xC0) != 0x80) {
      ++col;
    }
  };
  while (i < s.size()) {
    const char c = s[i];
    if (c == '#') {
      while (i < s.size() && s[i] != '\n') advance();
      continue;
    }
    if (std::isspace(static_cast<unsigned char>(c))) {
      advance();
      continue;
    }
    Token t;
    t.line = line;
    t.col = col;
    t.offset = i;
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
      t.type = Token::Type::Ident;
      while (i < s.size() && (std::isalnum(static_cast<unsigned char>(s[i])) || s[i] == '_' || s[i] == '\'')) {
        t.text += s[i];
        advance();
      }
    } else if (std::isdigit(static_cast<unsigned char>(c))) {
      t.type = Token::Type::Number;
      while (i < s.size() && std::isdigit(static_cast<unsigned char>(s[i]))) {
        t.text += s[i];
        advance();
      }
    } else if (c == '"') {
      t.type = Token::Type::String;
      advance();
      while (i < s.size() && s[i] != '"' && s[i] != '\n') {
        t.text += s[i];
        advance();
      }
      if (i >= s.size() || s[i] != '"') throw ParseError(source, t.line, t.col, "unterminated string");
      advance();
    } else if (std::string_view("+-*/^()[]=,;:").find(c) != std::string_view::npos) {
      t.type = Token::Type::Punct;
      t.text = std::string(1, c);
      advance();
    } else {
      throw ParseError(source, line, col, std::string("unexpected character '") + c + "'");
    }
    out.push_back(std::move(t));
  }
  Token end;
  end.type = Token::Type::End;
  end.line = line;
  end.col = col;
  end.offset = s.size();
  out.push_back(end);
  return out;
}

// ----------------------------------------------------------------- Parser

class Parser {
 public:
  Parser(Session& session, std::string_view text, std::string source)
      : session_(session), text_(text), source_(std::move(source)), toks_(tokenize(text, source_)) {}

  std::vector<std::string> statements() {
    std::vector<std::string> declared;
    while (!at_end()) statement(declared);
    return declared;
  }

  DiffPoly whole_expression() {
    DiffPoly e = expr();
    if (!at_end()) fail(peek(), "unexpected '" + peek().text + "' after expression");
    return e;
  }

  Bindings whole_bindings() {
    Bindings b = bindings();
    if (!at_end()) fail(peek(), "unexpected '" + peek().text + "' after bindings");
    return b;
  }

 private:
  Session& session_;
  std::string_view text_;
  std::string source_;
  std::vector<Token> toks_;
  std::size_t pos_ = 0;

  const Context& ctx() const { return session_.ctx(); }
  const Token& peek(std::size_t ahead = 0) const { return toks_[std::min(pos_ + ahead, toks_.size() - 1)]; }
  bool at_end() const { return peek().type == Token::Type::End; }
  const Token& next() {
    const Token& t = peek();
    if (!at_end()) ++pos_;
    return t;
  }
  [[noreturn]] void fail(const Token& t, const std::string& msg) const {
    throw ParseError(source_, t.line, t.col, msg);
  }
  bool is_punct(const char* p, std::size_t ahead = 0) const {
    const Token& t = peek(ahead);
    return t.type == Token::Type::Punct && t.text == p;
  }
  bool is_word(const char* w, std::size_t ahead = 0) const {
    const Token& t = peek(ahead);
    return t.type == Token::Type::Ident && t.text == w;
  }
  bool accept(const char* p) {
    if (!is_punct(p)) return false;
    ++pos_;
    return true;
  }
  bool accept_word(const char* w) {
    if (!is_word(w)) return false;
    ++pos_;
    return true;
  }
  void expect(const char* p) {
    if (!accept(p)) fail(peek(), std::string("expected '") + p + "'" + got());
  }
  std::string got() const {
    const Token& t = peek();
    if (t.type == Token::Type::End) return ", got end of input";
    return ", got '" + t.text + "'";
  }
  const Token& ident(const char* what = "identifier") {
    if (peek().type != Token::Type::Ident) fail(peek(), std::string("expected ") + what + got());
    return next();
  }
  int integer() {
    if (peek().type != Token::Type::Number) fail(peek(), "expected an integer" + got());
    return std::stoi(next().text);
  }
  std::string string_literal() {
    if (peek().type != Token::Type::String) fail(peek(), "expected a string" + got());
    return next().text;
  }

  // ---- expressions

  MultiIndex index_list() {
    expect("[");
    MultiIndex s;
    if (accept("]")) return s;
    do {
      const Token& t = peek();
      if (t.type != Token::Type::Ident) fail(t, "expected an independent variable" + got());
      auto v = ctx().find_indep(t.text);
      if (!v) fail(t, "'" + t.text + "' is not an independent variable");
      next();
      s.bump(static_cast<std::size_t>(*v));
    } while (accept(","));
    expect("]");
    return s;
  }

  DiffPoly expr() {
    DiffPoly e = term();
    while (true) {
      if (accept("+"))
        e += term();
      else if (accept("-"))
        e -= term();
      else
        return e;
    }
  }

  DiffPoly term() {
    DiffPoly e = unary();
    while (true) {
      if (accept("*")) {
        e = e * unary();
      } else if (is_punct("/")) {
        next();
        const Token& at = peek();
        const DiffPoly d = unary();
        auto c = d.as_constant();
        if (!c) fail(at, "division is only allowed by rational constants");
        if (*c == 0) fail(at, "division by zero");
        e *= Rational(1 / *c);
      } else {
        return e;
      }
    }
  }

  DiffPoly unary() {
    if (accept("-")) return -unary();
    if (accept("+")) return unary();
    return power();
  }

  DiffPoly power() {
    DiffPoly b = primary();
    if (accept("^")) {
      const int n = integer();
      b = pow(b, static_cast<unsigned>(n));
    }
    return b;
  }

  DiffPoly primary() {
    const Token& t = peek();
    if (t.type == Token::Type::Number) {
      next();
      return DiffPoly(Rational(Integer(t.text)));
    }
    if (accept("(")) {
      DiffPoly e = expr();
      expect(")");
      return e;
    }
    if (t.type != Token::Type::Ident) fail(t, "expected an expression" + got());
    const std::string name = t.text;
    if (name == "u" || name == "p") {
      next();
      MultiIndex s;
      if (is_punct("[")) s = index_list();
      return DiffPoly::atom(name == "u" ? Atom::u(s) : Atom::p(s));
    }
    if (name == "D" && is_punct("[", 1)) {
      next();
      const MultiIndex s = index_list();
      expect("(");
      DiffPoly e = expr();
      expect(")");
      return total_derivative(e, s, ctx());
    }
    if (name == "pd" && is_punct("(", 1)) {
      next();
      next();
      const Token& ft = ident("function symbol");
      auto f = ctx().find_function(ft.text);
      if (!f) fail(ft, "'" + ft.text + "' is not a function symbol");
      const auto arity = ctx().function(static_cast<std::size_t>(*f)).args.size();
      MultiIndex partials;
      auto position = [&]() {
        const Token& kt = peek();
        const int k = integer();
        if (k < 1 || static_cast<std::size_t>(k) > arity) fail(kt, "argument position out of range");
        partials.bump(static_cast<std::size_t>(k - 1));
      };
      while (accept(",")) {
        if (accept("(")) {
          do position();
          while (accept(","));
          expect(")");
        } else {
          position();
        }
      }
      expect(")");
      return DiffPoly::atom(Atom::function(*f, partials));
    }
    next();
    if (auto v = ctx().find_indep(name)) return DiffPoly::atom(Atom::indep(*v));
    if (auto c = ctx().find_constant(name)) return DiffPoly::atom(Atom::constant(*c));
    if (auto f = ctx().find_function(name)) return DiffPoly::atom(Atom::function(*f));
    if (const NamedExpression* n = session_.find(name)) return n->value;
    fail(t, "undeclared identifier '" + name + "'");
  }

  Atom binding_key() {
    const Token& t = peek();
    if (is_word("u") || is_word("p")) {
      const bool odd = t.text == "p";
      next();
      MultiIndex s;
      if (is_punct("[")) s = index_list();
      return odd ? Atom::p(s) : Atom::u(s);
    }
    const Token& n = ident("symbol to instantiate");
    if (auto f = ctx().find_function(n.text)) return Atom::function(*f);
    if (auto c = ctx().find_constant(n.text)) return Atom::constant(*c);
    if (auto v = ctx().find_indep(n.text)) return Atom::indep(*v);
    fail(n, "cannot instantiate '" + n.text + "'");
  }

  Bindings bindings() {
    Bindings b;
    do {
      const Atom key = binding_key();
      expect("=");
      b.emplace_back(key, expr());
    } while (accept(","));
    return b;
  }

  // ---- statements

  std::string statement_text(std::size_t start_tok) const {
    const std::size_t a = toks_[start_tok].offset;
    const std::size_t b = peek().offset;
    std::string s(text_.substr(a, b > a ? b - a : 0));
    std::string out;
    bool space = false;
    for (char c : s) {
      if (std::isspace(static_cast<unsigned char>(c))) {
        space = true;
        continue;
      }
      if (space && !out.empty()) out += ' ';
      space = false;
      out += c;
    }
    return out;
  }

  void end_statement() { expect(";"); }

  void statement(std::vector<std::string>& declared) {
    const std::size_t start = pos_;
    const Token& kw = ident("statement keyword");
    const std::string& k = kw.text;
    try {
      if (k == "indep") {
        do session_.mutable_ctx().add_indep(ident("variable name").text);
        while (peek().type == Token::Type::Ident);
        end_statement();
      } else if (k == "constant") {
        do session_.mutable_ctx().add_constant(ident("constant name").text);
        while (peek().type == Token::Type::Ident);
        end_statement();
      } else if (k == "function") {
        function_decl();
      } else if (k == "equation") {
        equation_decl(kw);
      } else if (k == "bivector" || k == "let") {
        const Token& n = ident("name");
        expect("=");
        const Token& at = peek();
        DiffPoly v = expr();
        end_statement();
        if (k == "bivector") {
          for (const auto& [m, c] : v)
            if (m.p_degree() != 1) fail(at, "bivector expression must be linear in p");
          declared.push_back(n.text);
        }
        session_.add_named({n.text, std::move(v), k == "bivector", source_, n.line});
      } else if (k == "instantiate") {
        std::string label;
        if (peek().type == Token::Type::Ident && is_punct(":", 1)) {
          label = next().text;
          next();
        }
        const std::size_t body = pos_;
        Bindings b = bindings();
        const std::string text = statement_text(body);
        end_statement();
        if (label.empty()) label = text;
        if (session_.find_instantiation(label)) fail(kw, "duplicate instantiation '" + label + "'");
        session_.add_instantiation({label, std::move(b), text});
      } else if (k == "catalog") {
        catalog_decl();
      } else if (k == "suspect") {
        const Token& n = ident("bivector name");
        const std::string reason = string_literal();
        end_statement();
        session_.add_suspect(n.text, reason);
      } else if (k == "expect") {
        expect_decl(start);
      } else {
        fail(kw, "unknown statement '" + k + "'");
      }
    } catch (const ParseError&) {
      throw;
    } catch (const Error& e) {
      fail(kw, e.what());
    }
  }

  void function_decl() {
    const Token& n = ident("function name");
    FunctionSymbolDecl decl{n.text, {}};
    expect("(");
    if (!is_punct(")")) {
      do {
        const Token& t = peek();
        if (is_word("u")) {
          next();
          MultiIndex s;
          if (is_punct("[")) s = index_list();
          decl.args.push_back(Atom::u(s));
        } else {
          const Token& v = ident("argument");
          auto id = ctx().find_indep(v.text);
          if (!id) fail(t, "function arguments must be independent variables or u-jets");
          decl.args.push_back(Atom::indep(*id));
        }
      } while (accept(","));
    }
    expect(")");
    end_statement();
    session_.mutable_ctx().add_function(std::move(decl));
  }

  void equation_decl(const Token& kw) {
    if (session_.has_equation()) fail(kw, "a session declares exactly one equation");
    DiffPoly lhs = expr();
    expect("=");
    DiffPoly rhs = expr();
    std::optional<MultiIndex> lead;
    CotangentRelation rel = CotangentRelation::Linearization;
    if (accept_word("solve")) {
      if (!is_word("u")) fail(peek(), "expected a u-jet after 'solve'" + got());
      next();
      lead = is_punct("[") ? index_list() : MultiIndex{};
    }
    if (accept_word("cotangent")) {
      if (accept_word("adjoint"))
        rel = CotangentRelation::Adjoint;
      else if (!accept_word("linearization"))
        fail(peek(), "expected 'adjoint' or 'linearization'" + got());
    }
    end_statement();
    session_.set_equation(EquationModel(session_.context_ptr(), lhs - rhs, lead, rel));
  }

  void catalog_decl() {
    const Token& n = ident("catalog name");
    const Token& ft = peek();
    const std::string file = string_literal();
    end_statement();
    const auto path = session_.base_dir / file;
    std::ifstream in(path);
    if (!in) fail(ft, "cannot open catalog file '" + path.string() + "'");
    std::stringstream buf;
    buf << in.rdbuf();
    Catalog c{n.text, file, {}};
    const std::string text = buf.str();
    Parser sub(session_, text, path.string());
    c.entries = sub.statements();
    session_.add_catalog(std::move(c));
  }

  std::vector<std::string> names() {
    std::vector<std::string> r;
    while (peek().type == Token::Type::Ident && !is_word("under") && !is_word("above") && !is_word("contains") &&
           !is_word("min")) {
      const Token& t = next();
      if (!session_.find(t.text) || !session_.find(t.text)->bivector) fail(t, "unknown bivector '" + t.text + "'");
      r.push_back(t.text);
    }
    return r;
  }

  void under_clause(Directive& d) {
    if (accept_word("under")) {
      const Token& t = ident("instantiation label");
      if (!session_.find_instantiation(t.text)) fail(t, "unknown instantiation '" + t.text + "'");
      d.under = t.text;
    }
  }

  void expected_value(Directive& d) {
    expect("=");
    d.expected = expr();
  }

  void expect_decl(std::size_t start) {
    Directive d;
    d.source = source_;
    d.line = toks_[start].line;
    d.negated = accept_word("not");
    const Token& kt = ident("expectation kind");
    const std::string& k = kt.text;
    auto need = [&](std::size_t n) {
      if (d.names.size() != n) fail(kt, "'" + k + "' expects " + std::to_string(n) + " bivector name(s)");
    };
    if (k == "bivector") {
      d.kind = Directive::Kind::Bivector;
      d.names = names();
      if (d.names.empty()) fail(kt, "expected bivector names");
      under_clause(d);
    } else if (k == "hp" || k == "adjoint" || k == "equal" || k == "symmetry") {
      d.kind = k == "hp" ? Directive::Kind::Hp
               : k == "adjoint" ? Directive::Kind::Adjoint
               : k == "equal" ? Directive::Kind::Equal
                              : Directive::Kind::Symmetry;
      d.names = names();
      need(1);
      under_clause(d);
      if (k != "symmetry") expected_value(d);
    } else if (k == "nabla") {
      d.kind = Directive::Kind::Nabla;
      d.names = names();
      need(1);
      d.component = index_list();
      under_clause(d);
      expected_value(d);
    } else if (k == "bracket") {
      d.kind = Directive::Kind::Bracket;
      d.names = names();
      need(2);
      under_clause(d);
      if (accept_word("above")) d.above = integer();
      d.contains = accept_word("contains");
      expected_value(d);
    } else if (k == "poisson") {
      d.kind = Directive::Kind::Poisson;
      d.names = names();
      if (d.names.empty()) fail(kt, "expected bivector names");
      under_clause(d);
    } else if (k == "compatible") {
      d.kind = Directive::Kind::Compatible;
      d.names = names();
      need(2);
      under_clause(d);
    } else if (k == "catalog") {
      d.kind = Directive::Kind::Catalog;
      const Token& c = ident("catalog name");
      if (!session_.find_catalog(c.text)) fail(c, "unknown catalog '" + c.text + "'");
      d.catalog = c.text;
      under_clause(d);
      if (accept_word("min")) d.min_pass = integer();
    } else if (k == "search") {
      search_directive(d);
    } else {
      fail(kt, "unknown expectation '" + k + "'");
    }
    d.text = statement_text(start);
    end_statement();
    session_.add_directive(std::move(d));
  }

  void search_directive(Directive& d) {
    d.kind = Directive::Kind::Search;
    if (!accept_word("order")) fail(peek(), "expected 'order'" + got());
    d.max_jet_order = integer();
    if (!accept_word("vars")) fail(peek(), "expected 'vars'" + got());
    while (!is_word("degree")) {
      const Token& t = peek();
      if (is_word("u")) {
        next();
        d.vars.push_back(Atom::u(is_punct("[") ? index_list() : MultiIndex{}));
      } else {
        const Token& v = ident("coefficient variable");
        auto id = ctx().find_indep(v.text);
        if (!id) fail(t, "coefficient variables must be independent variables or u-jets");
        d.vars.push_back(Atom::indep(*id));
      }
      if (!accept(",")) break;
    }
    if (!accept_word("degree")) fail(peek(), "expected 'degree'" + got());
    d.degree = integer();
    under_clause(d);
    if (accept_word("dimension")) d.dimension = integer();
    if (!accept_word("contains")) fail(peek(), "expected 'contains'" + got());
    if (accept_word("catalog")) {
      const Token& c = ident("catalog name");
      if (!session_.find_catalog(c.text)) fail(c, "unknown catalog '" + c.text + "'");
      d.catalog = c.text;
    } else {
      d.names = names();
    }
  }
};

}  // namespace

// ------------------------------------------------------------ entry points

Session parse_session(std::string_view text, const std::string& source, const std::filesystem::path& base_dir) {
  Session s;
  s.name = std::filesystem::path(source).stem().string();
  s.base_dir = base_dir;
  parse_into(s, text, source);
  return s;
}

Session load_session(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open session file '" + path.string() + "'");
  std::stringstream buf;
  buf << in.rdbuf();
  return parse_session(buf.str(), path.string(), path.parent_path());
}

std::vector<std::string> parse_into(Session& session, std::string_view text, const std::string& source) {
  Parser p(session, text, source);
  return p.statements();
}

DiffPoly parse_expression(std::string_view text, const Session& session) {
  // The parser only reads from the session when parsing expressions.
  Parser p(const_cast<Session&>(session), text, "<expression>");
  return p.whole_expression();
}

Bindings parse_bindings(std::string_view text, const Session& session) {
  Parser p(const_cast<Session&>(session), text, "<bindings>");
  return p.whole_bindings();
}

Bindings resolve_instantiation(const std::string& label_or_bindings, const Session& session) {
  if (const Instantiation* i = session.find_instantiation(label_or_bindings)) return i->bindings;
  return parse_bindings(label_or_bindings, session);
}

// ---------------------------------------------------------------- printer

std::string print_multi_index(const MultiIndex& s, const Context& ctx) {
  std::string r = "[";
  bool first = true;
  for (std::size_t v = 0; v < kMaxIndices; ++v)
    for (int k = 0; k < s[v]; ++k) {
      if (!first) r += ',';
      first = false;
      r += v < ctx.indep_count() ? ctx.indep_name(v) : "x" + std::to_string(v);
    }
  return r + "]";
}

std::string print_atom(const Atom& a, const Context& ctx) {
  switch (a.kind) {
    case AtomKind::IndepVar:
      return ctx.indep_name(a.symbol);
    case AtomKind::Const:
      return ctx.constant_name(a.symbol);
    case AtomKind::FunDeriv: {
      const std::string& name = ctx.function(a.symbol).name;
      if (a.index.empty()) return name;
      std::string r = "pd(" + name;
      for (std::size_t k = 0; k < kMaxIndices; ++k)
        for (int j = 0; j < a.index[k]; ++j) r += "," + std::to_string(k + 1);
      return r + ")";
    }
    case AtomKind::Tag:
      return "Phi" + print_multi_index(a.index, ctx);
    case AtomKind::JetU:
      return "u" + print_multi_index(a.index, ctx);
    case AtomKind::JetP:
      return "p" + print_multi_index(a.index, ctx);
  }
  return "?";
}

std::string print_canonical(const DiffPoly& e, const Context& ctx) {
  if (e.is_zero()) return "0";
  std::string out;
  bool first = true;
  for (const auto& [m, c] : e) {
    const bool negative = c < 0;
    const Rational mag = negative ? Rational(-c) : c;
    if (first)
      out += negative ? "- " : "";
    else
      out += negative ? " - " : " + ";
    first = false;
    std::string mono;
    for (const auto& [a, n] : m.even) {
      if (!mono.empty()) mono += '*';
      mono += print_atom(a, ctx);
      if (n > 1) mono += "^" + std::to_string(n);
    }
    for (const auto& s : m.odd) {
      if (!mono.empty()) mono += '*';
      mono += "p" + print_multi_index(s, ctx);
    }
    if (mono.empty())
      out += mag.get_str();
    else if (mag == 1)
      out += mono;
    else
      out += mag.get_str() + "*" + mono;
  }
  return out;
}

}  // namespace jetviber

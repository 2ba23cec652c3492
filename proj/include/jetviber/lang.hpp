#pragma once

#include <filesystem>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "jetviber/schouten.hpp"

namespace jetviber {

class ParseError : public Error {
 public:
  ParseError(std::string source, int line, int column, const std::string& msg);
  const std::string& source() const { return source_; }
  int line() const { return line_; }
  int column() const { return column_; }
  const std::string& message() const { return message_; }

 private:
  std::string source_;
  int line_;
  int column_;
  std::string message_;
};

struct NamedExpression {
  std::string name;
  DiffPoly value;
  bool bivector = false;
  std::string source;
  int line = 0;
};

struct Instantiation {
  std::string label;
  Bindings bindings;
  std::string text;
};

struct Catalog {
  std::string name;
  std::string file;
  std::vector<std::string> entries;
};

/// An `expect ...;` statement: a machine-checkable claim about the session.
struct Directive {
  enum class Kind { Bivector, Hp, Nabla, Adjoint, Bracket, Poisson, Compatible, Equal, Symmetry, Catalog, Search };
  Kind kind = Kind::Bivector;
  bool negated = false;
  std::vector<std::string> names;
  std::optional<std::string> under;
  std::optional<int> above;
  bool contains = false;
  MultiIndex component;
  std::optional<DiffPoly> expected;
  // catalog / search
  std::string catalog;
  std::optional<int> min_pass;
  int max_jet_order = 0;
  std::vector<Atom> vars;
  int degree = 0;
  std::optional<int> dimension;

  std::string text;  // statement source, for reports
  std::string source;
  int line = 0;
};

/// A parsed session file: declarations, one equation, named expressions,
/// instantiation blocks, catalogs and expectations.
class Session {
 public:
  Session();

  const Context& ctx() const { return *ctx_; }
  Context& mutable_ctx() { return *ctx_; }
  std::shared_ptr<const Context> context_ptr() const { return ctx_; }

  bool has_equation() const { return equation_.has_value(); }
  /// Throws Error when no equation was declared.
  const EquationModel& equation() const;
  void set_equation(EquationModel eq);

  const NamedExpression* find(const std::string& name) const;
  void add_named(NamedExpression e);
  const std::vector<NamedExpression>& named() const { return named_; }
  std::vector<std::string> bivector_names() const;
  /// Throws Error if `name` is not a declared bivector.
  Bivector bivector(const std::string& name) const;

  void add_instantiation(Instantiation inst) { instantiations_.push_back(std::move(inst)); }
  const Instantiation* find_instantiation(const std::string& label) const;
  const std::vector<Instantiation>& instantiations() const { return instantiations_; }

  void add_catalog(Catalog c) { catalogs_.push_back(std::move(c)); }
  const Catalog* find_catalog(const std::string& name) const;
  const std::vector<Catalog>& catalogs() const { return catalogs_; }

  void add_suspect(const std::string& name, const std::string& reason) { suspects_[name] = reason; }
  const std::map<std::string, std::string>& suspects() const { return suspects_; }

  void add_directive(Directive d) { directives_.push_back(std::move(d)); }
  const std::vector<Directive>& directives() const { return directives_; }

  std::string name;  // e.g. file stem
  std::filesystem::path base_dir;

 private:
  std::shared_ptr<Context> ctx_;
  std::optional<EquationModel> equation_;
  std::vector<NamedExpression> named_;
  std::map<std::string, std::size_t> index_;
  std::vector<Instantiation> instantiations_;
  std::vector<Catalog> catalogs_;
  std::map<std::string, std::string> suspects_;
  std::vector<Directive> directives_;
};

/// Parses a whole session. `base_dir` resolves `catalog` file names.
Session parse_session(std::string_view text, const std::string& source = "<input>",
                      const std::filesystem::path& base_dir = {});
/// Reads and parses a session file.
Session load_session(const std::filesystem::path& path);

/// Parses more statements into an existing session; returns the names of
/// the bivectors it declared.
std::vector<std::string> parse_into(Session& session, std::string_view text, const std::string& source);

/// A single expression in the context of a session.
DiffPoly parse_expression(std::string_view text, const Session& session);

/// Comma separated `key = expr` bindings, as in an instantiate statement.
Bindings parse_bindings(std::string_view text, const Session& session);

/// Bindings for a label or, failing that, an inline binding list.
Bindings resolve_instantiation(const std::string& label_or_bindings, const Session& session);

std::string print_canonical(const DiffPoly& e, const Context& ctx);
std::string print_atom(const Atom& a, const Context& ctx);
std::string print_multi_index(const MultiIndex& s, const Context& ctx);

}  // namespace jetviber

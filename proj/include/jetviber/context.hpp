#pragma once

#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "jetviber/atom.hpp"

namespace jetviber {

/// Base of every error the engine raises.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class ParityError : public Error {
 public:
  using Error::Error;
};

/// An opaque function symbol such as h(x, u[x]).
struct FunctionSymbolDecl {
  std::string name;
  std::vector<Atom> args;  // IndepVar or JetU atoms, pairwise distinct
};

/// Symbol table shared by every expression of a session: independent
/// variables, constants and function symbols, in declaration order.
class Context {
 public:
  Context() = default;
  explicit Context(const std::vector<std::string>& indep_names);

  int add_indep(const std::string& name);
  int add_constant(const std::string& name);
  int add_function(FunctionSymbolDecl decl);

  std::size_t indep_count() const { return indep_.size(); }
  const std::string& indep_name(std::size_t id) const { return indep_.at(id); }
  const std::string& constant_name(std::size_t id) const { return constants_.at(id); }
  const FunctionSymbolDecl& function(std::size_t id) const { return functions_.at(id); }
  std::size_t function_count() const { return functions_.size(); }
  std::size_t constant_count() const { return constants_.size(); }

  std::optional<int> find_indep(const std::string& name) const;
  std::optional<int> find_constant(const std::string& name) const;
  std::optional<int> find_function(const std::string& name) const;
  bool is_declared(const std::string& name) const;

 private:
  std::vector<std::string> indep_;
  std::vector<std::string> constants_;
  std::vector<FunctionSymbolDecl> functions_;
};

}  // namespace jetviber

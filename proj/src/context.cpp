#include "jetviber/context.hpp"

#include <algorithm>

#include "jetviber/multi_index.hpp"

namespace jetviber {

long multi_binomial(const MultiIndex& sigma, const MultiIndex& rho) {
  long r = 1;
  for (std::size_t i = 0; i < kMaxIndices; ++i) {
    const int n = sigma[i];
    const int k = rho[i];
    long c = 1;
    for (int j = 1; j <= k; ++j) c = c * (n - k + j) / j;
    r *= c;
  }
  return r;
}

namespace {
void sub_index_rec(const MultiIndex& sigma, MultiIndex& cur, std::size_t var,
                   const std::function<void(const MultiIndex&)>& fn) {
  if (var == kMaxIndices) {
    fn(cur);
    return;
  }
  for (int k = 0; k <= sigma[var]; ++k) {
    cur.set(var, k);
    sub_index_rec(sigma, cur, var + 1, fn);
  }
  cur.set(var, 0);
}
}  // namespace

void for_each_sub_index(const MultiIndex& sigma, const std::function<void(const MultiIndex&)>& fn) {
  MultiIndex cur;
  sub_index_rec(sigma, cur, 0, fn);
}

Context::Context(const std::vector<std::string>& indep_names) {
  for (const auto& n : indep_names) add_indep(n);
}

int Context::add_indep(const std::string& name) {
  if (is_declared(name)) throw Error("duplicate declaration of '" + name + "'");
  if (indep_.size() >= kMaxIndices) throw Error("too many independent variables");
  indep_.push_back(name);
  return static_cast<int>(indep_.size() - 1);
}

int Context::add_constant(const std::string& name) {
  if (is_declared(name)) throw Error("duplicate declaration of '" + name + "'");
  constants_.push_back(name);
  return static_cast<int>(constants_.size() - 1);
}

int Context::add_function(FunctionSymbolDecl decl) {
  if (is_declared(decl.name)) throw Error("duplicate declaration of '" + decl.name + "'");
  if (decl.args.size() > kMaxIndices) throw Error("function '" + decl.name + "' has too many arguments");
  for (std::size_t i = 0; i < decl.args.size(); ++i) {
    const auto& a = decl.args[i];
    if (a.kind != AtomKind::IndepVar && a.kind != AtomKind::JetU)
      throw Error("function '" + decl.name + "': arguments must be independent variables or u-jets");
    for (std::size_t j = 0; j < i; ++j)
      if (decl.args[j] == a) throw Error("function '" + decl.name + "': repeated argument");
  }
  functions_.push_back(std::move(decl));
  return static_cast<int>(functions_.size() - 1);
}

namespace {
std::optional<int> find_in(const std::vector<std::string>& v, const std::string& name) {
  auto it = std::find(v.begin(), v.end(), name);
  if (it == v.end()) return std::nullopt;
  return static_cast<int>(it - v.begin());
}
}  // namespace

std::optional<int> Context::find_indep(const std::string& name) const { return find_in(indep_, name); }
std::optional<int> Context::find_constant(const std::string& name) const { return find_in(constants_, name); }
std::optional<int> Context::find_function(const std::string& name) const {
  for (std::size_t i = 0; i < functions_.size(); ++i)
    if (functions_[i].name == name) return static_cast<int>(i);
  return std::nullopt;
}
bool Context::is_declared(const std::string& name) const {
  return find_indep(name) || find_constant(name) || find_function(name);
}

}  // namespace jetviber

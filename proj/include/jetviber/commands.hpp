#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "jetviber/lang.hpp"
#include "jetviber/report.hpp"
#include "jetviber/search.hpp"

namespace jetviber {

/// An equation and bivectors with one instantiation applied.
class Instance {
 public:
  Instance(const Session& session, const std::optional<std::string>& instantiation);

  const Session& session() const { return session_; }
  const EquationModel& equation() const { return eq_; }
  const Bindings& bindings() const { return bindings_; }
  /// A declared bivector name or an ad hoc p-linear expression.
  Bivector bivector(const std::string& name_or_expr) const;
  DiffPoly apply(const DiffPoly& e) const;

 private:
  const Session& session_;
  Bindings bindings_;
  EquationModel eq_;
};

struct VerifyOptions {
  std::optional<std::string> instantiate;
};
/// One item per bivector; every declared bivector when `items` is empty.
Report cmd_verify(const Session& session, const std::vector<std::string>& items, const VerifyOptions& opt = {});

struct SchoutenOptions {
  bool poisson = false;
  std::optional<int> truncate;  // keep only terms with some |sigma| > k
  std::optional<std::string> instantiate;
};
Report cmd_schouten(const Session& session, const std::string& h1, const std::string& h2,
                    const SchoutenOptions& opt = {});

struct SearchOptions {
  int max_jet_order = -1;  // default: order of the equation
  std::vector<std::string> coeff_vars;
  int coeff_degree = 0;
  std::optional<std::filesystem::path> contains;
  std::optional<std::string> instantiate;
};
Report cmd_search(Session& session, const SearchOptions& opt);

/// Every `expect` statement of the session.
Report run_directives(const Session& session);

struct FixturesOptions {
  std::filesystem::path data_dir;
  std::vector<std::string> only;
};
/// Sessions named in data_dir/fixtures.list, each run through run_directives.
Report cmd_fixtures(const FixturesOptions& opt);

/// Atoms from a comma separated list such as "x,y,u[x,y]".
std::vector<Atom> parse_atom_list(const std::string& text, const Session& session);

}  // namespace jetviber

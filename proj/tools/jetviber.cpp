#include <iostream>

#include "CLI11.hpp"
#include "jetviber/commands.hpp"

#ifndef JETVIBER_DATA_DIR
#define JETVIBER_DATA_DIR "data"
#endif

using namespace jetviber;

namespace {

int emit(const Report& r, const std::string& format) {
  std::cout << (format == "json" ? format_json(r) : format_text(r));
  return r.exit_code();
}

int input_error(const std::string& what) {
  std::cerr << "jetviber: " << what << '\n';
  return 2;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Exact jet-space calculus for variational bivectors of scalar PDEs"};
  app.require_subcommand(1);
  std::string format = "text";
  app.add_option("--format", format, "Output format")->check(CLI::IsMember({"text", "json"}));

  std::string file;
  std::vector<std::string> items;
  std::optional<std::string> instantiate;

  auto* verify = app.add_subcommand("verify", "Check bivectors of a session file (all when none named)");
  verify->add_option("file", file, "Session file")->required();
  verify->add_option("items", items, "Bivector names or p-linear expressions");
  verify->add_option("--instantiate", instantiate, "Instantiation label or inline bindings");

  std::string h1, h2;
  bool poisson = false;
  std::optional<int> truncate;
  auto* schouten = app.add_subcommand("schouten", "Schouten bracket of two bivectors");
  schouten->add_option("file", file, "Session file")->required();
  schouten->add_option("h1", h1, "First bivector")->required();
  schouten->add_option("h2", h2, "Second bivector (default: the first)");
  schouten->add_flag("--poisson", poisson, "Fail unless the bracket vanishes");
  schouten->add_option("--truncate", truncate, "Keep only terms with a jet of order above k");
  schouten->add_option("--instantiate", instantiate, "Instantiation label or inline bindings");

  SearchOptions sopt;
  std::string coeff_vars;
  std::optional<std::string> contains;
  auto* search = app.add_subcommand("search", "Solve the determining equations on a polynomial ansatz");
  search->add_option("file", file, "Session file")->required();
  search->add_option("--max-jet-order", sopt.max_jet_order, "Highest p-jet order (default: equation order)");
  search->add_option("--coeff-vars", coeff_vars, "Coefficient variables, e.g. x,y,u[x]");
  search->add_option("--coeff-degree", sopt.coeff_degree, "Total degree of coefficients");
  search->add_option("--contains", contains, "File of bivectors that must lie in the solution span");
  search->add_option("--instantiate", instantiate, "Instantiation label or inline bindings");

  FixturesOptions fopt;
  fopt.data_dir = JETVIBER_DATA_DIR;
  auto* fixtures = app.add_subcommand("fixtures", "Run every expectation of the bundled sessions");
  fixtures->add_option("--data-dir", fopt.data_dir, "Directory with fixtures.list");
  fixtures->add_option("--only", fopt.only, "Restrict to these sessions")->delimiter(',');

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? 0 : 2;
  }

  try {
    if (*fixtures) return emit(cmd_fixtures(fopt), format);
    Session s = load_session(file);
    if (*verify) return emit(cmd_verify(s, items, {instantiate}), format);
    if (*schouten) return emit(cmd_schouten(s, h1, h2.empty() ? h1 : h2, {poisson, truncate, instantiate}), format);
    if (*search) {
      if (!coeff_vars.empty()) sopt.coeff_vars = {coeff_vars};
      if (contains) sopt.contains = *contains;
      sopt.instantiate = instantiate;
      return emit(cmd_search(s, sopt), format);
    }
  } catch (const InternalError& e) {
    std::cerr << "jetviber: internal error: " << e.what() << '\n';
    return 3;
  } catch (const Error& e) {
    return input_error(e.what());
  } catch (const std::exception& e) {
    std::cerr << "jetviber: internal error: " << e.what() << '\n';
    return 3;
  }
  return 0;
}

#ifndef WRR_CLI_HPP
#define WRR_CLI_HPP

// Command line front end. Every command reads a matrix file, writes one
// JSON document to the output stream, and exits 0 on success, 1 on a
// computation error (as a JSON error object), 2 on a usage error.

#include <CLI11.hpp>

#include <cstdint>
#include <ostream>
#include <string>
#include <vector>

#include "wrr/genericity.hpp"
#include "wrr/json_io.hpp"
#include "wrr/minima.hpp"
#include "wrr/retract.hpp"
#include "wrr/sympoint.hpp"
#include "wrr/verify.hpp"

namespace wrr {

namespace detail {

inline IMat scan_basis(const SymPoint& a) {
  const ShortVectorSet s = systole(a);
  std::vector<IVec> reps;
  for (const IVec& v : s.vectors)
    if (is_canonical(v)) reps.push_back(v);
  if (static_cast<int>(reps.size()) != a.dim())
    fail("NotGeneric", "scan needs a point with exactly 2n shortest vectors");
  std::sort(reps.begin(), reps.end(),
            [](const IVec& x, const IVec& y) { return lex_less(y, x); });
  return columns_matrix(reps, a.dim());
}

}  // namespace detail

inline int run(const std::vector<std::string>& args, std::ostream& out,
               std::ostream& err) {
  CLI::App app{"systoles, flows and perturbations on the space of unimodular lattices"};
  app.require_subcommand(1);

  std::string input;
  std::string emit;
  std::string suite;
  double radius = 0;
  double t = 1.0;
  double delta = 0.05;
  int directions = 0;
  int n = 3;
  int trials = 100;
  std::uint64_t seed = 0;
  int indent = -1;
  Json result;

  const auto add_common = [&](CLI::App* cmd, bool with_input) {
    if (with_input)
      cmd->add_option("input", input, "matrix file (first line n, then n rows)")
          ->required();
    cmd->add_option("--json-indent", indent, "pretty-print with this indent");
  };

  auto* c_systole = app.add_subcommand("systole", "shortest vectors and their length");
  add_common(c_systole, true);
  c_systole->add_option("--radius", radius,
                        "list all vectors up to this length instead");
  c_systole->callback([&] {
    const SymPoint a = read_point(input);
    if (radius > 0)
      result = Json{{"radius", radius}, {"vectors", json_of(enumerate_below(a, radius))}};
    else
      result = json_of(systole(a));
  });

  auto* c_minima = app.add_subcommand("minima", "successive minima");
  add_common(c_minima, true);
  c_minima->callback([&] { result = json_of(successive_minima(read_point(input))); });

  auto* c_flag = app.add_subcommand("flag", "minima flag and orthogonal decomposition");
  add_common(c_flag, true);
  c_flag->callback([&] { result = json_of(lambda_flag(read_point(input))); });

  auto* c_stratum = app.add_subcommand("stratum", "well-roundedness report");
  add_common(c_stratum, true);
  c_stratum->callback([&] { result = json_of(stratum(read_point(input))); });

  auto* c_retract = app.add_subcommand("retract", "flow onto the well-rounded set");
  add_common(c_retract, true);
  c_retract->add_option("--emit-endpoint", emit, "write the final point to this file");
  c_retract->callback([&] {
    const FlowPath path = retract_point(read_point(input));
    if (!emit.empty()) write_matrix_file(emit, endpoint(path).rep());
    result = json_of(path);
  });

  auto* c_phi = app.add_subcommand("phi", "expansion flow");
  add_common(c_phi, true);
  c_phi->add_option("--t", t, "flow time (default 1)");
  c_phi->add_option("--emit-endpoint", emit, "write the final point to this file");
  c_phi->callback([&] {
    std::vector<double> times{0.0};
    if (t > 0) times.push_back(t);
    const FlowPath path = phi_path(read_point(input), times);
    if (!emit.empty()) write_matrix_file(emit, endpoint(path).rep());
    result = json_of(path);
  });

  auto* c_gener = app.add_subcommand("genericize",
                                     "perturb to exactly 2n shortest vectors");
  add_common(c_gener, true);
  c_gener->add_option("--delta", delta, "perturbation bound (default 0.05)");
  c_gener->add_option("--emit-endpoint", emit, "write the perturbed point to this file");
  c_gener->callback([&] {
    const GenericizeResult g = genericize(read_point(input), delta);
    if (!emit.empty()) write_matrix_file(emit, g.point.rep());
    result = Json{{"gram", json_of(g.point.gram())}, {"plan", json_of(g.plan)}};
  });

  auto* c_scan = app.add_subcommand("scan",
                                    "radial scan of the family around a generic point");
  add_common(c_scan, true);
  c_scan->add_option("--directions", directions, "sphere directions (default 64(n-1))");
  c_scan->callback([&] {
    const SymPoint a = read_point(input);
    result = json_of(g3_scan(a, detail::scan_basis(a), {}, directions));
  });

  auto* c_verify = app.add_subcommand("verify", "seeded property suites");
  add_common(c_verify, false);
  c_verify->add_option("--suite", suite, "suite name")
      ->required()
      ->check(CLI::IsMember(suite_names()));
  c_verify->add_option("--seed", seed, "random seed (default 0)");
  c_verify->add_option("--n", n, "dimension for random points (default 3)");
  c_verify->add_option("--trials", trials, "number of trials (default 100)");
  c_verify->callback([&] {
    const SuiteResult r = run_suite(suite, seed, n, trials);
    result = Json{{"suite", r.suite}, {"pass", r.pass}, {"fail", r.fail}};
  });

  std::vector<const char*> argv;
  argv.reserve(args.size() + 1);
  argv.push_back("wrr");
  for (const std::string& a : args) argv.push_back(a.c_str());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::CallForHelp& e) {
    out << app.help();
    return 0;
  } catch (const CLI::CallForAllHelp& e) {
    out << app.help("", CLI::AppFormatMode::All);
    return 0;
  } catch (const CLI::ParseError& e) {
    err << e.what() << "\n";
    return 2;
  } catch (const Error& e) {
    result = Json{{"error", e.name()}, {"message", e.what()}};
    out << result.dump(indent) << "\n";
    return 1;
  }
  out << result.dump(indent) << "\n";
  return 0;
}

}  // namespace wrr

#endif

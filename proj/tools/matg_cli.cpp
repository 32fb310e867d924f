// matg: command-line front end for body analysis, composites and the
// transplant solver. Exit codes: 0 ok, 1 other error, 2 parse error,
// 3 unsupported descriptor, 4 internal consistency failure.

#include <filesystem>
#include <fstream>
#include <iostream>

#include <CLI11.hpp>

#include "matg/matg.hpp"

namespace {

using namespace matg;

struct Common {
  std::string output = "json";
  double tol = 1e-9;  // homogeneity defect tolerance
  double eig_tol = kEigTol;
  unsigned long long seed = 20240601;
  double node_budget = 2e6;
};

void add_common(CLI::App* cmd, Common& c) {
  cmd->add_option("--output", c.output, "json or text")->check(CLI::IsMember({"json", "text"}));
  cmd->add_option("--tol", c.tol, "relative plaquette tolerance for homogeneity");
  cmd->add_option("--eig-tol", c.eig_tol, "relative eigenvalue multiplicity tolerance");
  cmd->add_option("--seed", c.seed, "seed for every stochastic step");
  cmd->add_option("--node-budget", c.node_budget, "gauge search node budget");
}

json settings(const Common& c) {
  return {{"tol", c.tol}, {"eig_tol", c.eig_tol}, {"seed", c.seed}, {"node_budget", c.node_budget}};
}

void emit(const json& report, const std::string& output) {
  if (output == "text")
    std::cout << render_text(report);
  else
    std::cout << report.dump(2) << "\n";
}

HomogeneityOptions homogeneity_options(const Common& c) {
  HomogeneityOptions h;
  h.tol = c.tol;
  h.node_budget = static_cast<std::size_t>(c.node_budget);
  return h;
}

int run_analyze(const std::string& path, const Common& c) {
  const LoadedBody in = load_body(path);
  json report = {{"command", "analyze"}, {"inputs", json::array({input_json(in)})}, {"settings", settings(c)}};
  BodyGrid body = in.body;
  bool numeric = false;
  if (!body.all_symbolic()) {
    SolverOptions so;
    so.seed = c.seed;
    SymmetryOptions sy;
    sy.seed = c.seed + 7;
    const SymbolizeReport sr = symbolize_body(body, so, sy);
    body = sr.body;
    numeric = true;
    report["settings"]["solver"] = {{"tol", so.tol}, {"random_starts", so.random_starts}, {"max_iterations", so.max_iterations},
                                    {"samples", default_sample_count(body.dim())}, {"symmetry_tol", sy.tol},
                                    {"haar_probes", sy.haar_probes}};
    report["solver_residuals"] = sr.residuals;
  }
  const MaterialGroupoid g = build_material_groupoid(body, numeric);
  const BodyReport r = analyze_body(g, homogeneity_options(c));
  report.update(body_report_json(r, body));
  report["numeric_origin"] = numeric;
  emit(report, c.output);
  return 0;
}

int run_compose(const std::string& pa, const std::string& pb, const Common& c, const std::string& orientation,
                const std::string& svg, std::size_t probes) {
  const LoadedBody a = load_body(pa);
  const LoadedBody b = load_body(pb);
  CompositeOptions opt;
  opt.eig_tol = c.eig_tol;
  opt.orientation = orientation == "O" ? Orientation::Full : Orientation::Special;
  opt.homogeneity = homogeneity_options(c);
  const BodyGrid ba = with_orientation(a.body, opt.orientation);
  const BodyGrid bb = with_orientation(b.body, opt.orientation);
  const MaterialGroupoid ga = build_material_groupoid(ba);
  const MaterialGroupoid gb = build_material_groupoid(bb);
  const CompositeReport r = analyze_composite(ga, gb, opt);

  json report = {{"command", "compose"}, {"inputs", json::array({input_json(a), input_json(b)})}, {"settings", settings(c)}};
  report["settings"]["orientation"] = orientation_name(opt.orientation);
  report["settings"]["probes"] = probes;
  report.update(composite_json(r, ba));
  if (probes > 0) {
    Rng rng(c.seed);
    const MaterialDoubleGroupoid dg(MaterialSide{&ga}, MaterialSide{&gb}, SquarePredicate::Commuting);
    const ProbeReport p = probe_local_triviality(dg, probes, rng);
    report["composite"]["local_triviality_probes"] = {{"cup", p.cup_probes},
                                                     {"cup_open", p.cup_failures},
                                                     {"bracket", p.bracket_probes},
                                                     {"bracket_open", p.bracket_failures}};
  }
  if (!svg.empty()) {
    std::ofstream out(svg);
    if (!out) throw Error(ErrorCode::ParseError, svg + ": cannot write diagram");
    out << render_plate_svg(ba, bb, r);
    report["settings"]["svg"] = svg;
  }
  emit(report, c.output);
  return 0;
}

int run_solve(const std::string& path, std::size_t ia, std::size_t ib, std::size_t samples, double tol, const Common& c) {
  const LoadedBody in = load_body(path);
  const BodyGrid& body = in.body;
  if (ia >= body.size() || ib >= body.size()) throw Error(ErrorCode::UnknownObject, "point index outside the body");
  const auto& a = body.point(ia);
  const auto& b = body.point(ib);
  if (a.is_symbolic() || b.is_symbolic())
    throw Error(ErrorCode::UnsupportedDescriptor, "solve-iso needs numeric points with constitutive models");
  SolverOptions so;
  so.seed = c.seed;
  so.tol = tol;
  so.samples = samples;
  const TransplantSolution s = solve_transplant(a.numeric().model, b.numeric().model, so);
  json report = {{"command", "solve-iso"},
                 {"inputs", json::array({input_json(in)})},
                 {"settings",
                  {{"seed", so.seed},
                   {"tol", so.tol},
                   {"samples", samples ? samples : default_sample_count(body.dim())},
                   {"random_starts", so.random_starts},
                   {"start_spread", so.start_spread},
                   {"max_iterations", so.max_iterations},
                   {"analytic_gradient", so.analytic_gradient}}},
                 {"point_a", ia},
                 {"point_b", ib},
                 {"result", solution_json(s, so.tol)}};
  emit(report, c.output);
  return 0;
}

int run_fixtures(const std::string& dir) {
  const auto composites = composite_fixtures();
  const auto bodies = body_fixtures();
  for (const auto& f : composites) std::cout << "composite  " << f.name << "  " << f.description << "\n";
  for (const auto& f : bodies) std::cout << "body       " << f.name << "  " << f.description << "\n";
  if (dir.empty()) return 0;
  std::filesystem::create_directories(dir);
  auto write = [&](const std::string& name, const BodyGrid& body) {
    const std::filesystem::path p = std::filesystem::path(dir) / (name + ".json");
    std::ofstream out(p, std::ios::binary);
    if (!out) throw Error(ErrorCode::ParseError, p.string() + ": cannot write");
    out << emit_body(body);
  };
  for (const auto& f : composites) {
    write(f.name + "_a", f.a);
    write(f.name + "_b", f.b);
  }
  for (const auto& f : bodies) write(f.name, f.body);
  return 0;
}

int exit_code(ErrorCode code) {
  switch (code) {
    case ErrorCode::ParseError: return 2;
    case ErrorCode::UnsupportedDescriptor:
    case ErrorCode::UnsupportedPair: return 3;
    case ErrorCode::ConsistencyFailure: return 4;
    default: return 1;
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"material groupoids of bodies and binary composites"};
  app.require_subcommand(1);

  Common ca, cc, cs;
  std::string body_path;
  auto* analyze = app.add_subcommand("analyze", "uniformity and homogeneity of one body");
  analyze->add_option("body", body_path, "body description file")->required();
  add_common(analyze, ca);

  std::string path_a, path_b, orientation = "SO", svg;
  std::size_t probes = 200;
  auto* compose = app.add_subcommand("compose", "analyse the binary composite of two bodies");
  compose->add_option("body_a", path_a, "first constituent")->required();
  compose->add_option("body_b", path_b, "second constituent")->required();
  compose->add_option("--orientation", orientation, "archetype orientation: SO or O")->check(CLI::IsMember({"SO", "O"}));
  compose->add_option("--svg", svg, "write a three-panel plate diagram");
  compose->add_option("--probes", probes, "random local-triviality probes");
  add_common(compose, cc);

  std::string solve_path;
  std::size_t point_a = 0, point_b = 1, samples = 0;
  double solve_tol = 1e-8;
  auto* solve = app.add_subcommand("solve-iso", "material isomorphism between two numeric points");
  solve->add_option("body", solve_path, "body description file")->required();
  solve->add_option("--point-a", point_a, "index of the first point");
  solve->add_option("--point-b", point_b, "index of the second point");
  solve->add_option("--samples", samples, "training deformation gradients (0 = default)");
  solve->add_option("--seed", cs.seed, "solver seed");
  solve->add_option("--tol", solve_tol, "held-out RMS tolerance");
  solve->add_option("--output", cs.output, "json or text")->check(CLI::IsMember({"json", "text"}));

  std::string write_dir;
  auto* fixtures = app.add_subcommand("fixtures", "list bundled fixtures");
  fixtures->add_option("--write", write_dir, "write fixture body files into this directory");

  CLI11_PARSE(app, argc, argv);
  try {
    if (*analyze) return run_analyze(body_path, ca);
    if (*compose) return run_compose(path_a, path_b, cc, orientation, svg, probes);
    if (*solve) return run_solve(solve_path, point_a, point_b, samples, solve_tol, cs);
    if (*fixtures) return run_fixtures(write_dir);
  } catch (const Error& e) {
    std::cerr << "matg: " << e.what() << "\n";
    return exit_code(e.code());
  } catch (const std::exception& e) {
    std::cerr << "matg: " << e.what() << "\n";
    return 1;
  }
  return 0;
}

#include "geodual/cli.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <fstream>
#include <optional>
#include <random>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "geodual/dual_graph.hpp"
#include "geodual/error.hpp"
#include "geodual/structure_checks.hpp"

namespace geodual {

namespace {

using Json = nlohmann::ordered_json;

struct RunConfig {
  std::string command;
  std::string presentation_path;
  std::string current_path;
  std::string decomposition_path;
  double radius = 4.0;
  int word_bound = 4;
  double epsilon = 1e-9;
  int samples = 200;
  std::uint64_t seed = 1;
  std::string out_path;
  std::string svg_path;
  std::vector<double> p{0.0, 1.0};
  std::vector<double> q{0.0, 2.0};
  bool timing = false;
};

// Domain failures exit 1, input and output trouble exits 2.
int exit_code_for(ErrorCode c) {
  switch (c) {
    case ErrorCode::FileNotFound:
    case ErrorCode::ParseError:
    case ErrorCode::IoError:
      return 2;
    default:
      return 1;
  }
}

PlanePoint point_from(const std::vector<double>& v) {
  if (v.size() != 2) throw Error(ErrorCode::InvalidArgument, "points are given as x,y");
  return PlanePoint(Complex(v[0], v[1]));
}

Json point_json(const PlanePoint& p) { return Json::array({p.x(), p.y()}); }

Json box_json(const Box& b) {
  Json j = Json::array();
  for (const auto& c : b.corners()) j.push_back(c.angle());
  return j;
}

Json report_json(const CheckReport& r) {
  Json j;
  j["name"] = r.name;
  j["status"] = r.passed ? "pass" : "fail";
  j["checked"] = r.checked;
  j["worst"] = r.worst;
  for (const auto& [k, v] : r.figures) j["figures"][k] = v;
  j["witnesses"] = r.witnesses;
  return j;
}

Json skipped(const std::string& name, const std::string& why) {
  Json j;
  j["name"] = name;
  j["status"] = "skipped";
  j["reason"] = why;
  return j;
}

struct Context {
  const RunConfig& cfg;
  PresentationPtr group;
  GeodesicCurrent mu;
};

Context load(const RunConfig& cfg) {
  if (cfg.presentation_path.empty()) throw CLI::RequiredError("--presentation");
  if (cfg.current_path.empty()) throw CLI::RequiredError("--current");
  auto group = load_presentation(cfg.presentation_path);
  return {cfg, group, load_current(cfg.current_path, group)};
}

Json header(const Context& c) {
  Json j;
  j["tool"] = "geodual";
  j["version"] = kToolVersion;
  j["command"] = c.cfg.command;
  j["presentation"] = c.group->name;
  j["current"] = c.mu.describe();
  j["seed"] = c.cfg.seed;
  j["radius"] = c.cfg.radius;
  j["word_bound"] = c.cfg.word_bound;
  return j;
}

bool cmd_distance(const Context& c, Json& rep) {
  const PlanePoint p = point_from(c.cfg.p), q = point_from(c.cfg.q);
  rep["p"] = point_json(p);
  rep["q"] = point_json(q);
  rep["distance"] = dual_distance(c.mu, p, q);
  rep["hyperbolic_distance"] = hyp_distance(p, q);
  return true;
}

// Intersection oracle: crossing counts for atoms, trace lengths for the
// Liouville part.
double oracle_intersection(const GeodesicCurrent& mu, const GroupElement& g) {
  return intersection_with_curve(mu, g);
}

bool cmd_length_spectrum(const Context& c, Json& rep) {
  bool ok = true;
  Json rows = Json::array();
  const auto classes = conjugacy_classes(*c.group, c.cfg.word_bound);
  for (const auto& g : classes) {
    const double ell = translation_length(c.mu, g);
    const double inter = oracle_intersection(c.mu, g);
    const bool agree = std::abs(ell - inter) <= 1e-9;
    ok = ok && agree;
    Json row;
    row["word"] = g.word;
    row["length"] = ell;
    row["intersection"] = inter;
    row["trace_length"] = trace_translation_length(g.matrix);
    row["agree"] = agree;
    rows.push_back(row);
  }
  rep["classes"] = rows;
  Json powers = Json::array();
  for (const auto& g : classes) {
    if (g.word.size() > 2) continue;
    const double base = translation_length(c.mu, g);
    for (int n = 2; n <= 5; ++n) {
      std::string w;
      for (int k = 0; k < n; ++k) w += g.word;
      double ell = 0.0;
      try {
        ell = translation_length(c.mu, c.group->element(w));
      } catch (const Error& e) {
        if (e.code() != ErrorCode::BallTooLarge) throw;
        powers.push_back(Json{{"word", g.word}, {"n", n}, {"skipped", "BallTooLarge"}});
        continue;
      }
      const bool agree = std::abs(ell - n * base) <= 1e-9 * n;
      ok = ok && agree;
      powers.push_back(Json{{"word", g.word}, {"n", n}, {"length", ell}, {"n_times_base", n * base}, {"agree", agree}});
    }
  }
  rep["homogeneity"] = powers;
  return ok;
}

bool cmd_delta(const Context& c, Json& rep) {
  Json table = Json::array();
  std::optional<DeltaCertificate> last;
  std::vector<double> radii;
  if (c.mu.has_atoms()) {
    for (double r = 2.0; r < c.cfg.radius; r += 1.0) radii.push_back(r);
  }
  radii.push_back(c.cfg.radius);
  for (double r : radii) {
    DeltaSearchOptions opt;
    opt.radius = r;
    const DeltaCertificate cert = delta_lower_bound_boxes(c.mu, opt);
    Json row;
    row["radius"] = r;
    row["value"] = cert.value;
    row["recomputed"] = std::isnan(cert.recomputed) ? Json(nullptr) : Json(cert.recomputed);
    row["method"] = to_string(cert.method);
    row["chords"] = cert.chords;
    table.push_back(row);
    last = cert;
  }
  rep["convergence"] = table;
  rep["delta_lower_bound"] = last->value;
  rep["witness_box"] = box_json(last->best_box);
  rep["method"] = to_string(last->method);
  return true;
}

bool cmd_dual_graph(const Context& c, Json& rep) {
  const Arrangement arr = build_arrangement(c.mu, c.cfg.radius);
  const QuotientClasses qc = quotient_classes(c.mu, arr);
  const DualGraph g = build_dual_graph(qc, arr, c.mu);
  std::map<std::string, int> kinds;
  for (const auto& n : g.nodes) kinds[to_string(n.kind)]++;
  rep["axes"] = arr.axes.size();
  rep["crossings"] = arr.crossings.size();
  rep["nodes"] = g.nodes.size();
  rep["edges"] = g.edges.size();
  for (const auto& [k, v] : kinds) rep["classes"][k] = v;
  rep["acyclic_untruncated"] = is_acyclic(g, [](const DualClass& n) { return !n.truncated; });
  if (!c.cfg.out_path.empty()) {
    write_text(c.cfg.out_path, graph_to_json(g));
    rep["graph_file"] = c.cfg.out_path;
  }
  if (!c.cfg.svg_path.empty()) {
    write_text(c.cfg.svg_path, render_svg(arr, &g));
    rep["svg_file"] = c.cfg.svg_path;
  }
  return true;
}

bool cmd_verify(const Context& c, Json& rep) {
  const auto& mu = c.mu;
  const int n = c.cfg.samples;
  std::mt19937_64 rng(c.cfg.seed);
  Json suites = Json::array();

  CheckReport axioms;
  axioms.name = "metric_axioms";
  CheckReport invariance;
  invariance.name = "gamma_invariance";
  for (int k = 0; k < n; ++k) {
    const PlanePoint x = random_point(rng, 3.0), y = random_point(rng, 3.0), z = random_point(rng, 3.0);
    const double dxy = dual_distance(mu, x, y), dyx = dual_distance(mu, y, x);
    const double dyz = dual_distance(mu, y, z), dxz = dual_distance(mu, x, z);
    axioms.checked += 3;
    axioms.worst = std::max({axioms.worst, std::abs(dxy - dyx), dxz - dxy - dyz});
    if (dxy < 0.0) axioms.fail("negative distance");
    if (std::abs(dxy - dyx) > 1e-12) axioms.fail("asymmetric pair");
    if (dxz > dxy + dyz + c.cfg.epsilon) axioms.fail("triangle inequality");
    for (const auto& gen : c.group->generators) {
      const double moved = dual_distance(mu, apply(gen, x), apply(gen, y));
      ++invariance.checked;
      invariance.worst = std::max(invariance.worst, std::abs(moved - dxy));
      if (std::abs(moved - dxy) > c.cfg.epsilon) invariance.fail("generator moves a distance");
    }
  }
  suites.push_back(report_json(axioms));
  suites.push_back(report_json(invariance));

  if (!mu.has_atoms() && mu.liouville_scale() > 0.0) {
    CheckReport crofton;
    crofton.name = "crofton";
    for (int k = 0; k < n; ++k) {
      const PlanePoint x = random_point(rng, 4.0), y = random_point(rng, 4.0);
      const double err = std::abs(dual_distance(mu, x, y) - mu.liouville_scale() * hyp_distance(x, y));
      ++crofton.checked;
      crofton.worst = std::max(crofton.worst, err);
      if (err > c.cfg.epsilon) crofton.fail("d_L differs from the scaled hyperbolic distance");
    }
    suites.push_back(report_json(crofton));
  } else {
    suites.push_back(skipped("crofton", "current has atoms"));
  }

  CheckReport spectrum;
  spectrum.name = "length_intersection";
  for (const auto& g : conjugacy_classes(*c.group, c.cfg.word_bound)) {
    const double err = std::abs(translation_length(mu, g) - oracle_intersection(mu, g));
    ++spectrum.checked;
    spectrum.worst = std::max(spectrum.worst, err);
    if (err > c.cfg.epsilon) spectrum.fail(g.word);
  }
  suites.push_back(report_json(spectrum));

  {
    DeltaSearchOptions opt;
    opt.radius = c.cfg.radius;
    const DeltaCertificate cert = delta_lower_bound_boxes(mu, opt);
    CheckReport four;
    four.name = "four_point";
    double max_defect = 0.0;
    for (int k = 0; k < n; ++k) {
      const auto r = four_point_defect(mu, random_point(rng, 1.5), random_point(rng, 1.5), random_point(rng, 1.5),
                                       random_point(rng, 1.5));
      ++four.checked;
      max_defect = std::max(max_defect, r.defect);
    }
    four.worst = std::max(0.0, max_defect - 2.0 * cert.value);
    if (max_defect > 2.0 * cert.value + 1e-6) four.fail("sampled defect exceeds twice the delta lower bound");
    four.figures.push_back({"max_defect", max_defect});
    four.figures.push_back({"delta_lower_bound", cert.value});
    suites.push_back(report_json(four));
  }

  if (mu.components().size() >= 2 && mu.liouville_scale() == 0.0) {
    CheckReport sum;
    sum.name = "guirardel_sum";
    std::vector<GeodesicCurrent> parts;
    for (const auto& comp : mu.components()) {
      parts.push_back(GeodesicCurrent::atomic(c.group, {{comp.rep.word, comp.weight}}));
    }
    for (int k = 0; k < n; ++k) {
      const PlanePoint x = random_point(rng, 3.0), y = random_point(rng, 3.0);
      double total = 0.0;
      for (const auto& p : parts) total += dual_distance(p, x, y);
      const double err = std::abs(dual_distance(mu, x, y) - total);
      ++sum.checked;
      sum.worst = std::max(sum.worst, err);
      if (err > 1e-12) sum.fail("d_mu differs from the sum over components");
    }
    suites.push_back(report_json(sum));
  } else {
    suites.push_back(skipped("guirardel_sum", "needs at least two atomic components"));
  }

  {
    CheckReport gh;
    gh.name = "gh_continuity";
    std::vector<PlanePoint> K;
    for (int k = 0; k < 10; ++k) K.push_back(random_point(rng, 2.0));
    std::vector<GroupElement> P;
    for (char l : c.group->labels) P.push_back(c.group->element(std::string(1, l)));
    std::vector<double> ratios;
    for (double h : {1e-1, 1e-2, 1e-3}) {
      const auto r = gh_epsilon_related(mu, mu.scaled(1.0 + h), K, P, 100.0 * h);
      ++gh.checked;
      if (r.worst_distortion > 0.0) ratios.push_back(r.worst_distortion / h);
      gh.figures.push_back({"distortion_h" + std::to_string(static_cast<int>(std::round(-std::log10(h)))),
                            r.worst_distortion});
    }
    if (!ratios.empty()) {
      const auto [lo, hi] = std::minmax_element(ratios.begin(), ratios.end());
      gh.worst = *hi / *lo;
      if (ratios.size() != 3 || *hi > 1.1 * *lo) gh.fail("distortion is not linear in h");
    }
    suites.push_back(report_json(gh));
  }

  if (!c.cfg.decomposition_path.empty()) {
    std::ifstream in(c.cfg.decomposition_path);
    if (!in) throw Error(ErrorCode::FileNotFound, c.cfg.decomposition_path);
    std::stringstream ss;
    ss << in.rdbuf();
    const DecompositionSpec d = parse_decomposition(ss.str(), c.group);
    suites.push_back(report_json(verify_special_curves(mu, d, c.cfg.word_bound)));
    suites.push_back(report_json(verify_chain_distance(mu, d, n, c.cfg.seed)));
    suites.push_back(report_json(verify_piece_intersection(mu, d, 20, c.cfg.seed)));
    suites.push_back(report_json(verify_delta_decomposition(mu, d, c.cfg.radius)));
  } else {
    suites.push_back(skipped("decomposition", "no --decomposition given"));
  }

  bool ok = true;
  for (const auto& s : suites) ok = ok && s["status"] != "fail";
  rep["samples"] = n;
  rep["suites"] = suites;
  return ok;
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  RunConfig cfg;
  CLI::App app{"Dual spaces of geodesic currents", "geodual"};
  app.require_subcommand(1);
  app.add_option("--presentation", cfg.presentation_path, "surface presentation JSON");
  app.add_option("--current", cfg.current_path, "current JSON");
  app.add_option("--decomposition", cfg.decomposition_path, "declared decomposition JSON (verify)");
  app.add_option("--radius", cfg.radius, "truncation or window radius")->check(CLI::PositiveNumber);
  app.add_option("--word-bound", cfg.word_bound, "maximal word length")->check(CLI::Range(1, 12));
  app.add_option("--epsilon", cfg.epsilon, "tolerance");
  app.add_option("--samples", cfg.samples, "random samples per suite")->check(CLI::Range(1, 1000000));
  app.add_option("--seed", cfg.seed, "RNG seed");
  app.add_option("--out", cfg.out_path, "output file");
  app.add_option("--svg", cfg.svg_path, "SVG output (dual-graph)");
  app.add_option("--p", cfg.p, "first point x,y")->delimiter(',')->expected(2);
  app.add_option("--q", cfg.q, "second point x,y")->delimiter(',')->expected(2);
  app.add_flag("--timing", cfg.timing, "add wall-clock seconds to the report");
  for (const char* name : {"distance", "length-spectrum", "delta", "dual-graph", "verify"}) {
    app.add_subcommand(name)->fallthrough();
  }

  std::vector<std::string> rev(args.rbegin(), args.rend());
  if (!rev.empty()) rev.pop_back();  // program name
  try {
    app.parse(rev);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? 0 : 2;
  }
  cfg.command = app.get_subcommands().front()->get_name();

  const auto t0 = std::chrono::steady_clock::now();
  Json rep;
  try {
    const Context ctx = load(cfg);
    rep = header(ctx);
    bool ok = false;
    if (cfg.command == "distance") ok = cmd_distance(ctx, rep);
    else if (cfg.command == "length-spectrum") ok = cmd_length_spectrum(ctx, rep);
    else if (cfg.command == "delta") ok = cmd_delta(ctx, rep);
    else if (cfg.command == "dual-graph") ok = cmd_dual_graph(ctx, rep);
    else ok = cmd_verify(ctx, rep);
    rep["status"] = ok ? "pass" : "fail";
    if (cfg.timing) {
      rep["wall_clock_s"] = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    }
    const std::string text = rep.dump(2) + "\n";
    out << text;
    if (!cfg.out_path.empty() && cfg.command != "dual-graph") write_text(cfg.out_path, text);
    return ok ? 0 : 1;
  } catch (const CLI::RequiredError& e) {
    err << e.what() << "\n";
    out << Json{{"status", "error"}, {"reason", "Usage"}, {"message", e.what()}}.dump(2) << "\n";
    return 2;
  } catch (const Error& e) {
    out << Json{{"status", "error"}, {"reason", std::string(to_string(e.code()))}, {"message", e.what()}}.dump(2)
        << "\n";
    return exit_code_for(e.code());
  }
}

}  // namespace geodual

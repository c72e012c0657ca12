#include <CLI11.hpp>
#include <json.hpp>

#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include "gasketwalk/boundary.hpp"
#include "gasketwalk/graph.hpp"
#include "gasketwalk/matrices.hpp"
#include "gasketwalk/potential.hpp"
#include "gasketwalk/recursion.hpp"
#include "gasketwalk/render.hpp"
#include "gasketwalk/simulate.hpp"
#include "gasketwalk/words.hpp"

using nlohmann::json;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitInvariant = 1;
constexpr int kExitUsage = 2;

struct GlobalOptions {
  std::string p = "1/3";
  std::string mode;  // "", "exact", "float"
  std::uint64_t seed = 1;
  int threads = 0;
  std::string format = "csv";
  std::string out;
};

gasket::ChainParams make_params(const GlobalOptions& g) {
  using gasket::ArithmeticMode;
  if (g.mode == "exact") return gasket::ChainParams::parse(g.p, ArithmeticMode::kExact);
  if (g.mode == "float") return gasket::ChainParams::parse(g.p, ArithmeticMode::kFloating);
  if (!g.mode.empty()) throw std::invalid_argument("mode must be 'exact' or 'float'");
  return gasket::ChainParams::parse(g.p);
}

void emit(const GlobalOptions& g, const std::string& text) {
  if (g.out.empty()) {
    std::cout << text;
    return;
  }
  std::ofstream f(g.out, std::ios::binary);
  if (!f) throw std::runtime_error("cannot open output file: " + g.out);
  f << text;
}

std::string value_field(const gasket::Rat& v) { return gasket::rat_string(v); }

json run_config(const gasket::ChainParams& params, const GlobalOptions& g) {
  json cfg;
  cfg["p"] = params.p_string();
  cfg["mode"] = params.exact() ? "exact" : "float";
  cfg["seed"] = g.seed;
  cfg["threads"] = g.threads;
  return cfg;
}

int cmd_sequences(const GlobalOptions& g, int n) {
  const auto params = make_params(g);
  std::string text;
  if (params.exact()) {
    const auto chain = gasket::make_chain<gasket::Rat>(params);
    text = gasket::states_to_csv(gasket::hitting_sequence(chain, n));
  } else {
    const auto chain = gasket::make_chain<double>(params);
    text = gasket::states_to_csv(gasket::hitting_sequence(chain, n));
  }
  if (g.format == "json") {
    json rows = json::array();
    std::istringstream is(text);
    std::string line;
    std::getline(is, line);  // header
    while (std::getline(is, line)) {
      json row;
      const char* keys[7] = {"n", "alpha", "beta", "gamma", "a", "b", "c"};
      std::istringstream ls(line);
      std::string cell;
      for (int k = 0; k < 7 && std::getline(ls, cell, ','); ++k) row[keys[k]] = cell;
      rows.push_back(row);
    }
    json doc;
    doc["config"] = run_config(params, g);
    doc["states"] = rows;
    emit(g, doc.dump(2) + "\n");
  } else {
    emit(g, text);
  }
  return kExitOk;
}

int cmd_verify(const GlobalOptions& g, double tol, int n_max) {
  const auto params = make_params(g);
  if (!params.exact() && tol < 1e-14) {
    std::cerr << "tolerance below float resolution; use exact mode\n";
    return kExitUsage;
  }
  gasket::LimitReport limits;
  gasket::LemmaReport lemmas;
  if (params.exact()) {
    // plain exact first; if the state outgrows the cap, certified intervals
    // keep every verdict rigorous
    try {
      limits = gasket::verify_limits<gasket::Rat>(params, tol, n_max);
    } catch (const gasket::ExactSizeError&) {
      limits = gasket::verify_limits<gasket::DyadicInterval>(params, tol, n_max);
    }
    lemmas = gasket::check_lemma_suite<gasket::Rat>(params, n_max);
    if (lemmas.n_reached < n_max) {
      auto certified = gasket::check_lemma_suite<gasket::DyadicInterval>(params, n_max);
      certified.arithmetic = lemmas.arithmetic + "+" + certified.arithmetic;
      certified.all_hold = certified.all_hold && lemmas.all_hold;
      for (const auto& v : lemmas.violations) certified.violations.push_back(v);
      lemmas = std::move(certified);
    }
  } else {
    limits = gasket::verify_limits<double>(params, tol, n_max);
    lemmas = gasket::check_lemma_suite<double>(params, n_max);
  }

  json doc;
  doc["config"] = run_config(params, g);
  doc["tolerance"] = tol;
  doc["limits"] = {{"converged", limits.converged},
                   {"n_converged", limits.n_converged},
                   {"envelope", limits.envelope},
                   {"envelope_ok", limits.envelope_ok},
                   {"final_deviation", limits.final_deviation},
                   {"arithmetic", limits.arithmetic}};
  doc["lemmas"] = {{"all_hold", lemmas.all_hold},
                   {"certified", lemmas.certified},
                   {"n_reached", lemmas.n_reached},
                   {"arithmetic", lemmas.arithmetic},
                   {"violations", lemmas.violations}};
  emit(g, doc.dump(2) + "\n");
  const bool ok = limits.converged && limits.envelope_ok && lemmas.all_hold && lemmas.certified;
  return ok ? kExitOk : kExitInvariant;
}

int cmd_simulate(const GlobalOptions& g, const std::string& start, int level,
                 std::uint64_t paths, const std::string& kernel) {
  const auto params = make_params(g);
  const auto kind =
      kernel == "rotated" ? gasket::KernelKind::kRotated : gasket::KernelKind::kStandard;
  if (kernel != "rotated" && kernel != "standard")
    throw std::invalid_argument("kernel must be 'standard' or 'rotated'");
  const auto est = gasket::estimate_hitting(params, gasket::FiniteWord::parse(start), level,
                                            paths, g.seed, kind, g.threads);
  json doc;
  doc["config"] = run_config(params, g);
  doc["config"]["start"] = start;
  doc["config"]["level"] = level;
  doc["config"]["kernel"] = kernel;
  doc["paths"] = est.paths;
  doc["seed"] = est.seed;
  doc["estimates"] = est.estimate;
  doc["stderr"] = est.stderr_;
  doc["counts"] = est.counts;
  doc["cap_hits"] = est.cap_hits;
  emit(g, doc.dump(2) + "\n");
  return kExitOk;
}

template <class S>
json potential_value(const gasket::ChainParams& params, const std::string& xs,
                     const std::string& ys, bool green) {
  gasket::PotentialEngine<S> engine(params);
  const auto x = gasket::FiniteWord::parse(xs);
  const auto y = gasket::FiniteWord::parse(ys);
  const S v = green ? engine.green(x, y) : engine.hitting(x, y);
  json doc;
  if constexpr (gasket::num_traits<S>::exact)
    doc["value"] = value_field(v);
  else
    doc["value"] = v;
  doc["value_float"] = gasket::num_traits<S>::mid(v);
  return doc;
}

int cmd_potential(const GlobalOptions& g, const std::string& x, const std::string& y,
                  bool green) {
  const auto params = make_params(g);
  json doc = params.exact() ? potential_value<gasket::Rat>(params, x, y, green)
                            : potential_value<double>(params, x, y, green);
  doc["config"] = run_config(params, g);
  doc["x"] = x;
  doc["y"] = y;
  emit(g, doc.dump(2) + "\n");
  return kExitOk;
}

int cmd_kernel(const GlobalOptions& g, const std::string& zs, const std::string& target,
               double tol) {
  const auto params = make_params(g);
  const auto z = gasket::FiniteWord::parse(zs);
  json doc;
  doc["config"] = run_config(params, g);
  doc["z"] = zs;
  doc["target"] = target;
  if (target.find('(') != std::string::npos) {
    gasket::BoundaryEvaluator eval(params);
    doc["value"] = eval.kernel(z, gasket::BoundaryWord::parse(target), tol);
    doc["tol"] = tol;
  } else if (params.exact()) {
    gasket::PotentialEngine<gasket::Rat> engine(params);
    const auto v = engine.martin_kernel(z, gasket::FiniteWord::parse(target));
    doc["value"] = value_field(v);
    doc["value_float"] = v.get_d();
    doc["bound"] = value_field(engine.martin_bound(z));
  } else {
    gasket::PotentialEngine<double> engine(params);
    doc["value"] = engine.martin_kernel(z, gasket::FiniteWord::parse(target));
    doc["bound"] = engine.martin_bound(z);
  }
  emit(g, doc.dump(2) + "\n");
  return kExitOk;
}

int cmd_metric(const GlobalOptions& g, const std::string& xs, const std::string& ys, double r,
               int depth, double kernel_tol) {
  const auto params = make_params(g);
  gasket::MetricParams mp;
  mp.r = r;
  mp.depth = depth;
  mp.kernel_tol = kernel_tol;
  gasket::MartinMetric metric(params, mp);
  const auto v = metric.distance(gasket::parse_metric_point(xs), gasket::parse_metric_point(ys));
  json doc;
  doc["config"] = run_config(params, g);
  doc["params"] = {{"r", r}, {"depth", depth}, {"kernel_tol", kernel_tol}};
  doc["x"] = xs;
  doc["y"] = ys;
  doc["value"] = v.value;
  doc["error_bound"] = v.error_bound;
  emit(g, doc.dump(2) + "\n");
  return kExitOk;
}

int cmd_harmonic(const GlobalOptions& g, int i, const std::string& xs, double tol,
                 const std::vector<double>& weights) {
  const auto params = make_params(g);
  gasket::BoundaryEvaluator eval(params);
  json doc;
  doc["config"] = run_config(params, g);
  doc["x"] = xs;
  doc["tol"] = tol;
  const bool boundary = xs.find('(') != std::string::npos;
  if (!weights.empty()) {
    if (weights.size() != 3) throw std::invalid_argument("need exactly three weights");
    if (boundary) throw std::invalid_argument("weight combinations need a finite word");
    doc["weights"] = weights;
    doc["value"] = gasket::harmonic_from_boundary(
        eval, {weights[0], weights[1], weights[2]}, gasket::FiniteWord::parse(xs), tol);
  } else {
    if (i < 1 || i > 3) throw std::invalid_argument("harmonic index must be 1, 2 or 3");
    doc["i"] = i;
    if (boundary)
      doc["value"] = gasket::harmonic_at_boundary(eval, static_cast<gasket::Letter>(i),
                                                  gasket::BoundaryWord::parse(xs), tol);
    else
      doc["value"] = gasket::harmonic_h(eval, static_cast<gasket::Letter>(i),
                                        gasket::FiniteWord::parse(xs), tol);
  }
  emit(g, doc.dump(2) + "\n");
  return kExitOk;
}

int cmd_gasket(const GlobalOptions& g, int depth, int color_by, double tol, int size) {
  const auto params = make_params(g);
  gasket::BoundaryEvaluator eval(params);
  gasket::GasketRenderConfig cfg;
  cfg.depth = depth;
  cfg.color_by = static_cast<gasket::Letter>(color_by);
  cfg.tol = tol;
  cfg.size_px = size;
  emit(g, gasket::render_gasket_svg(eval, cfg));
  return kExitOk;
}

int cmd_graph_export(const GlobalOptions& g, int level) {
  gasket::LevelGraph graph(level);
  emit(g, graph.to_dot());
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"random walks on the triangle word space: hitting probabilities, Green "
               "functions, Martin kernels and harmonic functions"};
  app.require_subcommand(1);
  GlobalOptions g;
  app.add_option("--p", g.p, "walk parameter, fraction like 1/3 or decimal")
      ->capture_default_str();
  app.add_option("--mode", g.mode, "arithmetic mode: exact or float");
  app.add_option("--seed", g.seed, "random seed")->capture_default_str();
  app.add_option("--threads", g.threads, "worker threads (0 = hardware)")->capture_default_str();
  app.add_option("--format", g.format, "output format: csv or json")->capture_default_str();
  app.add_option("--out", g.out, "output path (default stdout)");

  int seq_n = 10;
  auto* seq = app.add_subcommand("sequences", "hitting-probability sequences by level");
  seq->add_option("--n", seq_n, "highest level")->capture_default_str();

  double verify_tol = 1e-8;
  int verify_nmax = 200;
  bool verify_float = false;
  auto* verify = app.add_subcommand("verify", "limit convergence and the inequality suite");
  verify->add_option("--tol", verify_tol)->capture_default_str();
  verify->add_option("--n-max", verify_nmax)->capture_default_str();
  verify->add_flag("--float", verify_float, "force floating mode");

  std::string sim_start = "e", sim_kernel = "standard";
  int sim_level = 2;
  std::uint64_t sim_paths = 100000;
  auto* sim = app.add_subcommand("simulate", "Monte Carlo absorption estimates");
  sim->add_option("--start", sim_start)->capture_default_str();
  sim->add_option("--level", sim_level)->capture_default_str();
  sim->add_option("--paths", sim_paths)->capture_default_str();
  sim->add_option("--kernel", sim_kernel, "standard or rotated")->capture_default_str();

  std::string pot_x = "e", pot_y = "1";
  auto* hit = app.add_subcommand("hitting", "probability of ever reaching y from x");
  hit->add_option("--x", pot_x)->capture_default_str();
  hit->add_option("--y", pot_y)->capture_default_str();
  auto* grn = app.add_subcommand("green", "expected visits to y from x");
  grn->add_option("--x", pot_x)->capture_default_str();
  grn->add_option("--y", pot_y)->capture_default_str();

  std::string ker_z = "e", ker_target = "(1)";
  double ker_tol = 1e-8;
  auto* ker = app.add_subcommand("kernel", "Martin kernel K(z, target)");
  ker->add_option("--z", ker_z)->capture_default_str();
  ker->add_option("--target", ker_target, "finite word or boundary word like 12(3)")
      ->capture_default_str();
  ker->add_option("--tol", ker_tol)->capture_default_str();

  std::string met_x = "(1)", met_y = "(2)";
  double met_r = 0.5, met_ktol = 1e-7;
  int met_depth = 8;
  auto* met = app.add_subcommand("metric", "Martin metric distance");
  met->add_option("--x", met_x)->capture_default_str();
  met->add_option("--y", met_y)->capture_default_str();
  met->add_option("--r", met_r)->capture_default_str();
  met->add_option("--depth", met_depth)->capture_default_str();
  met->add_option("--kernel-tol", met_ktol)->capture_default_str();

  int har_i = 1;
  std::string har_x = "e";
  double har_tol = 1e-8;
  std::vector<double> har_weights;
  auto* har = app.add_subcommand("harmonic", "harmonic functions h_i and combinations");
  har->add_option("--i", har_i)->capture_default_str();
  har->add_option("--x", har_x, "finite word or boundary word")->capture_default_str();
  har->add_option("--tol", har_tol)->capture_default_str();
  har->add_option("--weights", har_weights, "three weights for sum w_i h_i")->expected(3);

  int gas_depth = 4, gas_color = 1, gas_size = 800;
  double gas_tol = 1e-6;
  auto* gas = app.add_subcommand("gasket", "SVG rendering colored by a harmonic function");
  gas->add_option("--depth", gas_depth)->capture_default_str();
  gas->add_option("--color-by", gas_color)->capture_default_str();
  gas->add_option("--tol", gas_tol)->capture_default_str();
  gas->add_option("--size", gas_size)->capture_default_str();

  int dot_level = 3;
  auto* dot = app.add_subcommand("graph-export", "level graph in dot format");
  dot->add_option("--level", dot_level)->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) return app.exit(e);  // --help
    app.exit(e);
    return kExitUsage;
  }

  try {
    if (*seq) return cmd_sequences(g, seq_n);
    if (*verify) {
      if (verify_float) g.mode = "float";
      return cmd_verify(g, verify_tol, verify_nmax);
    }
    if (*sim) return cmd_simulate(g, sim_start, sim_level, sim_paths, sim_kernel);
    if (*hit) return cmd_potential(g, pot_x, pot_y, /*green=*/false);
    if (*grn) return cmd_potential(g, pot_x, pot_y, /*green=*/true);
    if (*ker) return cmd_kernel(g, ker_z, ker_target, ker_tol);
    if (*met) return cmd_metric(g, met_x, met_y, met_r, met_depth, met_ktol);
    if (*har) return cmd_harmonic(g, har_i, har_x, har_tol, har_weights);
    if (*gas) return cmd_gasket(g, gas_depth, gas_color, gas_tol, gas_size);
    if (*dot) return cmd_graph_export(g, dot_level);
  } catch (const std::invalid_argument& e) {
    std::cerr << e.what() << "\n";
    return kExitUsage;
  } catch (const std::domain_error& e) {
    std::cerr << e.what() << "\n";
    return kExitUsage;
  } catch (const gasket::RelationError& e) {
    std::cerr << e.what() << "\n";
    return kExitInvariant;
  } catch (const std::exception& e) {
    std::cerr << e.what() << "\n";
    return kExitInvariant;
  }
  return kExitUsage;
}

#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "gasketwalk/boundary.hpp"
#include "gasketwalk/matrices.hpp"
#include "gasketwalk/potential.hpp"
#include "gasketwalk/recursion.hpp"
#include "gasketwalk/simulate.hpp"
#include "gasketwalk/words.hpp"

namespace py = pybind11;
using namespace gasket;

namespace {

ChainParams params_of(const std::string& p) { return ChainParams::parse(p); }

std::array<double, 3> row_to_array(const Row3<double>& r) { return {r[0], r[1], r[2]}; }

py::dict state_dict(const HittingState<Rat>& s) {
  py::dict d;
  d["n"] = s.n;
  d["alpha"] = rat_string(s.alpha);
  d["beta"] = rat_string(s.beta);
  d["gamma"] = rat_string(s.gamma);
  d["a"] = rat_string(s.a);
  d["b"] = rat_string(s.b);
  d["c"] = rat_string(s.c);
  d["alpha_float"] = s.alpha.get_d();
  d["beta_float"] = s.beta.get_d();
  d["gamma_float"] = s.gamma.get_d();
  d["a_float"] = s.a.get_d();
  d["b_float"] = s.b.get_d();
  d["c_float"] = s.c.get_d();
  return d;
}

}  // namespace

PYBIND11_MODULE(gasketwalk, m) {
  m.doc() = "random walks on the triangle word space: hitting probabilities, Green "
            "functions, Martin kernels, harmonic functions";

  m.def(
      "sequence",
      [](const std::string& p, int n) {
        const auto chain = make_chain<Rat>(params_of(p));
        py::list out;
        for (const auto& s : hitting_sequence(chain, n)) out.append(state_dict(s));
        return out;
      },
      py::arg("p"), py::arg("n"),
      "exact hitting-probability states for levels 2..n (p as a fraction string)");

  m.def(
      "rho",
      [](const std::string& p, const std::string& word) {
        RecursionTable<double> table(params_of(p));
        return row_to_array(rho_finite(FiniteWord::parse(word), table));
      },
      py::arg("p"), py::arg("word"),
      "absorption distribution over the level corners, transfer-matrix route");

  m.def(
      "rho_exact",
      [](const std::string& p, const std::string& word) {
        RecursionTable<Rat> table(params_of(p));
        const auto row = rho_finite(FiniteWord::parse(word), table);
        return std::array<std::string, 3>{rat_string(row[0]), rat_string(row[1]),
                                          rat_string(row[2])};
      },
      py::arg("p"), py::arg("word"));

  m.def(
      "rho_boundary",
      [](const std::string& word, double tol) {
        return row_to_array(rho_boundary(BoundaryWord::parse(word), tol));
      },
      py::arg("word"), py::arg("tol") = 1e-10,
      "absorption row of an eventually periodic infinite word (independent of p)");

  m.def(
      "hitting",
      [](const std::string& p, const std::string& x, const std::string& y) {
        PotentialEngine<double> engine(params_of(p));
        return engine.hitting(FiniteWord::parse(x), FiniteWord::parse(y));
      },
      py::arg("p"), py::arg("x"), py::arg("y"),
      "probability of ever reaching y from x (linear-solve route)");

  m.def(
      "green",
      [](const std::string& p, const std::string& x, const std::string& y) {
        PotentialEngine<double> engine(params_of(p));
        return engine.green(FiniteWord::parse(x), FiniteWord::parse(y));
      },
      py::arg("p"), py::arg("x"), py::arg("y"), "expected visits to y starting from x");

  m.def(
      "martin_kernel",
      [](const std::string& p, const std::string& z, const std::string& target, double tol) {
        const auto params = params_of(p);
        if (target.find('(') != std::string::npos) {
          BoundaryEvaluator eval(params);
          return eval.kernel(FiniteWord::parse(z), BoundaryWord::parse(target), tol);
        }
        PotentialEngine<double> engine(params);
        return engine.martin_kernel(FiniteWord::parse(z), FiniteWord::parse(target));
      },
      py::arg("p"), py::arg("z"), py::arg("target"), py::arg("tol") = 1e-8,
      "K(z, target); target may be a finite word or a boundary word like '12(3)'");

  m.def(
      "harmonic",
      [](const std::string& p, int i, const std::string& x, double tol) {
        BoundaryEvaluator eval(params_of(p));
        if (x.find('(') != std::string::npos)
          return harmonic_at_boundary(eval, static_cast<Letter>(i), BoundaryWord::parse(x), tol);
        return harmonic_h(eval, static_cast<Letter>(i), FiniteWord::parse(x), tol);
      },
      py::arg("p"), py::arg("i"), py::arg("x"), py::arg("tol") = 1e-8,
      "h_i at a finite word or along a boundary word");

  m.def(
      "martin_metric",
      [](const std::string& p, const std::string& x, const std::string& y, double r, int depth,
         double kernel_tol) {
        MetricParams mp;
        mp.r = r;
        mp.depth = depth;
        mp.kernel_tol = kernel_tol;
        MartinMetric metric(params_of(p), mp);
        const auto v = metric.distance(parse_metric_point(x), parse_metric_point(y));
        py::dict d;
        d["value"] = v.value;
        d["error_bound"] = v.error_bound;
        return d;
      },
      py::arg("p"), py::arg("x"), py::arg("y"), py::arg("r") = 0.5, py::arg("depth") = 8,
      py::arg("kernel_tol") = 1e-7);

  m.def(
      "estimate_hitting",
      [](const std::string& p, const std::string& start, int level, std::uint64_t paths,
         std::uint64_t seed, const std::string& kernel, int threads) {
        const auto kind =
            kernel == "rotated" ? KernelKind::kRotated : KernelKind::kStandard;
        const auto est = estimate_hitting(params_of(p), FiniteWord::parse(start), level, paths,
                                          seed, kind, threads);
        py::dict d;
        d["estimates"] = est.estimate;
        d["stderr"] = est.stderr_;
        d["counts"] = est.counts;
        d["paths"] = est.paths;
        d["seed"] = est.seed;
        d["cap_hits"] = est.cap_hits;
        return d;
      },
      py::arg("p"), py::arg("start"), py::arg("level"), py::arg("paths"), py::arg("seed") = 1,
      py::arg("kernel") = "standard", py::arg("threads") = 0);

  m.def(
      "verify",
      [](const std::string& p, double tol, int n_max) {
        const auto params = params_of(p);
        LimitReport rep;
        try {
          rep = verify_limits<Rat>(params, tol, n_max);
        } catch (const ExactSizeError&) {
          rep = verify_limits<DyadicInterval>(params, tol, n_max);
        }
        py::dict d;
        d["converged"] = rep.converged;
        d["n_converged"] = rep.n_converged;
        d["envelope"] = rep.envelope;
        d["envelope_ok"] = rep.envelope_ok;
        d["arithmetic"] = rep.arithmetic;
        return d;
      },
      py::arg("p"), py::arg("tol") = 1e-8, py::arg("n_max") = 200);

  m.def("limit_matrix", [](int i) {
    const auto mat = limit_matrix<double>(static_cast<Letter>(i));
    std::array<std::array<double, 3>, 3> out;
    for (int r = 0; r < 3; ++r) out[r] = row_to_array(mat.rows[r]);
    return out;
  });

  m.def("minimal_boundary", [] {
    std::vector<std::string> out;
    for (const auto& pt : minimal_boundary()) out.push_back(pt.representative.str());
    return out;
  });

  m.def("project", [](const std::string& w) {
    const auto pt = project(BoundaryWord::parse(w));
    return std::make_pair(pt.x, pt.y);
  });

  m.def("pi_equivalent", [](const std::string& x, const std::string& y) {
    return pi_equivalent(BoundaryWord::parse(x), BoundaryWord::parse(y));
  });

  m.def("shift", [](const std::string& w) { return shift(BoundaryWord::parse(w)).str(); });

  m.def("d_metric", [](const std::string& x, const std::string& y) {
    return d_metric(BoundaryWord::parse(x), BoundaryWord::parse(y));
  });
}

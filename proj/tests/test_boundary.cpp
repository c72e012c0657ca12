#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <set>

#include "gasketwalk/boundary.hpp"

using namespace gasket;

namespace {

FiniteWord fw(const std::string& s) { return FiniteWord::parse(s); }
BoundaryWord bw(const std::string& s) { return BoundaryWord::parse(s); }

}  // namespace

TEST_CASE("metric of identical points is exactly zero") {
  MartinMetric metric(ChainParams::parse("1/3"), MetricParams{0.5, 4, 1e-7});
  CHECK(metric.distance(fw("12"), fw("12")).value == 0.0);
  CHECK(metric.distance(bw("1(2)"), bw("1(2)")).value == 0.0);
  CHECK(metric.distance(fw("12"), fw("12")).error_bound == 0.0);
}

TEST_CASE("equivalent boundary pairs vanish within resolution, distinct ones separate") {
  MartinMetric metric(ChainParams::parse("1/3"), MetricParams{0.5, 6, 1e-7});
  const auto equal = metric.distance(bw("1(2)"), bw("2(1)"));
  CHECK(equal.value <= equal.error_bound);
  const auto apart = metric.distance(bw("(1)"), bw("(2)"));
  CHECK(apart.value > apart.error_bound);
  CHECK(apart.value > 0.05);
}

TEST_CASE("metric symmetry and triangle inequality on a sample") {
  MartinMetric metric(ChainParams::parse("1/3"), MetricParams{0.5, 4, 1e-7});
  const std::vector<MetricPoint> pts = {fw("e"),  fw("1"),   fw("12"),  fw("122"),
                                        bw("(1)"), bw("(2)"), bw("1(2)"), bw("(12)")};
  std::vector<std::vector<MetricValue>> d(pts.size(), std::vector<MetricValue>(pts.size()));
  for (std::size_t i = 0; i < pts.size(); ++i)
    for (std::size_t j = 0; j < pts.size(); ++j) d[i][j] = metric.distance(pts[i], pts[j]);
  for (std::size_t i = 0; i < pts.size(); ++i) {
    CHECK(d[i][i].value == 0.0);
    for (std::size_t j = 0; j < pts.size(); ++j) {
      CHECK(d[i][j].value == doctest::Approx(d[j][i].value).epsilon(1e-12));
      for (std::size_t k = 0; k < pts.size(); ++k) {
        const double slack = d[i][j].error_bound + d[j][k].error_bound + d[i][k].error_bound;
        CHECK(d[i][k].value <= d[i][j].value + d[j][k].value + slack);
      }
    }
  }
}

TEST_CASE("finite points separate from their neighbours") {
  MartinMetric metric(ChainParams::parse("1/3"), MetricParams{0.5, 4, 1e-7});
  const auto v = metric.distance(fw("1"), fw("2"));
  CHECK(v.value > v.error_bound);
  const auto w = metric.distance(fw("e"), fw("1"));
  CHECK(w.value >= 0.5 - 1e-12);  // the length term alone
}

TEST_CASE("harmonic functions at the root and harmonicity") {
  for (const char* ps : {"0.1", "1/3", "0.45"}) {
    const auto params = ChainParams::parse(ps);
    BoundaryEvaluator eval(params);
    for (Letter i : kAlphabet)
      CHECK(harmonic_h(eval, i, FiniteWord{}, 1e-9) == doctest::Approx(1.0).epsilon(1e-8));

    // P h = h on words up to length 3
    const auto chain = make_chain<double>(params);
    for (Letter i : kAlphabet) {
      for (int level = 0; level <= 3; ++level) {
        std::size_t count = 1;
        for (int k = 0; k < level; ++k) count *= 3;
        for (std::size_t idx = 0; idx < count; ++idx) {
          const FiniteWord x = FiniteWord::from_index(idx, level);
          double Ph = 0.0;
          for (const auto& [target, prob] : transition_row(chain, x).targets)
            Ph += prob * harmonic_h(eval, i, target, 1e-9);
          const double h = harmonic_h(eval, i, x, 1e-9);
          CHECK(std::fabs(Ph - h) < 1e-7);
        }
      }
    }
  }
}

TEST_CASE("h is largest toward its own corner") {
  BoundaryEvaluator eval(ChainParams::parse("1/3"));
  CHECK(harmonic_h(eval, 1, fw("1"), 1e-9) > harmonic_h(eval, 1, fw("2"), 1e-9));
  CHECK(harmonic_h(eval, 1, fw("1"), 1e-9) > 1.0);
  const double h111 = harmonic_h(eval, 1, fw("111"), 1e-9);
  CHECK(h111 > harmonic_h(eval, 1, fw("1"), 1e-9));
}

TEST_CASE("subdivision rule for boundary values") {
  BoundaryEvaluator eval(ChainParams::parse("1/3"));
  const double tol = 1e-8;
  std::vector<FiniteWord> stems{FiniteWord{}};
  for (std::size_t idx = 0; idx < 3; ++idx) stems.push_back(FiniteWord::from_index(idx, 1));
  for (std::size_t idx = 0; idx < 9; ++idx) stems.push_back(FiniteWord::from_index(idx, 2));
  for (Letter i : kAlphabet) {
    for (const auto& stem : stems) {
      for (Letter j : kAlphabet)
        for (Letter k : kAlphabet) {
          if (j == k) continue;
          const Letter l = third_letter(j, k);
          const double mid = harmonic_at_boundary(
              eval, i, BoundaryWord(stem.appended(j), FiniteWord::repeated(k, 1)), tol);
          const double hj =
              harmonic_at_boundary(eval, i, BoundaryWord(stem, FiniteWord::repeated(j, 1)), tol);
          const double hk =
              harmonic_at_boundary(eval, i, BoundaryWord(stem, FiniteWord::repeated(k, 1)), tol);
          const double hl =
              harmonic_at_boundary(eval, i, BoundaryWord(stem, FiniteWord::repeated(l, 1)), tol);
          CHECK(std::fabs(mid - (0.4 * hj + 0.4 * hk + 0.2 * hl)) < 3 * tol + 1e-9);
        }
    }
  }
}

TEST_CASE("boundary values are independent of p and of the representative") {
  const double tol = 1e-7;
  BoundaryEvaluator e1(ChainParams::parse("0.1"));
  BoundaryEvaluator e2(ChainParams::parse("1/3"));
  BoundaryEvaluator e3(ChainParams::parse("0.45"));
  for (const char* ws : {"(1)", "1(2)", "(12)", "22(1)", "12(3)"}) {
    for (Letter i : kAlphabet) {
      const double a = harmonic_at_boundary(e1, i, bw(ws), tol);
      const double b = harmonic_at_boundary(e2, i, bw(ws), tol);
      const double c = harmonic_at_boundary(e3, i, bw(ws), tol);
      CHECK(std::fabs(a - b) < 3 * tol);
      CHECK(std::fabs(b - c) < 3 * tol);
    }
  }
  const double x = harmonic_at_boundary(e2, 1, bw("1(2)"), tol);
  const double y = harmonic_at_boundary(e2, 1, bw("2(1)"), tol);
  CHECK(std::fabs(x - y) < 3 * tol);
}

TEST_CASE("weighted combinations") {
  BoundaryEvaluator eval(ChainParams::parse("1/4"));
  const double tol = 1e-8;
  for (const char* xs : {"e", "1", "12", "221"}) {
    CHECK(harmonic_from_boundary(eval, {1, 0, 0}, fw(xs), tol) ==
          doctest::Approx(harmonic_h(eval, 1, fw(xs), tol)));
    CHECK(harmonic_from_boundary(eval, {0, 0, 0}, fw(xs), tol) == 0.0);
    // uniform weights represent the constant function 1 (after scaling)
    const double uniform =
        harmonic_from_boundary(eval, {1.0 / 3, 1.0 / 3, 1.0 / 3}, fw(xs), tol);
    CHECK(std::fabs(uniform - 1.0) < 3 * tol);
  }
  CHECK_THROWS_AS(harmonic_from_boundary(eval, {-1, 0, 0}, fw("1"), tol),
                  std::invalid_argument);
}

TEST_CASE("minimal boundary") {
  const auto points = minimal_boundary();
  CHECK(points.size() == 3);
  std::set<std::string> reps;
  for (const auto& p : points) {
    CHECK(p.members().size() == 1);  // corner classes are singletons
    reps.insert(p.representative.str());
  }
  CHECK(reps == std::set<std::string>{"(1)", "(2)", "(3)"});
}

TEST_CASE("cauchy classification") {
  const auto interior = cauchy_class(SequenceDescriptor::constant_word(fw("12")));
  CHECK(interior.is_interior);
  CHECK(interior.interior->str() == "12");

  const auto cls = cauchy_class(SequenceDescriptor::prefix_sequence(bw("2(1)")));
  CHECK(!cls.is_interior);
  CHECK(cls.point->representative.str() == "1(2)");  // smaller member of the pair
  CHECK(cls.point->members().size() == 2);

  const auto singleton = cauchy_class(SequenceDescriptor::prefix_sequence(bw("(12)")));
  CHECK(singleton.point->members().size() == 1);
}

TEST_CASE("catalog is canonical, deduplicated and reloadable") {
  const auto catalog = default_boundary_catalog();
  CHECK(catalog.size() >= 30);
  std::set<std::string> seen;
  for (const auto& w : catalog) {
    CHECK(seen.insert(w.str()).second);
    const BoundaryWord again(w.prefix(), w.cycle());
    CHECK(again == w);
  }
  for (Letter i : kAlphabet) CHECK(seen.count(BoundaryWord(FiniteWord{}, FiniteWord::repeated(i, 1)).str()));

  const std::string path = "catalog_roundtrip_test.txt";
  save_catalog(path, catalog);
  const auto loaded = load_catalog(path);
  CHECK(loaded == catalog);
  std::remove(path.c_str());
}

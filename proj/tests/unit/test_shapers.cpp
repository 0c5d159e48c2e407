#include <doctest.h>

#include <cmath>

#include "cola/errors.hpp"
#include "cola/eval/oracles.hpp"
#include "cola/learn/consistency.hpp"
#include "cola/shapers/rules.hpp"
#include "helpers.hpp"

using namespace cola;
using namespace cola::shapers;
using games::game_by_name;

namespace {

const games::Game kTandem = game_by_name("tandem");
const games::Game kHam = game_by_name("hamiltonian");

void check_vec(const Vector& got, std::initializer_list<double> want, double tol = 1e-12) {
  REQUIRE(got.size() == want.size());
  std::size_t i = 0;
  for (double w : want) {
    CHECK(std::abs(got[i] - w) <= tol);
    ++i;
  }
}

// xi and the off-diagonal Hessian from the tape engine, independent of the
// jets the rules run on.
struct TapeDerivatives {
  Vector xi;
  Matrix h_off;
};

TapeDerivatives tape_derivatives(const games::Game& g, const Vector& theta) {
  const auto d1 = static_cast<std::size_t>(g.d1);
  const auto m = static_cast<std::size_t>(g.dim());
  TapeDerivatives out{Vector(m), Matrix(m, m)};
  for (int player = 1; player <= 2; ++player) {
    const auto f = testing::loss_fn(g, player);
    const ad::VectorFn grad_f{g.dim(), g.dim(), [f](std::span<const ad::Var> x) { return ad::grad(f, x); }};
    const auto grad = ad::grad(f, theta);
    const auto hess = ad::jacobian(grad_f, theta);
    const std::size_t lo = player == 1 ? 0 : d1;
    const std::size_t hi = player == 1 ? d1 : m;
    for (std::size_t i = lo; i < hi; ++i) {
      out.xi[i] = grad[i];
      for (std::size_t j = 0; j < m; ++j) {
        const bool other = player == 1 ? j >= d1 : j < d1;
        if (other) out.h_off(i, j) = hess(i, j);
      }
    }
  }
  return out;
}

Vector neumann_series(const TapeDerivatives& d, double alpha, int n) {
  Vector term = d.xi, sum = d.xi;
  for (int k = 0; k < n; ++k) {
    term = multiply(d.h_off, term);
    for (auto& v : term) v *= -alpha;
    for (std::size_t i = 0; i < sum.size(); ++i) sum[i] += term[i];
  }
  for (auto& v : sum) v *= -alpha;
  return sum;
}

}  // namespace

TEST_CASE("naive examples") {
  check_vec(naive_update(kTandem, 1.0, std::vector<double>{0, 0}), {2, 2});
  check_vec(naive_update(kHam, 0.5, std::vector<double>{1, 2}), {-1, 0.5});
  // (1/2, 1/2) is a critical point of both Tandem losses.
  check_vec(naive_update(kTandem, 0.7, std::vector<double>{0.5, 0.5}), {0, 0});
}

TEST_CASE("exact LOLA examples") {
  check_vec(exact_lola_update(kTandem, 1.0, std::vector<double>{0, 0}), {6, 6});
  check_vec(exact_lola_update(kTandem, 1.0, std::vector<double>{1, 1}), {2, 2});
}

TEST_CASE("exact HOLA matches the Tandem closed form and doubles with n") {
  const auto points = games::sample_region_flat(kTandem, 100, 3);
  double worst = 0.0;
  for (int n = 0; n <= 8; ++n) {
    const HolaField f(kTandem, 1.0, n, Flavor::kExact);
    for (const auto& p : points) {
      worst = std::max(worst, testing::max_abs_diff(f(p), eval::oracle_tandem_hola(n, p)));
      if (n > 0) {
        const double s = 2.0 * (1.0 + p[0] + p[1]);
        const auto prev = hola_update(kTandem, 1.0, n - 1, Flavor::kExact, p);
        CHECK(f(p)[0] + s == doctest::Approx(2.0 * (prev[0] + s)).epsilon(1e-12));
      }
    }
  }
  CHECK(worst <= 1e-9);
  check_vec(hola_update(kTandem, 1.0, 5, Flavor::kExact, std::vector<double>{0, 0}), {126, 126}, 1e-9);
  check_vec(hola_update(kTandem, 1.0, 3, Flavor::kExact, std::vector<double>{0.5, -0.5}), {30, 30}, 1e-9);
  check_vec(hola_update(kTandem, 1.0, 8, Flavor::kExact, std::vector<double>{0, 0}), {1022, 1022}, 1e-9);
  // Root of the closed form.
  for (int n = 0; n <= 6; ++n) {
    const double s = std::pow(2.0, n + 1) - 1.0;
    check_vec(hola_update(kTandem, 1.0, n, Flavor::kExact, std::vector<double>{0.25 * s, 0.75 * s}), {0, 0}, 1e-9);
  }
}

TEST_CASE("HOLA order 0 is naive learning on every game") {
  for (const auto& name : games::game_names()) {
    const auto g = game_by_name(name);
    const HolaField naive(g, 0.4, 0, Flavor::kExact);
    for (const auto& p : games::sample_region_flat(g, 10, 1)) {
      const auto xi = tape_derivatives(g, p).xi;
      Vector want(xi.size());
      for (std::size_t i = 0; i < xi.size(); ++i) want[i] = -0.4 * xi[i];
      CHECK(testing::max_abs_diff(naive(p), want) <= 1e-12);
      CHECK(testing::max_abs_diff(lookahead_series_update(g, 0.4, 0, p), want) <= 1e-12);
    }
  }
}

TEST_CASE("Taylor LOLA minus LCGD is alpha^2 chi on Tandem") {
  for (double alpha : {0.3, 0.5, 1.0}) {
    for (const auto& p : games::sample_region_flat(kTandem, 100, 4)) {
      const auto t = taylor_lola_update(kTandem, alpha, p);
      const auto l = make_field(kTandem, alpha, "lcgd")->operator()(p);
      const double want = alpha * alpha * 4.0 * (p[0] + p[1]);
      CHECK(std::abs(t[0] - l[0] - want) <= 1e-9);
      CHECK(std::abs(t[1] - l[1] - want) <= 1e-9);
    }
  }
  const auto t = taylor_lola_update(kTandem, 0.5, std::vector<double>{1, 1});
  const auto l = lookahead_series_update(kTandem, 0.5, 1, std::vector<double>{1, 1});
  check_vec({t[0] - l[0], t[1] - l[1]}, {2, 2});
  check_vec(game_derivatives(kTandem, std::vector<double>{0.2, 0.3}).chi, {2, 2});
}

TEST_CASE("LookAhead examples and truncated CGD series") {
  check_vec(lookahead_series_update(kHam, 1.0, 1, std::vector<double>{1, 0}), {-1, 1});
  for (const char* name : {"tandem", "hamiltonian", "mp"}) {
    const auto g = game_by_name(name);
    for (double alpha : {0.1, 0.3, 1.0}) {
      for (const auto& p : games::sample_region_flat(g, 20, 6)) {
        const auto d = tape_derivatives(g, p);
        for (int n = 0; n <= 8; ++n) {
          INFO(name << " alpha " << alpha << " n " << n);
          const auto got = lookahead_series_update(g, alpha, n, p);
          const auto want = neumann_series(d, alpha, n);
          CHECK(testing::max_abs_diff(got, want) <= 1e-9 * std::max(1.0, testing::norm(want)));
        }
      }
    }
  }
}

TEST_CASE("LookAhead series converges to CGD on Tandem at alpha 0.3") {
  const auto p = std::vector<double>{0.3, -0.7};
  const auto cgd = cgd_update(kTandem, 0.3, p);
  // Remainder of the geometric series is (2 alpha)^(n+1) |CGD|.
  const auto la30 = lookahead_series_update(kTandem, 0.3, 30, p);
  CHECK(testing::max_abs_diff(la30, cgd) <= std::pow(0.6, 31) * testing::norm(cgd) + 1e-15);
  CHECK(testing::max_abs_diff(lookahead_series_update(kTandem, 0.3, 60, p), cgd) <= 1e-9);
}

TEST_CASE("CGD closed form on Tandem") {
  check_vec(cgd_update(kTandem, 1.0, std::vector<double>{0, 0}), {2.0 / 3.0, 2.0 / 3.0});
  for (double alpha : {0.1, 0.3, 1.0, 2.0}) {
    for (const auto& p : games::sample_region_flat(kTandem, 100, 5)) {
      const double want = -2.0 * alpha * (p[0] + p[1] - 1.0) / (1.0 + 2.0 * alpha);
      const auto got = cgd_update(kTandem, alpha, p);
      CHECK(std::abs(got[0] - want) <= 1e-9);
      CHECK(std::abs(got[1] - want) <= 1e-9);
    }
  }
}

TEST_CASE("CGD solves the tape-built system on every game") {
  for (const auto& name : games::game_names()) {
    const auto g = game_by_name(name);
    for (const auto& p : games::sample_region_flat(g, 5, 12)) {
      const auto d = tape_derivatives(g, p);
      auto m = Matrix::identity(p.size());
      for (std::size_t i = 0; i < p.size(); ++i) {
        for (std::size_t j = 0; j < p.size(); ++j) m(i, j) += 0.2 * d.h_off(i, j);
      }
      auto want = solve_linear(m, d.xi);
      for (auto& v : want) v *= -0.2;
      INFO(name);
      CHECK(testing::max_abs_diff(cgd_update(g, 0.2, p), want) <= 1e-10 * std::max(1.0, testing::norm(want)));
    }
  }
}

TEST_CASE("CGD refuses a singular system") {
  // On Tandem the block matrix [[1, 2 alpha], [2 alpha, 1]] is singular at alpha = 1/2.
  CHECK_THROWS_AS(cgd_update(kTandem, 0.5, std::vector<double>{0.1, 0.2}), NumericError);
}

TEST_CASE("p-LOLA examples") {
  check_vec(plola_update(kHam, 1.0, 1.0, std::vector<double>{1, 0}), {-2, 1});
  check_vec(plola_update(kHam, 1.0, 0.0, std::vector<double>{1, 0}), {-1, 1});
  check_vec(taylor_lola_update(kHam, 1.0, std::vector<double>{1, 0}), {-2, 1});
  check_vec(plola_update(kHam, 0.7, 0.3, std::vector<double>{0, 0}), {0, 0});
  for (double p : {0.0, 0.5, 1.0}) {
    for (const auto& t : games::sample_region_flat(kHam, 20, 2)) {
      const double a = 1.5, x = t[0], y = t[1];
      const auto got = plola_update(kHam, a, p, t);
      CHECK(got[0] == doctest::Approx(-a * (y + a * x * (1 + p))).epsilon(1e-12));
      CHECK(got[1] == doctest::Approx(-a * (-x + a * y * (1 + p))).epsilon(1e-12));
    }
  }
}

TEST_CASE("p-LOLA with p = 1 is Taylor LOLA on every game") {
  for (const auto& name : games::game_names()) {
    const auto g = game_by_name(name);
    for (double alpha : {0.3, 1.0}) {
      for (const auto& t : games::sample_region_flat(g, 100, 13)) {
        INFO(name);
        const auto a = plola_update(g, alpha, 1.0, t);
        const auto b = taylor_lola_update(g, alpha, t);
        CHECK(testing::max_abs_diff(a, b) <= 1e-10 * std::max(1.0, testing::norm(b)));
      }
    }
  }
}

TEST_CASE("HOLA converges to a consistent field on Tandem at small alpha") {
  // At alpha = 0.1 the exact recursion contracts: consecutive orders agree and
  // the residual vanishes, while CGD keeps a clearly nonzero residual.
  const auto samples = games::sample_region_flat(kTandem, 200, 17);
  const HolaField h7(kTandem, 0.1, 7, Flavor::kExact), h8(kTandem, 0.1, 8, Flavor::kExact);
  const auto cgd = make_field(kTandem, 0.1, "cgd");
  double min_cos = 1.0, hola_resid = 0.0, cgd_resid = 0.0, cgd_cos = 0.0;
  for (const auto& p : samples) {
    const auto a = h7(p), b = h8(p), c = (*cgd)(p);
    auto cos = [](const Vector& u, const Vector& v) {
      return (u[0] * v[0] + u[1] * v[1]) / (testing::norm(u) * testing::norm(v));
    };
    min_cos = std::min(min_cos, cos(a, b));
    cgd_cos += cos(b, c) / static_cast<double>(samples.size());
    hola_resid += learn::consistency_residuals(h8, 0.1, p).squared() / static_cast<double>(samples.size());
    cgd_resid += learn::consistency_residuals(*cgd, 0.1, p).squared() / static_cast<double>(samples.size());
  }
  CHECK(min_cos > 0.9999);
  CHECK(hola_resid < 1e-6);
  CHECK(cgd_resid > 1e-4);
  CHECK(cgd_cos < 0.9999);
}

TEST_CASE("rule parsing") {
  CHECK(parse_rule("naive").order == 0);
  CHECK(parse_rule("lola").order == 1);
  CHECK(parse_rule("lola-taylor").flavor == Flavor::kTaylor);
  CHECK(parse_rule("hola:6").order == 6);
  CHECK(parse_rule("hola:3:taylor").flavor == Flavor::kTaylor);
  CHECK(parse_rule("lookahead:4").kind == RuleKind::kLookAhead);
  CHECK(parse_rule("plola:0.5").p == 0.5);
  CHECK(parse_rule("cgd").kind == RuleKind::kCgd);
  CHECK(parse_rule("zero").kind == RuleKind::kZero);
  for (const char* bad : {"", "hola", "hola:-1", "hola:x", "plola:", "sos", "hola:2:fast"}) {
    INFO(bad);
    CHECK_THROWS_AS(parse_rule(bad), UsageError);
  }
  CHECK_THROWS_AS(make_field(kTandem, -1.0, "lola"), UsageError);
}

TEST_CASE("update rules reject bad points") {
  const auto lola = make_field(kTandem, 1.0, "lola");
  CHECK_THROWS_AS((*lola)(std::vector<double>{1.0}), UsageError);
  CHECK_THROWS_AS((*lola)(std::vector<double>{NAN, 0.0}), NumericError);
}

#include "cola/shapers/rules.hpp"

#include <charconv>
#include <cmath>
#include <sstream>

namespace cola::shapers {
namespace {

using ad::Jet;

std::vector<Jet> truncate_all(const std::vector<Jet>& v, int order) {
  std::vector<Jet> out;
  out.reserve(v.size());
  for (const auto& j : v) out.push_back(j.truncated(order));
  return out;
}

// Gradient blocks and the two off-diagonal Hessian blocks of a game, as jets.
struct Derivs {
  int d1;
  int m;
  std::vector<Jet> xi;   // (grad_1 L1, grad_2 L2)
  DenseMatrix<Jet> h;    // off-diagonal Hessian, zero diagonal blocks
  std::vector<Jet> g12;  // grad_2 L1 (player 1's loss, opponent block)
  std::vector<Jet> g21;  // grad_1 L2
};

// Needs losses to order r+2; returns xi and the cross terms at order r.
Derivs derivs(const games::Game& g, std::span<const double> theta, int r, bool cross_grads) {
  const auto lj = loss_jets(g, theta, r + 2);
  Derivs d{g.d1, g.dim(), {}, DenseMatrix<Jet>(static_cast<size_t>(g.dim()), static_cast<size_t>(g.dim())), {}, {}};
  std::vector<Jet> first(static_cast<size_t>(d.m));
  for (int i = 0; i < d.m; ++i) {
    first[static_cast<size_t>(i)] = (i < d.d1 ? lj.l1 : lj.l2).derivative(i);
    d.xi.push_back(first[static_cast<size_t>(i)].truncated(r));
  }
  for (int i = 0; i < d.m; ++i) {
    const bool p1 = i < d.d1;
    for (int j = 0; j < d.m; ++j) {
      if ((j < d.d1) == p1) continue;
      d.h(static_cast<size_t>(i), static_cast<size_t>(j)) = first[static_cast<size_t>(i)].derivative(j);
    }
  }
  if (cross_grads) {
    for (int j = d.d1; j < d.m; ++j) d.g12.push_back(lj.l1.derivative(j));
    for (int j = 0; j < d.d1; ++j) d.g21.push_back(lj.l2.derivative(j));
  }
  return d;
}

std::vector<Jet> scaled(const std::vector<Jet>& v, double s) {
  std::vector<Jet> out;
  out.reserve(v.size());
  for (const auto& j : v) out.push_back(j * Jet(s));
  return out;
}

std::string format_double(double v) {
  std::ostringstream os;
  os << v;
  return os.str();
}

int parse_int(std::string_view s, std::string_view whole) {
  int v = 0;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size() || v < 0) {
    throw UsageError("bad order in rule '" + std::string(whole) + "'");
  }
  return v;
}

void check_alpha(double alpha) {
  if (!(alpha > 0.0) || !std::isfinite(alpha)) throw UsageError("look-ahead rate must be > 0");
}

}  // namespace

std::vector<Jet> ZeroField::expand(std::span<const double> theta, int) const {
  check_point(theta);
  return std::vector<Jet>(theta.size(), Jet(0.0));
}

HolaField::HolaField(games::Game game, double alpha, int order, Flavor flavor)
    : UpdateField(std::move(game)), alpha_(alpha), n_(order), flavor_(flavor) {
  check_alpha(alpha);
  if (order < 0) throw UsageError("HOLA order must be >= 0");
}

std::string HolaField::name() const {
  if (n_ == 0) return "naive";
  return "hola:" + std::to_string(n_) + (flavor_ == Flavor::kExact ? ":exact" : ":taylor");
}

std::vector<Jet> HolaField::expand(std::span<const double> theta, int order) const {
  check_point(theta);
  const auto& g = game();
  const int d1 = g.d1;
  const int m = g.dim();
  // Level k lives at order order+n-k and needs inputs one order higher.
  std::vector<Jet> h(static_cast<size_t>(m), Jet(0.0));
  if (flavor_ == Flavor::kExact) {
    const auto x = ad::identity_jets(theta, order + n_ + 1);
    for (int k = 0; k <= n_; ++k) {
      const int ok = order + n_ - k;
      const auto xk = truncate_all(x, ok + 1);
      auto shift2 = xk;  // theta2 + h2
      auto shift1 = xk;  // theta1 + h1
      for (int j = 0; j < m; ++j) {
        if (j >= d1) shift2[static_cast<size_t>(j)] += h[static_cast<size_t>(j)];
        else shift1[static_cast<size_t>(j)] += h[static_cast<size_t>(j)];
      }
      const Jet l1 = games::eval_losses(g, std::span<const Jet>(shift2))[0];
      const Jet l2 = games::eval_losses(g, std::span<const Jet>(shift1))[1];
      std::vector<Jet> next(static_cast<size_t>(m));
      for (int i = 0; i < m; ++i) {
        next[static_cast<size_t>(i)] = (i < d1 ? l1 : l2).derivative(i) * Jet(-alpha_);
      }
      h = std::move(next);
    }
    return h;
  }
  const auto lj = loss_jets(g, theta, order + n_ + 2);
  // Opponent-block gradients of each player's own loss.
  std::vector<Jet> g1(static_cast<size_t>(m));
  for (int j = 0; j < m; ++j) g1[static_cast<size_t>(j)] = (j >= d1 ? lj.l1 : lj.l2).derivative(j);
  for (int k = 0; k <= n_; ++k) {
    const int ok = order + n_ - k;
    Jet s1 = lj.l1.truncated(ok + 1);
    Jet s2 = lj.l2.truncated(ok + 1);
    for (int j = 0; j < m; ++j) {
      const Jet term = g1[static_cast<size_t>(j)].truncated(ok + 1) * h[static_cast<size_t>(j)];
      if (j >= d1) s1 += term;
      else s2 += term;
    }
    std::vector<Jet> next(static_cast<size_t>(m));
    for (int i = 0; i < m; ++i) {
      next[static_cast<size_t>(i)] = (i < d1 ? s1 : s2).derivative(i) * Jet(-alpha_);
    }
    h = std::move(next);
  }
  return h;
}

LookAheadField::LookAheadField(games::Game game, double alpha, int order)
    : UpdateField(std::move(game)), alpha_(alpha), n_(order) {
  check_alpha(alpha);
  if (order < 0) throw UsageError("LookAhead order must be >= 0");
}

std::string LookAheadField::name() const {
  return n_ == 1 ? "lcgd" : "lookahead:" + std::to_string(n_);
}

std::vector<Jet> LookAheadField::expand(std::span<const double> theta, int order) const {
  check_point(theta);
  const auto d = derivs(game(), theta, order, false);
  const auto base = scaled(d.xi, -alpha_);
  auto f = base;
  for (int k = 0; k < n_; ++k) {
    const auto hf = multiply(d.h, f);
    for (std::size_t i = 0; i < f.size(); ++i) f[i] = base[i] - hf[i] * Jet(alpha_);
  }
  return f;
}

CgdField::CgdField(games::Game game, double alpha) : UpdateField(std::move(game)), alpha_(alpha) {
  check_alpha(alpha);
}

std::vector<Jet> CgdField::expand(std::span<const double> theta, int order) const {
  check_point(theta);
  auto d = derivs(game(), theta, order, false);
  const std::size_t m = static_cast<std::size_t>(game().dim());
  DenseMatrix<Jet> sys(m, m);
  Matrix values(m, m);
  for (std::size_t i = 0; i < m; ++i) {
    for (std::size_t j = 0; j < m; ++j) {
      sys(i, j) = i == j ? Jet(1.0) : d.h(i, j) * Jet(alpha_);
      values(i, j) = sys(i, j).value();
    }
  }
  const double cond = condition_number(values);
  if (!(cond <= kMaxCondition)) {
    throw NumericError("cgd: system is singular (condition estimate " + format_double(cond) + ")");
  }
  return scaled(solve_linear(sys, d.xi), -alpha_);
}

PlolaField::PlolaField(games::Game game, double alpha, double p)
    : UpdateField(std::move(game)), alpha_(alpha), p_(p) {
  check_alpha(alpha);
  if (!(p >= 0.0 && p <= 1.0)) throw UsageError("p-LOLA weight must lie in [0, 1]");
}

std::string PlolaField::name() const { return "plola:" + format_double(p_); }

std::vector<Jet> PlolaField::expand(std::span<const double> theta, int order) const {
  check_point(theta);
  const auto d = derivs(game(), theta, order, true);
  const int d1 = game().d1;
  const int m = game().dim();
  const auto hxi = multiply(d.h, d.xi);
  std::vector<Jet> out(static_cast<size_t>(m));
  const double a2p = alpha_ * alpha_ * p_;
  for (int i = 0; i < m; ++i) {
    // chi_i: grad_{i,opp} L^{opp} . grad_opp L^{own}
    Jet chi(0.0);
    const auto& own_opp = i < d1 ? d.g12 : d.g21;
    const int lo = i < d1 ? d1 : 0;
    const int hi = i < d1 ? m : d1;
    for (int j = lo; j < hi; ++j) {
      const Jet& other_loss_first = d.h(static_cast<size_t>(j), static_cast<size_t>(i));
      chi += other_loss_first * own_opp[static_cast<size_t>(j - lo)].truncated(order);
    }
    out[static_cast<size_t>(i)] = (d.xi[static_cast<size_t>(i)] - hxi[static_cast<size_t>(i)] * Jet(alpha_)) *
                                      Jet(-alpha_) + chi * Jet(a2p);
  }
  return out;
}

std::string RuleSpec::to_string() const {
  switch (kind) {
    case RuleKind::kZero: return "zero";
    case RuleKind::kNaive: return "naive";
    case RuleKind::kHola:
      if (order == 0) return "naive";
      if (order == 1) return flavor == Flavor::kExact ? "lola-exact" : "lola-taylor";
      return "hola:" + std::to_string(order) + (flavor == Flavor::kExact ? ":exact" : ":taylor");
    case RuleKind::kLookAhead: return order == 1 ? "lcgd" : "lookahead:" + std::to_string(order);
    case RuleKind::kCgd: return "cgd";
    case RuleKind::kPlola: return "plola:" + format_double(p);
  }
  return "?";
}

RuleSpec parse_rule(std::string_view text) {
  RuleSpec r;
  if (text == "naive") return {RuleKind::kHola, 0, Flavor::kExact, 1.0};
  if (text == "zero") return {RuleKind::kZero, 0, Flavor::kExact, 1.0};
  if (text == "lola-exact" || text == "lola") return {RuleKind::kHola, 1, Flavor::kExact, 1.0};
  if (text == "lola-taylor") return {RuleKind::kHola, 1, Flavor::kTaylor, 1.0};
  if (text == "lcgd") return {RuleKind::kLookAhead, 1, Flavor::kExact, 1.0};
  if (text == "cgd") return {RuleKind::kCgd, 0, Flavor::kExact, 1.0};
  if (text.starts_with("hola:")) {
    auto rest = text.substr(5);
    r.kind = RuleKind::kHola;
    const auto colon = rest.find(':');
    if (colon == std::string_view::npos) {
      r.order = parse_int(rest, text);
      return r;
    }
    r.order = parse_int(rest.substr(0, colon), text);
    const auto flavor = rest.substr(colon + 1);
    if (flavor == "exact") r.flavor = Flavor::kExact;
    else if (flavor == "taylor") r.flavor = Flavor::kTaylor;
    else throw UsageError("bad HOLA flavor in rule '" + std::string(text) + "'");
    return r;
  }
  if (text.starts_with("lookahead:")) {
    r.kind = RuleKind::kLookAhead;
    r.order = parse_int(text.substr(10), text);
    return r;
  }
  if (text.starts_with("plola:")) {
    r.kind = RuleKind::kPlola;
    const auto s = text.substr(6);
    auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), r.p);
    if (ec != std::errc() || ptr != s.data() + s.size() || !(r.p >= 0.0 && r.p <= 1.0)) {
      throw UsageError("bad p in rule '" + std::string(text) + "' (need 0 <= p <= 1)");
    }
    return r;
  }
  throw UsageError("unknown rule '" + std::string(text) +
                   "' (naive|lola-exact|lola-taylor|hola:n:exact|hola:n:taylor|lookahead:n|lcgd|cgd|plola:p|zero)");
}

FieldPtr make_field(const games::Game& game, double alpha, const RuleSpec& rule) {
  switch (rule.kind) {
    case RuleKind::kZero: return std::make_shared<ZeroField>(game);
    case RuleKind::kNaive: return std::make_shared<HolaField>(game, alpha, 0, Flavor::kExact);
    case RuleKind::kHola: return std::make_shared<HolaField>(game, alpha, rule.order, rule.flavor);
    case RuleKind::kLookAhead: return std::make_shared<LookAheadField>(game, alpha, rule.order);
    case RuleKind::kCgd: return std::make_shared<CgdField>(game, alpha);
    case RuleKind::kPlola: return std::make_shared<PlolaField>(game, alpha, rule.p);
  }
  throw UsageError("unknown rule kind");
}

GameDerivatives game_derivatives(const games::Game& g, std::span<const double> theta) {
  const auto d = derivs(g, theta, 0, true);
  const auto m = static_cast<std::size_t>(g.dim());
  GameDerivatives out{Vector(m), Matrix(m, m), Vector(m, 0.0)};
  for (std::size_t i = 0; i < m; ++i) {
    out.xi[i] = d.xi[i].value();
    for (std::size_t j = 0; j < m; ++j) out.h_off(i, j) = d.h(i, j).value();
  }
  const auto d1 = static_cast<std::size_t>(g.d1);
  for (std::size_t i = 0; i < m; ++i) {
    const bool p1 = i < d1;
    const std::size_t lo = p1 ? d1 : 0;
    const std::size_t hi = p1 ? m : d1;
    const auto& own_opp = p1 ? d.g12 : d.g21;
    for (std::size_t j = lo; j < hi; ++j) out.chi[i] += out.h_off(j, i) * own_opp[j - lo].value();
  }
  return out;
}

Vector naive_update(const games::Game& g, double alpha, std::span<const double> theta) {
  return HolaField(g, alpha, 0, Flavor::kExact)(theta);
}
Vector exact_lola_update(const games::Game& g, double alpha, std::span<const double> theta) {
  return HolaField(g, alpha, 1, Flavor::kExact)(theta);
}
Vector taylor_lola_update(const games::Game& g, double alpha, std::span<const double> theta) {
  return HolaField(g, alpha, 1, Flavor::kTaylor)(theta);
}
Vector hola_update(const games::Game& g, double alpha, int n, Flavor flavor,
                   std::span<const double> theta) {
  return HolaField(g, alpha, n, flavor)(theta);
}
Vector lookahead_series_update(const games::Game& g, double alpha, int n,
                               std::span<const double> theta) {
  return LookAheadField(g, alpha, n)(theta);
}
Vector cgd_update(const games::Game& g, double alpha, std::span<const double> theta) {
  return CgdField(g, alpha)(theta);
}
Vector plola_update(const games::Game& g, double alpha, double p, std::span<const double> theta) {
  return PlolaField(g, alpha, p)(theta);
}

}  // namespace cola::shapers

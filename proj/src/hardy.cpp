#include "aikawa/hardy.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "aikawa/distance.hpp"
#include "aikawa/rng.hpp"
#include "aikawa/truncation.hpp"

namespace aikawa {

GridFunction make_grid_function(const GridSet& geometry, double fill) {
  GridFunction u;
  u.shape = geometry.shape();
  u.cell = geometry.cell();
  u.origin = geometry.origin();
  u.values.assign(static_cast<std::size_t>(geometry.cells()), fill);
  return u;
}

double lipschitz_bound(const GridFunction& u) {
  const int dim = static_cast<int>(u.shape.size());
  std::vector<std::int64_t> strides(static_cast<std::size_t>(dim), 1);
  for (int a = dim - 2; a >= 0; --a)
    strides[static_cast<std::size_t>(a)] =
        strides[static_cast<std::size_t>(a + 1)] * u.shape[static_cast<std::size_t>(a + 1)];
  double best = 0.0;
  const std::int64_t n = static_cast<std::int64_t>(u.values.size());
  for (std::int64_t i = 0; i < n; ++i) {
    std::int64_t rem = i;
    for (int a = 0; a < dim; ++a) {
      const std::int64_t c = rem / strides[static_cast<std::size_t>(a)];
      rem %= strides[static_cast<std::size_t>(a)];
      if (c + 1 < u.shape[static_cast<std::size_t>(a)]) {
        const double d = std::abs(u.values[static_cast<std::size_t>(i)] -
                                  u.values[static_cast<std::size_t>(
                                      i + strides[static_cast<std::size_t>(a)])]);
        best = std::max(best, d / u.cell);
      }
    }
  }
  return best;
}

namespace {

void check_function_geometry(const GridSet& space, const GridFunction& u,
                             const char* who) {
  if (u.shape != space.shape() || u.cell != space.cell() ||
      u.origin != space.origin() ||
      static_cast<std::int64_t>(u.values.size()) != space.cells())
    throw std::invalid_argument(std::string(who) + ": function geometry mismatch");
}

std::int64_t isqrt_below(std::int64_t d2) {
  // largest m with m*m < d2 (d2 >= 1)
  std::int64_t m = static_cast<std::int64_t>(
      std::floor(std::sqrt(static_cast<double>(d2 - 1))));
  while ((m + 1) * (m + 1) < d2) ++m;
  while (m > 0 && m * m >= d2) --m;
  return m;
}

// Exact counts of space cells within strict squared index distance d2 of a
// cell. Fast paths for full boxes; general sets fall back to enumeration.
class BallCounter {
 public:
  BallCounter(const GridSet& space, std::int64_t max_d2)
      : space_(space), full_(space.popcount() == space.cells()) {
    const int dim = space.dim();
    if (full_ && dim >= 2 && max_d2 <= (std::int64_t{1} << 24)) {
      // cumulative histogram of |v|^2 over the unclipped offset box
      const std::int64_t L = isqrt_below(max_d2 + 1);
      std::vector<std::int64_t> hist(static_cast<std::size_t>(max_d2 + 1), 0);
      std::vector<std::int64_t> v(static_cast<std::size_t>(dim), -L);
      for (;;) {
        std::int64_t n2 = 0;
        for (int a = 0; a < dim; ++a)
          n2 += v[static_cast<std::size_t>(a)] * v[static_cast<std::size_t>(a)];
        if (n2 <= max_d2) ++hist[static_cast<std::size_t>(n2)];
        int a = dim - 1;
        for (; a >= 0; --a) {
          if (++v[static_cast<std::size_t>(a)] <= L) break;
          v[static_cast<std::size_t>(a)] = -L;
        }
        if (a < 0) break;
      }
      cum_.assign(hist.size(), 0);
      std::int64_t acc = 0;
      for (std::size_t k = 0; k < hist.size(); ++k) {
        cum_[k] = acc;  // cells with |v|^2 < k
        acc += hist[k];
      }
    }
  }

  std::int64_t count(std::int64_t xidx, std::int64_t d2) const {
    const std::int64_t m = isqrt_below(d2);
    const auto c = space_.coords(xidx);
    if (full_ && space_.dim() == 1)
      return std::min(c[0], m) + std::min(space_.shape()[0] - 1 - c[0], m) + 1;
    if (full_ && !cum_.empty() && d2 < static_cast<std::int64_t>(cum_.size())) {
      bool interior = true;
      for (int a = 0; a < space_.dim(); ++a)
        if (c[static_cast<std::size_t>(a)] < m ||
            c[static_cast<std::size_t>(a)] + m >=
                space_.shape()[static_cast<std::size_t>(a)])
          interior = false;
      if (interior) return cum_[static_cast<std::size_t>(d2)];
    }
    // direct enumeration over the clipped offset box
    const int dim = space_.dim();
    std::vector<std::int64_t> lo(static_cast<std::size_t>(dim)),
        hi(static_cast<std::size_t>(dim)), cur(static_cast<std::size_t>(dim));
    for (int a = 0; a < dim; ++a) {
      lo[static_cast<std::size_t>(a)] = std::max<std::int64_t>(
          0, c[static_cast<std::size_t>(a)] - m);
      hi[static_cast<std::size_t>(a)] =
          std::min(space_.shape()[static_cast<std::size_t>(a)] - 1,
                   c[static_cast<std::size_t>(a)] + m);
      cur[static_cast<std::size_t>(a)] = lo[static_cast<std::size_t>(a)];
    }
    std::int64_t n = 0;
    for (;;) {
      std::int64_t n2 = 0;
      for (int a = 0; a < dim; ++a) {
        const std::int64_t d = cur[static_cast<std::size_t>(a)] -
                               c[static_cast<std::size_t>(a)];
        n2 += d * d;
      }
      if (n2 < d2 && (full_ || space_.test(space_.index(cur)))) ++n;
      int a = dim - 1;
      for (; a >= 0; --a) {
        if (++cur[static_cast<std::size_t>(a)] <= hi[static_cast<std::size_t>(a)])
          break;
        cur[static_cast<std::size_t>(a)] = lo[static_cast<std::size_t>(a)];
      }
      if (a < 0) break;
    }
    return n;
  }

 private:
  const GridSet& space_;
  bool full_ = false;
  std::vector<std::int64_t> cum_;
};

}  // namespace

double gagliardo_energy(const GridSet& space, const GridFunction& u,
                        const Ball& ball, const EnergyParams& params,
                        bool* warned) {
  check_function_geometry(space, u, "gagliardo_energy");
  if (!(params.s > 0.0 && params.s < 1.0 && params.p > 1.0))
    throw std::invalid_argument("gagliardo_energy: invalid s or p");
  if (warned) *warned = false;
  const auto cells = ball_cells(space, ball);
  const std::int64_t n = static_cast<std::int64_t>(cells.size());
  if (n < 2) {
    if (warned) *warned = true;
    return 0.0;
  }
  const double h = space.cell();
  const double hn = space.cell_volume();
  const double sp = params.s * params.p;
  const double p = params.p;
  const double two_r = 2.0 * ball.radius / h;
  const std::int64_t max_d2 =
      static_cast<std::int64_t>(std::ceil(two_r * two_r)) + 1;
  const BallCounter counter(space, max_d2);
  const double log_h = std::log(h);

  std::vector<double> partial(static_cast<std::size_t>(n), 0.0);
#pragma omp parallel for schedule(dynamic, 16)
  for (std::int64_t i = 0; i < n; ++i) {
    const std::int64_t ci = cells[static_cast<std::size_t>(i)];
    const double ui = u.values[static_cast<std::size_t>(ci)];
    double acc = 0.0;
    for (std::int64_t j = 0; j < n; ++j) {
      if (j == i) continue;
      const std::int64_t cj = cells[static_cast<std::size_t>(j)];
      const double du = std::abs(ui - u.values[static_cast<std::size_t>(cj)]);
      if (du == 0.0) continue;
      const std::int64_t d2 = space.index_dist2(ci, cj);
      // d^{sp} = exp(sp * (log h + log sqrt(d2)))
      const double dsp =
          std::exp(sp * (log_h + 0.5 * std::log(static_cast<double>(d2))));
      const double dup = p == 2.0 ? du * du : std::pow(du, p);
      acc += dup * hn /
             (dsp * static_cast<double>(counter.count(ci, d2)));
    }
    partial[static_cast<std::size_t>(i)] = acc;
  }
  double total = 0.0;
  for (const double v : partial) total += v;
  return total;
}

double hardy_lhs(const GridSet& space, const GridFunction& u, const GridSet& F,
                 const Ball& ball, const EnergyParams& params) {
  check_function_geometry(space, u, "hardy_lhs");
  if (!F.same_geometry(space))
    throw std::invalid_argument("hardy_lhs: F geometry mismatch");
  if (F.popcount() == 0) throw std::invalid_argument("hardy_lhs: F is empty");
  for (const std::int64_t f : F.set_cells())
    if (u.values[static_cast<std::size_t>(f)] != 0.0)
      throw std::invalid_argument("test function must vanish on F");
  const DistanceField dist = distance_field(space, F);
  const double hn = space.cell_volume();
  const double sp = params.s * params.p;
  double total = 0.0;
  for (const std::int64_t c : ball_cells(space, ball)) {
    if (F.test(c)) continue;
    const double uv = std::abs(u.values[static_cast<std::size_t>(c)]);
    if (uv == 0.0) continue;
    total += std::pow(uv, params.p) * std::pow(dist.value(c), -sp) * hn;
  }
  return total;
}

std::map<int, GridFunction> mazya_levels(const GridFunction& u) {
  double max_abs = 0.0;
  double min_pos = std::numeric_limits<double>::infinity();
  for (const double v : u.values) {
    const double a = std::abs(v);
    if (!std::isfinite(a)) throw std::invalid_argument("mazya_levels: non-finite u");
    max_abs = std::max(max_abs, a);
    if (a > 0.0) min_pos = std::min(min_pos, a);
  }
  std::map<int, GridFunction> family;
  if (max_abs == 0.0) return family;
  // 2^{k_hi} < max|u|; one band below the smallest positive value
  int e_max = 0, e_min = 0;
  const double f_max = std::frexp(max_abs, &e_max);
  std::frexp(min_pos, &e_min);
  const int k_hi = f_max == 0.5 ? e_max - 2 : e_max - 1;
  const int k_lo = e_min - 2;  // one band below the smallest positive value
  for (int k = k_lo; k <= k_hi; ++k) {
    GridFunction uk = u;
    const double scale = std::ldexp(1.0, -k);
    for (double& v : uk.values)
      v = std::clamp(std::abs(v) * scale - 1.0, 0.0, 1.0);
    family.emplace(k, std::move(uk));
  }
  return family;
}

InequalityCertificate mazya_check(const GridSet& space, const GridFunction& u,
                                  const Ball& ball, const EnergyParams& params) {
  InequalityCertificate cert;
  cert.name = "mazya-truncation";
  cert.s = params.s;
  cert.p = params.p;
  cert.resolution = space.cell();
  cert.constant = std::pow(2.0, params.p + 2.0) / (1.0 - std::pow(2.0, -params.p));
  cert.rhs_raw = gagliardo_energy(space, u, ball, params);
  double lhs = 0.0;
  int worst_k = 0;
  double worst_term = -1.0;
  for (const auto& [k, uk] : mazya_levels(u)) {
    const double term = std::pow(2.0, static_cast<double>(k) * params.p) *
                        gagliardo_energy(space, uk, ball, params);
    lhs += term;
    if (term > worst_term) {
      worst_term = term;
      worst_k = k;
    }
  }
  cert.lhs = lhs;
  cert.pass = cert.lhs <= cert.constant * cert.rhs_raw;
  std::ostringstream os;
  os << "dominant level k=" << worst_k;
  cert.worst_case = os.str();
  return cert;
}

InequalityCertificate holefill_check(const GridSet& space, const GridSet& E,
                                     const GridFunction& u,
                                     const std::vector<double>& z, double r,
                                     double sigma, double kappa,
                                     const EnergyParams& params, double cap) {
  if (!(sigma >= 1.0)) throw std::invalid_argument("holefill_check: sigma < 1");
  if (!(kappa >= 2.0)) throw std::invalid_argument("holefill_check: kappa < 2");
  const Truncation t = truncate(space, E, z, r);
  const Ball outer{t.z, sigma * kappa * r};
  const Ball inner{t.z, kappa * r};
  const double lhs = hardy_lhs(space, u, t.F, outer, params);
  const double energy = gagliardo_energy(space, u, outer, params);
  const double inner_lhs = hardy_lhs(space, u, t.F, inner, params);

  // dyadic sweep: C2 >= 1, minimize C1 + C2, ties toward smaller C1
  double best_c1 = -1.0, best_c2 = -1.0;
  for (double c2 = 1.0; c2 <= cap; c2 *= 2.0) {
    for (double c1 = 0.0; c1 <= cap; c1 = c1 == 0.0 ? 1.0 : c1 * 2.0) {
      if (lhs <= c1 * energy + c2 * inner_lhs) {
        if (best_c1 < 0.0 || c1 + c2 < best_c1 + best_c2 ||
            (c1 + c2 == best_c1 + best_c2 && c1 < best_c1)) {
          best_c1 = c1;
          best_c2 = c2;
        }
        break;  // larger c1 only worsens the pair for this c2
      }
    }
  }
  InequalityCertificate cert;
  cert.name = "holefilling";
  cert.s = params.s;
  cert.p = params.p;
  cert.resolution = space.cell();
  cert.lhs = lhs;
  cert.constant = 1.0;
  cert.pass = best_c1 >= 0.0;
  cert.rhs_raw = cert.pass ? best_c1 * energy + best_c2 * inner_lhs : 0.0;
  std::ostringstream os;
  if (cert.pass)
    os << "C1=" << best_c1 << " C2=" << best_c2;
  else
    os << "no constants up to cap=" << cap;
  cert.worst_case = os.str();
  return cert;
}

namespace {

GridFunction hat_function(const GridSet& space, const GridSet& zero_set,
                          double slope) {
  const DistanceField dist = distance_field(space, zero_set);
  GridFunction u = make_grid_function(space);
  for (std::int64_t c = 0; c < space.cells(); ++c)
    u.values[static_cast<std::size_t>(c)] =
        std::min(1.0, slope * dist.value(c));
  return u;
}

}  // namespace

InequalityCertificate hardy_check(const GridSet& space, const GridSet& E,
                                  const std::vector<double>& z, double r,
                                  const EnergyParams& params,
                                  std::int64_t trials, std::uint64_t seed) {
  if (!(params.q > 1.0 && params.q < params.p))
    throw std::invalid_argument("hardy_check: need 1 < q < p");
  const Truncation t = truncate(space, E, z, r);
  const Ball ball{t.z, 8.0 * r};
  const auto cells = ball_cells(space, ball);
  bool all_f = true;
  for (const std::int64_t c : cells)
    if (!t.F.test(c)) {
      all_f = false;
      break;
    }
  if (all_f)
    throw std::invalid_argument(
        "hardy_check: F covers the ball, no admissible test function");

  struct Case {
    std::string label;
    GridFunction u;
  };
  std::vector<Case> battery;
  battery.push_back({"canonical 4 dist(.,E)/r", hat_function(space, E, 4.0 / r)});
  Rng master(seed);
  const auto space_cells = space.set_cells();
  for (std::int64_t i = 0; i < trials; ++i) {
    Rng rng = master.child(static_cast<std::uint64_t>(i) + 1);
    GridSet zero = t.F;
    const std::int64_t extras = 1 + rng.below(3);
    for (std::int64_t k = 0; k < extras; ++k) {
      const std::int64_t c = space_cells[static_cast<std::size_t>(
          rng.below(static_cast<std::int64_t>(space_cells.size())))];
      if (!t.F.test(c)) zero.set(c);
    }
    const double slope = (4.0 / r) * std::pow(2.0, rng.uniform(-1.0, 1.0));
    std::ostringstream os;
    os << "random hat #" << (i + 1);
    battery.push_back({os.str(), hat_function(space, zero, slope)});
  }

  double best = 0.0;
  std::string best_label = "none (all energies zero)";
  std::int64_t degenerate = 0;
  for (const Case& c : battery) {
    const double energy = gagliardo_energy(space, c.u, ball, params);
    if (energy <= 0.0) {
      ++degenerate;
      continue;
    }
    const double quotient = hardy_lhs(space, c.u, t.F, ball, params) / energy;
    if (quotient > best) {
      best = quotient;
      best_label = c.label;
    }
  }
  InequalityCertificate cert;
  cert.name = "local-hardy";
  cert.s = params.s;
  cert.p = params.p;
  cert.q = params.q;
  cert.resolution = space.cell();
  cert.lhs = best;
  cert.rhs_raw = 1.0;
  cert.constant = best;
  cert.pass = std::isfinite(best) && best > 0.0;
  std::ostringstream os;
  os << "max quotient from " << best_label << "; degenerate=" << degenerate;
  cert.worst_case = os.str();
  return cert;
}

InequalityCertificate hardy_stability(const InequalityCertificate& coarse,
                                      const InequalityCertificate& fine) {
  InequalityCertificate cert;
  cert.name = "local-hardy-stability";
  cert.s = fine.s;
  cert.p = fine.p;
  cert.q = fine.q;
  cert.resolution = fine.resolution;
  cert.lhs = std::max(coarse.constant, fine.constant);
  cert.rhs_raw = std::min(coarse.constant, fine.constant);
  cert.constant = 2.0;
  cert.pass = coarse.pass && fine.pass && std::isfinite(cert.lhs) &&
              cert.rhs_raw > 0.0 && cert.lhs <= 2.0 * cert.rhs_raw;
  std::ostringstream os;
  os << "constants " << coarse.constant << " -> " << fine.constant;
  cert.worst_case = os.str();
  return cert;
}

}  // namespace aikawa

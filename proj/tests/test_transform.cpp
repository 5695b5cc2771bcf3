#include <cmath>
#include <map>
#include <vector>

#include "doctest.h"
#include "rcx/transform.hpp"

using namespace rcx;

namespace {
constexpr double kPi = 3.14159265358979323846;

std::array<double, 3> random_triangle_angles(Rng& rng) {
  // three angles in (0,pi) summing to 2*pi, with complementary star angles
  // pi - each summing to pi
  for (;;) {
    double u1 = rng.uniform() * kPi, u2 = rng.uniform() * kPi;
    std::array<double, 3> star = {std::min(u1, u2), std::abs(u2 - u1), kPi - std::max(u1, u2)};
    bool ok = true;
    for (double s : star) ok = ok && s > 0.05 && s < kPi - 0.05;
    if (!ok) continue;
    return {kPi - star[1], kPi - star[2], kPi - star[0]};
  }
}

// tiny enumeration of the RCM on an explicit edge list
std::vector<double> tiny_exact(int nverts, const std::vector<std::array<int, 2>>& edges,
                               const std::vector<double>& p, double q) {
  const int m = static_cast<int>(edges.size());
  std::vector<double> out(1ull << m);
  double z = 0;
  for (uint64_t mask = 0; mask < (1ull << m); ++mask) {
    UnionFind uf(nverts);
    double w = 1.0;
    for (int e = 0; e < m; ++e) {
      if ((mask >> e) & 1ull) {
        w *= p[static_cast<size_t>(e)];
        uf.unite(edges[static_cast<size_t>(e)][0], edges[static_cast<size_t>(e)][1]);
      } else {
        w *= 1 - p[static_cast<size_t>(e)];
      }
    }
    int k = 0;
    for (int v = 0; v < nverts; ++v) k += uf.find(v) == v;
    w *= std::pow(q, k);
    out[mask] = w;
    z += w;
  }
  for (double& w : out) w /= z;
  return out;
}

}  // namespace

TEST_CASE("patch normalisation identities hold on isoradial angle triples") {
  Rng rng = Rng::stream(1, 0);
  for (double q : {1.0, 1.5, 2.0, 3.0, 4.0}) {
    for (int t = 0; t < 200; ++t) {
      StarTrianglePatch patch = StarTrianglePatch::from_triangle_angles(q, random_triangle_angles(rng));
      auto f = patch.forward_zero_open_probs();
      auto r = patch.reverse_all_open_probs();
      CHECK(std::abs(f[0] + f[1] + f[2] + f[3] - 1.0) < 1e-11);
      CHECK(std::abs(r[0] + r[1] + r[2] + r[3] - 1.0) < 1e-11);
    }
  }
}

TEST_CASE("deterministic coupling cases follow the local rules") {
  Rng rng = Rng::stream(2, 0);
  StarTrianglePatch patch =
      StarTrianglePatch::from_triangle_angles(2.0, {2 * kPi / 3, 2 * kPi / 3, 2 * kPi / 3});
  // two triangle edges open -> all star edges open
  CHECK(star_triangle_forward(patch, {1, 1, 0}, rng) == std::array<uint8_t, 3>{1, 1, 1});
  // only BC open -> OB, OC open, OA closed
  CHECK(star_triangle_forward(patch, {0, 1, 0}, rng) == std::array<uint8_t, 3>{0, 1, 1});
  // only AB open -> OA, OB open
  CHECK(star_triangle_forward(patch, {1, 0, 0}, rng) == std::array<uint8_t, 3>{1, 1, 0});
  // only CA open -> OC, OA open
  CHECK(star_triangle_forward(patch, {0, 0, 1}, rng) == std::array<uint8_t, 3>{1, 0, 1});
  // one star edge open -> triangle all closed
  CHECK(star_triangle_reverse(patch, {1, 0, 0}, rng) == std::array<uint8_t, 3>{0, 0, 0});
  // OA, OB open -> only AB open
  CHECK(star_triangle_reverse(patch, {1, 1, 0}, rng) == std::array<uint8_t, 3>{1, 0, 0});
  // OB, OC open -> only BC
  CHECK(star_triangle_reverse(patch, {0, 1, 1}, rng) == std::array<uint8_t, 3>{0, 1, 0});
}

TEST_CASE("forward coupling pushes the triangle law to the star law exactly") {
  Rng rng = Rng::stream(3, 0);
  for (double q : {1.0, 1.5, 2.0, 3.0, 4.0}) {
    StarTrianglePatch patch = StarTrianglePatch::from_triangle_angles(q, random_triangle_angles(rng));
    std::vector<double> mu =
        tiny_exact(3, {{{0, 1}, {1, 2}, {2, 0}}},
                   {patch.triangle_p[0], patch.triangle_p[1], patch.triangle_p[2]}, q);
    std::vector<double> target =
        tiny_exact(4, {{{3, 0}, {3, 1}, {3, 2}}},
                   {patch.star_p[0], patch.star_p[1], patch.star_p[2]}, q);
    std::vector<double> push(8, 0.0);
    auto zero = patch.forward_zero_open_probs();
    for (uint64_t m = 0; m < 8; ++m) {
      int ab = m & 1, bc = (m >> 1) & 1, ca = (m >> 2) & 1;
      int n = ab + bc + ca;
      if (n >= 2)
        push[7] += mu[m];
      else if (n == 1)
        push[ab ? 0b011 : (bc ? 0b110 : 0b101)] += mu[m];
      else {
        push[0] += mu[m] * zero[0];
        push[1] += mu[m] * zero[1];
        push[2] += mu[m] * zero[2];
        push[4] += mu[m] * zero[3];
      }
    }
    double tv = 0;
    for (int s = 0; s < 8; ++s) tv += std::abs(push[static_cast<size_t>(s)] - target[static_cast<size_t>(s)]);
    CHECK(tv / 2 < 1e-14);
  }
}

TEST_CASE("round trip: forward then reverse reproduces the triangle marginal") {
  Rng rng = Rng::stream(4, 0);
  double q = 2.0;
  StarTrianglePatch patch = StarTrianglePatch::from_triangle_angles(q, random_triangle_angles(rng));
  std::vector<double> mu =
      tiny_exact(3, {{{0, 1}, {1, 2}, {2, 0}}},
                 {patch.triangle_p[0], patch.triangle_p[1], patch.triangle_p[2]}, q);
  auto zero = patch.forward_zero_open_probs();
  auto allp = patch.reverse_all_open_probs();
  std::vector<double> out(8, 0.0);
  for (uint64_t m = 0; m < 8; ++m) {
    int ab = m & 1, bc = (m >> 1) & 1, ca = (m >> 2) & 1;
    int n = ab + bc + ca;
    std::vector<std::pair<uint64_t, double>> stars;
    if (n >= 2)
      stars = {{7, 1.0}};
    else if (n == 1)
      stars = {{static_cast<uint64_t>(ab ? 0b011 : (bc ? 0b110 : 0b101)), 1.0}};
    else
      stars = {{0, zero[0]}, {1, zero[1]}, {2, zero[2]}, {4, zero[3]}};
    for (auto [sm, pr] : stars) {
      int k = __builtin_popcountll(sm);
      if (k <= 1) {
        out[0] += mu[m] * pr;
      } else if (k == 2) {
        uint64_t tm = (sm == 0b011) ? 1 : (sm == 0b110 ? 2 : 4);
        out[tm] += mu[m] * pr;
      } else {
        out[7] += mu[m] * pr * allp[0];
        out[0b011] += mu[m] * pr * allp[3];  // CA closed: AB,BC open
        out[0b110] += mu[m] * pr * allp[1];  // AB closed: BC,CA
        out[0b101] += mu[m] * pr * allp[2];  // BC closed: AB,CA
      }
    }
  }
  double tv = 0;
  for (int s = 0; s < 8; ++s) tv += std::abs(out[static_cast<size_t>(s)] - mu[static_cast<size_t>(s)]);
  CHECK(tv / 2 < 1e-12);
}

TEST_CASE("clean diamond sweep pushes the box law forward exactly") {
  for (double q : {1.0, 2.0, 4.0}) {
    for (bool left : {true, false}) {
      double a = left ? kPi / 3 : kPi / 2;
      double b = left ? kPi / 2 : kPi / 3;
      IsoradialLattice lat = build_lattice({{a, b}}, 3, Topology::Box);
      REQUIRE(lat.edge_count() == 8);
      REQUIRE(sweep_is_clean(lat, 1));
      TrackAngles sw;
      sw.angles = {b, a};
      IsoradialLattice lat2 = build_lattice(sw, 3, Topology::Box);
      ModelParams params(q);
      BoundaryConditions bc = BoundaryConditions::free(lat);
      std::vector<double> mu = exact_distribution(lat, bc, params);
      std::vector<double> mu2 = exact_distribution(lat2, bc, params);
      std::vector<double> push(mu2.size(), 0.0);
      Configuration cfg(lat);
      for (uint64_t m = 0; m < mu.size(); ++m) {
        for (int e = 0; e < lat.edge_count(); ++e) cfg.open[static_cast<size_t>(e)] = (m >> e) & 1;
        for (auto& [ocfg, pr] : track_exchange_outcomes(lat, cfg, params, 1)) {
          uint64_t om = 0;
          for (int e = 0; e < lat.edge_count(); ++e)
            om |= static_cast<uint64_t>(ocfg.open[static_cast<size_t>(e)]) << e;
          push[om] += mu[m] * pr;
        }
      }
      double tv = 0;
      for (size_t s = 0; s < mu2.size(); ++s) tv += std::abs(push[s] - mu2[s]);
      CHECK(tv / 2 < 1e-12);
    }
  }
}

TEST_CASE("clean sweep on a taller box preserves the law and off-line connectivity") {
  double q = 2.0;
  IsoradialLattice lat = build_lattice({{kPi / 3, kPi / 2, 1.2}}, 3, Topology::Box);
  REQUIRE(lat.edge_count() == 12);
  TrackAngles sw;
  sw.angles = {kPi / 2, kPi / 3, 1.2};
  IsoradialLattice lat2 = build_lattice(sw, 3, Topology::Box);
  ModelParams params(q);
  BoundaryConditions bc = BoundaryConditions::free(lat);
  std::vector<double> mu = exact_distribution(lat, bc, params);
  std::vector<double> mu2 = exact_distribution(lat2, bc, params);
  std::vector<double> push(mu2.size(), 0.0);
  Configuration cfg(lat);
  for (uint64_t m = 0; m < mu.size(); ++m) {
    for (int e = 0; e < lat.edge_count(); ++e) cfg.open[static_cast<size_t>(e)] = (m >> e) & 1;
    for (auto& [ocfg, pr] : track_exchange_outcomes(lat, cfg, params, 1)) {
      uint64_t om = 0;
      for (int e = 0; e < lat.edge_count(); ++e)
        om |= static_cast<uint64_t>(ocfg.open[static_cast<size_t>(e)]) << e;
      push[om] += mu[m] * pr;
    }
  }
  double tv = 0;
  for (size_t s = 0; s < mu2.size(); ++s) tv += std::abs(push[s] - mu2[s]);
  CHECK(tv / 2 < 1e-12);

  // connectivity off the middle line (line 1) is preserved pathwise
  Rng rng = Rng::stream(17, 0);
  std::vector<int> off_line;
  for (int v = 0; v < lat.vertex_count(); ++v)
    if (lat.vertex(v).line != 1) off_line.push_back(v);
  for (int trial = 0; trial < 300; ++trial) {
    for (int e = 0; e < lat.edge_count(); ++e) cfg.open[static_cast<size_t>(e)] = rng.bernoulli(0.5);
    TrackExchangeResult res = track_exchange(lat, cfg, bc, params, 1, rng);
    res.cfg.lattice = &res.lattice;
    CHECK(res.exact);
    CHECK(res.method == ExchangeMethod::DiamondSweep);
    for (size_t x = 0; x < off_line.size(); ++x)
      for (size_t y = x + 1; y < off_line.size(); ++y) {
        bool before = connected(cfg, bc, off_line[x], off_line[y]);
        bool after = connected(res.cfg, bc, off_line[x], off_line[y]);
        CHECK(before == after);
      }
  }
}

TEST_CASE("torus exchange resamples exactly and keeps the boundary partition") {
  double q = 2.0;
  IsoradialLattice lat = build_lattice({{kPi / 3, kPi / 2}}, 4, Topology::Torus);
  ModelParams params(q);
  BoundaryConditions bc = BoundaryConditions::free(lat);
  Rng rng = Rng::stream(23, 0);
  Configuration cfg(lat);
  for (int trial = 0; trial < 100; ++trial) {
    for (int e = 0; e < lat.edge_count(); ++e) cfg.open[static_cast<size_t>(e)] = rng.bernoulli(0.5);
    auto partition = [&](const Configuration& c, const IsoradialLattice& l) {
      UnionFind uf(l.vertex_count());
      for (int e = 0; e < l.edge_count(); ++e)
        if (c.is_open(e)) uf.unite(l.edge(e).u, l.edge(e).v);
      std::vector<int> lab;
      std::vector<int> roots;
      for (int v : l.line_vertices(0)) {
        int r = uf.find(v);
        int id = -1;
        for (size_t t = 0; t < roots.size(); ++t)
          if (roots[t] == r) id = static_cast<int>(t);
        if (id < 0) {
          id = static_cast<int>(roots.size());
          roots.push_back(r);
        }
        lab.push_back(id);
      }
      return lab;
    };
    auto before = partition(cfg, lat);
    TrackExchangeResult res = track_exchange(lat, cfg, bc, params, 1, rng);
    res.cfg.lattice = &res.lattice;
    CHECK(res.method == ExchangeMethod::ConditionalResample);
    CHECK(res.exact);
    CHECK(partition(res.cfg, res.lattice) == before);
  }
}

TEST_CASE("equal angles are a flagged no-op and bad indices throw") {
  IsoradialLattice lat = build_lattice(TrackAngles::uniform(kPi / 3, 2), 3, Topology::Box);
  ModelParams params(1.0);
  BoundaryConditions bc = BoundaryConditions::free(lat);
  Configuration cfg(lat);
  Rng rng = Rng::stream(1, 1);
  TrackExchangeResult res = track_exchange(lat, cfg, bc, params, 1, rng);
  CHECK(res.method == ExchangeMethod::NoOp);
  CHECK(res.cfg.open == cfg.open);
  CHECK_THROWS(track_exchange(lat, cfg, bc, params, 0, rng));
  CHECK_THROWS(track_exchange(lat, cfg, bc, params, 2, rng));
}

TEST_CASE("coupling schedule follows the descent formula") {
  // j(t) = N + (2N+1) floor(t/2N) - t
  CHECK(coupling_schedule(2, 0) == 2);
  CHECK(coupling_schedule(2, 1) == 1);
  CHECK(coupling_schedule(2, 2) == 0);
  CHECK(coupling_schedule(2, 3) == -1);
  CHECK(coupling_schedule(2, 4) == 3);
  CHECK(coupling_schedule(2, 5) == 2);
  CHECK(coupling_schedule(2, 7) == 0);
  CHECK(coupling_schedule(2, 8) == 4);
  CHECK(coupling_total_steps(2, kPi / 3) == 4 * 5);
}

TEST_CASE("coupling v1 starts from the mixed lattice and stays exact on the cylinder") {
  CouplingV1Options opt;
  opt.N = 1;
  opt.alpha = kPi / 3;
  opt.width = 3;
  opt.seed = 5;
  opt.record_every = 1;
  opt.mcmc_sweeps = 4;
  opt.mcmc_burn_in = 4;
  CouplingV1Result res = coupling_v1(opt);
  REQUIRE(!res.trajectory.empty());
  CHECK(res.inexact_steps == 0);
  const IsoradialLattice& l0 = res.trajectory.front().lattice;
  for (int t = 0; t < l0.tracks(); ++t) {
    double expect = (t >= 2 * opt.N) ? opt.alpha : kPi / 2;
    CHECK(l0.angle(t) == doctest::Approx(expect));
  }
  CHECK(res.total_steps == coupling_total_steps(opt.N, opt.alpha));
  CHECK(static_cast<int>(res.trajectory.size()) == res.total_steps + 1);
  CouplingV1Result res2 = coupling_v1(opt);
  for (size_t s = 0; s < res.trajectory.size(); ++s)
    CHECK(res.trajectory[s].cfg.open == res2.trajectory[s].cfg.open);
}

#include "rcx/rcm.hpp"

#include <cmath>
#include <cstdio>
#include <stdexcept>

#include "json.hpp"

namespace rcx {

namespace {
constexpr double kPi = 3.14159265358979323846;
}

double critical_point(double q) {
  if (!(q > 0.0)) throw std::invalid_argument("q must be positive");
  double s = std::sqrt(q);
  return s / (1.0 + s);
}

double isoradial_weight(double q, double theta) {
  if (!(theta > 0.0 && theta < kPi)) throw std::invalid_argument("theta outside (0,pi)");
  if (!(q >= 1.0 && q <= 4.0)) throw std::invalid_argument("q outside [1,4]");
  if (q == 4.0) return (2 * kPi - 2 * theta) / (2 * kPi - theta);
  double r = std::acos(std::sqrt(q) / 2.0) / kPi;
  double s = std::sqrt(q);
  return s * std::sin(r * (kPi - theta)) / (std::sin(r * theta) + s * std::sin(r * (kPi - theta)));
}

ModelParams::ModelParams(double q_) : q(q_) {
  if (!(q >= 1.0 && q <= 4.0)) throw std::invalid_argument("q outside [1,4]");
  r = std::acos(std::sqrt(q) / 2.0) / kPi;
}

int Configuration::open_count() const {
  int n = 0;
  for (uint8_t b : open) n += b;
  return n;
}

BoundaryConditions BoundaryConditions::free(const IsoradialLattice& lat) {
  BoundaryConditions bc;
  bc.cls.assign(static_cast<size_t>(lat.vertex_count()), -1);
  return bc;
}

BoundaryConditions BoundaryConditions::wired(const IsoradialLattice& lat) {
  BoundaryConditions bc;
  bc.cls.assign(static_cast<size_t>(lat.vertex_count()), -1);
  for (int v : lat.boundary_vertices()) bc.cls[static_cast<size_t>(v)] = 0;
  return bc;
}

bool BoundaryConditions::trivial() const {
  for (int c : cls)
    if (c >= 0) return false;
  return true;
}

UnionFind components(const Configuration& cfg, const BoundaryConditions& bc) {
  const IsoradialLattice& lat = *cfg.lattice;
  UnionFind uf(lat.vertex_count());
  for (int e = 0; e < lat.edge_count(); ++e)
    if (cfg.is_open(e)) uf.unite(lat.edge(e).u, lat.edge(e).v);
  if (!bc.cls.empty()) {
    std::vector<int> rep;
    for (int v = 0; v < lat.vertex_count(); ++v) {
      int c = bc.cls[static_cast<size_t>(v)];
      if (c < 0) continue;
      if (c >= static_cast<int>(rep.size())) rep.resize(static_cast<size_t>(c) + 1, -1);
      if (rep[static_cast<size_t>(c)] < 0)
        rep[static_cast<size_t>(c)] = v;
      else
        uf.unite(rep[static_cast<size_t>(c)], v);
    }
  }
  return uf;
}

int cluster_count(const Configuration& cfg, const BoundaryConditions& bc) {
  UnionFind uf = components(cfg, bc);
  int n = cfg.lattice->vertex_count();
  int k = 0;
  for (int v = 0; v < n; ++v) k += (uf.find(v) == v);
  return k;
}

bool connected(const Configuration& cfg, const BoundaryConditions& bc, int u, int v) {
  UnionFind uf = components(cfg, bc);
  return uf.find(u) == uf.find(v);
}

std::vector<double> edge_weights(const IsoradialLattice& lat, double q) {
  std::vector<double> p(static_cast<size_t>(lat.edge_count()));
  for (int e = 0; e < lat.edge_count(); ++e)
    p[static_cast<size_t>(e)] = isoradial_weight(q, lat.edge(e).theta);
  return p;
}

double rcm_unnormalized_weight(const Configuration& cfg, const BoundaryConditions& bc,
                               const ModelParams& params) {
  const IsoradialLattice& lat = *cfg.lattice;
  std::vector<double> p = edge_weights(lat, params.q);
  double w = 1.0;
  for (int e = 0; e < lat.edge_count(); ++e)
    w *= cfg.is_open(e) ? p[static_cast<size_t>(e)] : 1.0 - p[static_cast<size_t>(e)];
  return w * std::pow(params.q, cluster_count(cfg, bc));
}

std::vector<double> exact_distribution(const IsoradialLattice& lat, const BoundaryConditions& bc,
                                       const ModelParams& params) {
  const int ne = lat.edge_count();
  if (ne > 24) throw std::invalid_argument("exact_distribution capped at 24 edges");
  std::vector<double> p = edge_weights(lat, params.q);
  const uint64_t total = 1ull << ne;
  std::vector<double> out(total);
  Configuration cfg(lat);
  double z = 0.0;
  for (uint64_t m = 0; m < total; ++m) {
    double w = 1.0;
    for (int e = 0; e < ne; ++e) {
      bool o = (m >> e) & 1ull;
      cfg.open[static_cast<size_t>(e)] = o ? 1 : 0;
      w *= o ? p[static_cast<size_t>(e)] : 1.0 - p[static_cast<size_t>(e)];
    }
    w *= std::pow(params.q, cluster_count(cfg, bc));
    out[m] = w;
    z += w;
  }
  for (double& w : out) w /= z;
  return out;
}

namespace {

// connectivity of (u,v) in w minus `skip`, through open edges and wirings
bool connected_avoiding(const Configuration& cfg, const BoundaryConditions& bc, int u, int v,
                        int skip) {
  const IsoradialLattice& lat = *cfg.lattice;
  if (u == v) return true;
  std::vector<int> cls_rep;  // class -> representative already seen
  std::vector<uint8_t> seen(static_cast<size_t>(lat.vertex_count()), 0);
  std::vector<int> stack{u};
  seen[static_cast<size_t>(u)] = 1;
  std::vector<uint8_t> cls_seen;
  auto push_class = [&](int c, std::vector<int>& st) {
    if (c < 0) return;
    if (c >= static_cast<int>(cls_seen.size())) cls_seen.resize(static_cast<size_t>(c) + 1, 0);
    if (cls_seen[static_cast<size_t>(c)]) return;
    cls_seen[static_cast<size_t>(c)] = 1;
    // visit all members of the class
    for (int w = 0; w < lat.vertex_count(); ++w)
      if (!seen[static_cast<size_t>(w)] && !bc.cls.empty() &&
          bc.cls[static_cast<size_t>(w)] == c) {
        seen[static_cast<size_t>(w)] = 1;
        st.push_back(w);
      }
  };
  if (!bc.cls.empty()) push_class(bc.cls[static_cast<size_t>(u)], stack);
  while (!stack.empty()) {
    int x = stack.back();
    stack.pop_back();
    if (x == v) return true;
    for (int e : lat.incident(x)) {
      if (e == skip || !cfg.is_open(e)) continue;
      const Edge& ed = lat.edge(e);
      int y = (ed.u == x) ? ed.v : ed.u;
      if (!seen[static_cast<size_t>(y)]) {
        seen[static_cast<size_t>(y)] = 1;
        stack.push_back(y);
        if (!bc.cls.empty()) push_class(bc.cls[static_cast<size_t>(y)], stack);
      }
    }
    if (seen[static_cast<size_t>(v)]) return true;
  }
  return seen[static_cast<size_t>(v)] != 0;
}

}  // namespace

void heat_bath_step(Configuration& cfg, const BoundaryConditions& bc, const ModelParams& params,
                    const std::vector<double>& p, Rng& rng, int edge) {
  const Edge& ed = cfg.lattice->edge(edge);
  double pe = p[static_cast<size_t>(edge)];
  double prob;
  if (params.q == 1.0) {
    prob = pe;
  } else {
    bool conn = connected_avoiding(cfg, bc, ed.u, ed.v, edge);
    prob = conn ? pe : pe / (pe + params.q * (1.0 - pe));
  }
  cfg.set(edge, rng.bernoulli(prob));
}

void heat_bath_sweep(Configuration& cfg, const BoundaryConditions& bc, const ModelParams& params,
                     const std::vector<double>& p, Rng& rng) {
  for (int e = 0; e < cfg.lattice->edge_count(); ++e) heat_bath_step(cfg, bc, params, p, rng, e);
}

void swendsen_wang_step(Configuration& cfg, const BoundaryConditions& bc, int q_int,
                        const std::vector<double>& p, Rng& rng) {
  if (q_int < 1 || q_int > 4) throw std::invalid_argument("swendsen_wang needs integer q in 1..4");
  const IsoradialLattice& lat = *cfg.lattice;
  UnionFind uf = components(cfg, bc);
  // one uniform color per cluster root; wired classes share through the union
  std::vector<int> color(static_cast<size_t>(lat.vertex_count()), -1);
  for (int v = 0; v < lat.vertex_count(); ++v) {
    int r = uf.find(v);
    if (color[static_cast<size_t>(r)] < 0)
      color[static_cast<size_t>(r)] = static_cast<int>(rng.below(static_cast<uint64_t>(q_int)));
    color[static_cast<size_t>(v)] = color[static_cast<size_t>(r)];
  }
  for (int e = 0; e < lat.edge_count(); ++e) {
    const Edge& ed = lat.edge(e);
    bool same = color[static_cast<size_t>(ed.u)] == color[static_cast<size_t>(ed.v)];
    cfg.set(e, same && rng.bernoulli(p[static_cast<size_t>(e)]));
  }
}

int64_t default_burn_in(const IsoradialLattice& lat) {
  int linear = std::max(lat.width(), lat.tracks());
  return 64ll * linear;
}

Configuration sample_mcmc(const IsoradialLattice& lat, const BoundaryConditions& bc,
                          const ModelParams& params, const McmcOptions& opt, uint64_t seed,
                          uint64_t chain_id) {
  if (opt.sweeps <= 0) throw std::invalid_argument("sweeps must be positive");
  Rng rng = Rng::stream(seed, chain_id);
  Configuration cfg(lat);
  std::vector<double> p = edge_weights(lat, params.q);
  // start from an independent-bond draw
  for (int e = 0; e < lat.edge_count(); ++e) cfg.set(e, rng.bernoulli(p[static_cast<size_t>(e)]));
  int64_t burn = opt.burn_in >= 0 ? opt.burn_in : default_burn_in(lat);
  int q_int = static_cast<int>(params.q);
  bool sw = opt.use_swendsen_wang && std::abs(params.q - q_int) < 1e-12;
  for (int64_t t = 0; t < burn + opt.sweeps; ++t) {
    if (sw)
      swendsen_wang_step(cfg, bc, q_int, p, rng);
    else
      heat_bath_sweep(cfg, bc, params, p, rng);
  }
  return cfg;
}

std::vector<int> edwards_sokal_color(const Configuration& cfg, int q_int, Rng& rng) {
  if (q_int < 2 || q_int > 4) throw std::invalid_argument("edwards_sokal needs q in {2,3,4}");
  const IsoradialLattice& lat = *cfg.lattice;
  BoundaryConditions bc = BoundaryConditions::free(lat);
  UnionFind uf = components(cfg, bc);
  std::vector<int> color(static_cast<size_t>(lat.vertex_count()), -1);
  for (int v = 0; v < lat.vertex_count(); ++v) {
    int r = uf.find(v);
    if (color[static_cast<size_t>(r)] < 0)
      color[static_cast<size_t>(r)] = 1 + static_cast<int>(rng.below(static_cast<uint64_t>(q_int)));
    color[static_cast<size_t>(v)] = color[static_cast<size_t>(r)];
  }
  return color;
}

std::string Configuration::to_json(double q, uint64_t seed) const {
  nlohmann::json j;
  // cheap structural hash of the lattice description
  std::hash<std::string> h;
  j["lattice_hash"] = h(lattice->to_json());
  j["q"] = q;
  j["seed"] = seed;
  j["edges"] = lattice->edge_count();
  std::string hex;
  for (size_t i = 0; i < open.size(); i += 4) {
    int nib = 0;
    for (size_t b = 0; b < 4 && i + b < open.size(); ++b) nib |= (open[i + b] ? 1 : 0) << b;
    hex += "0123456789abcdef"[nib];
  }
  j["bits"] = hex;
  return j.dump();
}

std::string marginals_csv(const std::vector<double>& freq) {
  std::string out = "edge,open_frequency\n";
  char buf[64];
  for (size_t i = 0; i < freq.size(); ++i) {
    std::snprintf(buf, sizeof buf, "%zu,%.17g\n", i, freq[i]);
    out += buf;
  }
  return out;
}

}  // namespace rcx

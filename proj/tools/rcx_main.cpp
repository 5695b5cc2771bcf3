// Command-line front end: sampling, exact tables, track exchange, the
// coupling trajectory, loop/homotopy extraction, transfer-matrix spectra,
// and the scripted experiments.

#include <cstdio>
#include <fstream>
#include <iostream>
#include <string>

#include "CLI11.hpp"
#include "json.hpp"
#include "rcx/harness.hpp"
#include "rcx/homotopy.hpp"
#include "rcx/loops.hpp"
#include "rcx/rcm.hpp"
#include "rcx/sixvertex.hpp"
#include "rcx/transform.hpp"

namespace {

constexpr double kPi = 3.14159265358979323846;

rcx::IsoradialLattice lattice_from_flags(double alpha, int width, int tracks,
                                         const std::string& topology) {
  return rcx::build_lattice(rcx::TrackAngles::uniform(alpha, tracks), width,
                            rcx::topology_from_name(topology));
}

void write_out(const std::string& path, const std::string& text) {
  if (path.empty() || path == "-") {
    std::cout << text;
    return;
  }
  std::ofstream out(path, std::ios::binary);
  out << text;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"random-cluster toolkit on isoradial rectangular lattices"};
  app.require_subcommand(1);

  // ---- rcm ----
  auto* rcm_cmd = app.add_subcommand("rcm", "random-cluster sampling and exact tables");
  rcm_cmd->require_subcommand(1);

  double alpha = kPi / 2, q = 1.0;
  int width = 6, tracks = 6;
  std::string topology = "box", out_path = "-", bc_name = "free";
  uint64_t seed = 1;
  int64_t sweeps = 16, burn_in = -1;

  auto* rcm_sample = rcm_cmd->add_subcommand("sample", "heat-bath MCMC sample");
  rcm_sample->add_option("--alpha", alpha, "track angle");
  rcm_sample->add_option("--q", q, "cluster weight");
  rcm_sample->add_option("--width", width, "vertices per line");
  rcm_sample->add_option("--tracks", tracks, "number of tracks");
  rcm_sample->add_option("--topology", topology, "box|cylinder|torus");
  rcm_sample->add_option("--bc", bc_name, "free|wired");
  rcm_sample->add_option("--sweeps", sweeps, "sweeps after burn-in");
  rcm_sample->add_option("--burn-in", burn_in, "burn-in sweeps (-1: 64 per linear size)");
  rcm_sample->add_option("--seed", seed, "rng seed");
  rcm_sample->add_option("--out", out_path, "output path or -");
  rcm_sample->callback([&] {
    rcx::IsoradialLattice lat = lattice_from_flags(alpha, width, tracks, topology);
    rcx::BoundaryConditions bc = bc_name == "wired" ? rcx::BoundaryConditions::wired(lat)
                                                    : rcx::BoundaryConditions::free(lat);
    rcx::ModelParams params(q);
    rcx::McmcOptions opt;
    opt.sweeps = sweeps;
    opt.burn_in = burn_in;
    rcx::Configuration cfg = rcx::sample_mcmc(lat, bc, params, opt, seed);
    write_out(out_path, cfg.to_json(q, seed) + "\n");
  });

  auto* rcm_exact = rcm_cmd->add_subcommand("exact", "exact distribution (<= 24 edges)");
  rcm_exact->add_option("--alpha", alpha, "track angle");
  rcm_exact->add_option("--q", q, "cluster weight");
  rcm_exact->add_option("--width", width, "vertices per line");
  rcm_exact->add_option("--tracks", tracks, "number of tracks");
  rcm_exact->add_option("--topology", topology, "box|cylinder|torus");
  rcm_exact->add_option("--bc", bc_name, "free|wired");
  rcm_exact->add_option("--out", out_path, "output path or -");
  rcm_exact->callback([&] {
    rcx::IsoradialLattice lat = lattice_from_flags(alpha, width, tracks, topology);
    rcx::BoundaryConditions bc = bc_name == "wired" ? rcx::BoundaryConditions::wired(lat)
                                                    : rcx::BoundaryConditions::free(lat);
    std::vector<double> table = rcx::exact_distribution(lat, bc, rcx::ModelParams(q));
    std::string csv = "config,probability\n";
    char buf[64];
    for (size_t m = 0; m < table.size(); ++m) {
      std::snprintf(buf, sizeof buf, "%zu,%.17g\n", m, table[m]);
      csv += buf;
    }
    write_out(out_path, csv);
  });

  // ---- transform ----
  auto* tr_cmd = app.add_subcommand("transform", "star-triangle based transformations");
  tr_cmd->require_subcommand(1);
  int track_i = 1;
  bool allow_approx = false;
  auto* tr_x = tr_cmd->add_subcommand("track-exchange", "exchange tracks i-1 and i");
  tr_x->add_option("--alpha", alpha, "angle of track i");
  double beta_flag = kPi / 2;
  tr_x->add_option("--beta", beta_flag, "angle of the other tracks");
  tr_x->add_option("--q", q, "cluster weight");
  tr_x->add_option("--width", width, "vertices per line");
  tr_x->add_option("--tracks", tracks, "number of tracks");
  tr_x->add_option("--topology", topology, "box|cylinder|torus");
  tr_x->add_option("--i", track_i, "middle line index");
  tr_x->add_option("--sweeps", sweeps, "MCMC sweeps for the input sample");
  tr_x->add_option("--seed", seed, "rng seed");
  tr_x->add_flag("--allow-approx-ends", allow_approx, "permit the thick-end sweep");
  tr_x->add_option("--out", out_path, "output path or -");
  tr_x->callback([&] {
    rcx::IsoradialLattice lat = rcx::build_lattice(
        rcx::TrackAngles::one_special(alpha, beta_flag, track_i, tracks), width,
        rcx::topology_from_name(topology));
    rcx::BoundaryConditions bc = rcx::BoundaryConditions::free(lat);
    rcx::ModelParams params(q);
    rcx::McmcOptions opt;
    opt.sweeps = sweeps;
    rcx::Configuration cfg = rcx::sample_mcmc(lat, bc, params, opt, seed);
    rcx::Rng rng = rcx::Rng::stream(seed, 7);
    rcx::TrackExchangeOptions xopt;
    xopt.allow_approximate = allow_approx;
    rcx::TrackExchangeResult res = rcx::track_exchange(lat, cfg, bc, params, track_i, rng, xopt);
    res.cfg.lattice = &res.lattice;
    nlohmann::json j;
    j["lattice"] = nlohmann::json::parse(res.lattice.to_json());
    j["config"] = nlohmann::json::parse(res.cfg.to_json(q, seed));
    j["exact"] = res.exact;
    write_out(out_path, j.dump(2) + "\n");
  });

  // ---- coupling ----
  auto* cp_cmd = app.add_subcommand("coupling", "the track-descent coupling");
  cp_cmd->require_subcommand(1);
  auto* cp_v1 = cp_cmd->add_subcommand("v1", "run the version-1 coupling trajectory");
  int Nc = 2, record_every = 1;
  cp_v1->add_option("--N", Nc, "half-height of the target window");
  cp_v1->add_option("--alpha", alpha, "angle brought down");
  cp_v1->add_option("--q", q, "cluster weight");
  cp_v1->add_option("--width", width, "vertices per line");
  cp_v1->add_option("--seed", seed, "rng seed");
  cp_v1->add_option("--record-every", record_every, "snapshot cadence");
  cp_v1->add_option("--topology", topology, "box|cylinder");
  cp_v1->add_option("--out", out_path, "output path or -");
  cp_v1->callback([&] {
    rcx::CouplingV1Options opt;
    opt.N = Nc;
    opt.alpha = alpha;
    opt.q = q;
    opt.width = width;
    opt.seed = seed;
    opt.record_every = record_every;
    opt.topology = rcx::topology_from_name(topology == "box" ? "box" : "cylinder");
    rcx::CouplingV1Result res = rcx::coupling_v1(opt);
    nlohmann::json j;
    j["total_steps"] = res.total_steps;
    j["inexact_steps"] = res.inexact_steps;
    nlohmann::json traj = nlohmann::json::array();
    for (const auto& s : res.trajectory) {
      nlohmann::json js;
      js["t"] = s.t;
      js["j"] = s.j;
      js["lattice"] = nlohmann::json::parse(s.lattice.to_json());
      js["config"] = nlohmann::json::parse(s.cfg.to_json(q, seed));
      traj.push_back(js);
    }
    j["trajectory"] = traj;
    write_out(out_path, j.dump(2) + "\n");
  });

  // ---- loops ----
  auto* lp_cmd = app.add_subcommand("loops", "loop representation");
  lp_cmd->require_subcommand(1);
  auto* lp_trace = lp_cmd->add_subcommand("trace", "trace the medial loops of a sample");
  lp_trace->add_option("--alpha", alpha, "track angle");
  lp_trace->add_option("--q", q, "cluster weight");
  lp_trace->add_option("--width", width, "vertices per line");
  lp_trace->add_option("--tracks", tracks, "number of tracks");
  lp_trace->add_option("--sweeps", sweeps, "MCMC sweeps");
  lp_trace->add_option("--seed", seed, "rng seed");
  lp_trace->add_option("--out", out_path, "output path or -");
  lp_trace->callback([&] {
    rcx::IsoradialLattice lat = lattice_from_flags(alpha, width, tracks, "box");
    rcx::BoundaryConditions bc = rcx::BoundaryConditions::free(lat);
    rcx::McmcOptions opt;
    opt.sweeps = sweeps;
    rcx::Configuration cfg = rcx::sample_mcmc(lat, bc, rcx::ModelParams(q), opt, seed);
    rcx::LoopFamily fam = rcx::trace_loops(cfg);
    write_out(out_path, fam.to_json() + "\n");
  });

  // ---- homotopy ----
  auto* hm_cmd = app.add_subcommand("homotopy", "homotopy encodings");
  hm_cmd->require_subcommand(1);
  auto* hm_class = hm_cmd->add_subcommand("class", "classes of the traced loops of a sample");
  double eta = 0.37;
  hm_class->add_option("--alpha", alpha, "track angle");
  hm_class->add_option("--q", q, "cluster weight");
  hm_class->add_option("--width", width, "vertices per line");
  hm_class->add_option("--tracks", tracks, "number of tracks");
  hm_class->add_option("--eta", eta, "puncture spacing");
  hm_class->add_option("--sweeps", sweeps, "MCMC sweeps");
  hm_class->add_option("--seed", seed, "rng seed");
  hm_class->add_option("--out", out_path, "output path or -");
  hm_class->callback([&] {
    rcx::IsoradialLattice lat = lattice_from_flags(alpha, width, tracks, "box");
    rcx::BoundaryConditions bc = rcx::BoundaryConditions::free(lat);
    rcx::McmcOptions opt;
    opt.sweeps = sweeps;
    rcx::Configuration cfg = rcx::sample_mcmc(lat, bc, rcx::ModelParams(q), opt, seed);
    rcx::LoopFamily fam = rcx::trace_loops(cfg);
    rcx::PunctureGrid grid(eta);
    nlohmann::json j;
    nlohmann::json classes = nlohmann::json::array();
    for (int f = 0; f < 2; ++f)
      for (const rcx::Loop& l : (f ? fam.f1 : fam.f0)) {
        if (l.boundary) continue;
        nlohmann::json e;
        e["family"] = f;
        e["surrounded"] = rcx::punctures_surrounded(l.points, grid);
        e["word"] = rcx::homotopy_class(l.points, grid).letters;
        classes.push_back(e);
      }
    j["classes"] = classes;
    write_out(out_path, j.dump(2) + "\n");
  });

  // ---- tm-eig ----
  auto* tm = app.add_subcommand("tm-eig", "transfer-matrix leading eigenvalue");
  int N6 = 8, ksec = 0;
  double theta = kPi / 2;
  bool sweep_k = false;
  tm->add_option("--N", N6, "torus width (even, <= 16)");
  tm->add_option("--q", q, "cluster weight");
  tm->add_option("--theta", theta, "spectral angle");
  tm->add_option("--k", ksec, "sector (N/2+k up arrows)");
  tm->add_flag("--sweep", sweep_k, "CSV sweep over all sectors");
  tm->add_option("--out", out_path, "output path or -");
  tm->callback([&] {
    rcx::SixVertexWeights w = rcx::weights_from(q, theta);
    if (sweep_k) {
      std::string csv = "k,dim,lambda,residual,iterations\n";
      char buf[128];
      for (int k = 0; k <= N6 / 2; ++k) {
        rcx::TransferBlock blk = rcx::build_transfer_block(N6, k, w);
        rcx::EigenResult r = rcx::leading_eigenvalue(blk);
        std::snprintf(buf, sizeof buf, "%d,%d,%.17g,%.3e,%lld\n", k, blk.dim(), r.lambda,
                      r.residual, static_cast<long long>(r.iterations));
        csv += buf;
      }
      write_out(out_path, csv);
    } else {
      rcx::TransferBlock blk = rcx::build_transfer_block(N6, ksec, w);
      rcx::EigenResult r = rcx::leading_eigenvalue(blk);
      char buf[160];
      std::snprintf(buf, sizeof buf, "lambda %.17g residual %.3e iterations %lld dim %d\n",
                    r.lambda, r.residual, static_cast<long long>(r.iterations), blk.dim());
      write_out(out_path, buf);
    }
  });

  // ---- exp ----
  auto* ex = app.add_subcommand("exp", "scripted experiments");
  std::string exp_name, config_path;
  ex->add_option("name", exp_name,
                 "measure-preservation|crossing-universality|iic-ratio|rsw-probe|arm-decay");
  ex->add_option("--config", config_path, "JSON config file");
  ex->add_option("--out", out_path, "output path prefix or -");
  ex->callback([&] {
    rcx::ExperimentSpec spec;
    if (!config_path.empty()) spec = rcx::ExperimentSpec::from_json_file(config_path);
    if (!exp_name.empty()) spec.name = exp_name;
    rcx::Report rep = rcx::run_experiment(spec);
    if (out_path.empty() || out_path == "-") {
      std::cout << rep.summary_json << "\n" << rep.csv;
    } else {
      write_out(out_path + ".json", rep.summary_json + "\n");
      write_out(out_path + ".csv", rep.csv);
      std::cout << (rep.pass ? "pass" : "FAIL") << " " << rep.name << "\n";
    }
  });

  CLI11_PARSE(app, argc, argv);
  return 0;
}

// Batch experiment runner: reads a JSON config, drives the library, and
// emits a CSV plus a JSON sidecar echoing the effective config.  Output is
// byte-identical for identical config + flags.
//
// Exit codes: 0 success, 2 config error (nothing written), 3 property
// failure (CSV still written so the failing rows can be inspected).

#include <cstdint>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "banachlab/banachlab.hpp"

namespace bl = banachlab;

namespace {

struct experiment_config {
  bl::space_spec space;
  std::string experiment;
  std::vector<double> grid;
  int samples = 1;
  std::uint64_t seed = 1;
  std::string output_path;
  std::string retraction = "truncation";  // continuity runs only
};

experiment_config load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw bl::config_invalid("cannot open config file '" + path + "'");
  bl::json j;
  try {
    j = bl::json::parse(in);
  } catch (const std::exception& e) {
    throw bl::config_invalid("config '" + path + "' is not valid json: " + e.what());
  }
  experiment_config cfg;
  try {
    cfg.space = bl::space_from_json(j.at("space"));
    cfg.experiment = j.at("experiment").get<std::string>();
    cfg.grid = j.at("grid").get<std::vector<double>>();
    cfg.samples = j.at("samples").get<int>();
    cfg.seed = j.at("seed").get<std::uint64_t>();
    cfg.output_path = j.at("output_path").get<std::string>();
    if (j.contains("retraction")) cfg.retraction = j.at("retraction").get<std::string>();
  } catch (const bl::error&) {
    throw;
  } catch (const std::exception& e) {
    throw bl::config_invalid("config '" + path + "': " + e.what());
  }
  if (cfg.grid.empty()) throw bl::config_invalid("grid must not be empty");
  double prev = 0.0;
  for (double t : cfg.grid) {
    if (!(t > prev)) throw bl::config_invalid("grid must be strictly increasing and positive");
    if (!(t <= 1.0)) throw bl::config_invalid("grid values must lie in (0, 1]");
    prev = t;
  }
  if (cfg.samples < 1) throw bl::config_invalid("samples must be >= 1");
  return cfg;
}

bl::json effective_config_json(const experiment_config& cfg) {
  bl::json j{{"space", bl::to_json(cfg.space)}, {"experiment", cfg.experiment}, {"grid", cfg.grid},
             {"samples", cfg.samples},          {"seed", cfg.seed},             {"output_path", cfg.output_path}};
  if (cfg.experiment == "retraction-continuity") j["retraction"] = cfg.retraction;
  return j;
}

struct run_report {
  std::string csv;
  bool all_pass = true;
};

std::string num(double v) { return bl::format_number(v); }

// --- modulus: analytic moduli on a fixed epsilon grid ---------------------

run_report run_modulus(const experiment_config& cfg) {
  run_report rep;
  rep.csv = "epsilon,M,delta,M_inverse_of_M\n";
  const bool invertible = cfg.space.is_leaf() && bl::uniformly_monotone(cfg.space);
  for (double eps : cfg.grid) {
    const double M = bl::modulus_monotonicity(cfg.space, eps);
    std::string delta;
    try {
      delta = num(bl::modulus_convexity(cfg.space, eps));
    } catch (const bl::not_uniformly_convex&) {
      // leave the column blank: the space has no convexity modulus
    }
    std::string minv;
    if (invertible) minv = num(bl::monotonicity_inverse_leaf(cfg.space, M));
    rep.csv += num(eps) + "," + num(M) + "," + delta + "," + minv + "\n";
  }
  return rep;
}

// --- continuity: empirical retraction continuity against the bound --------

run_report run_continuity(const experiment_config& cfg) {
  bl::retraction_handle h;
  if (cfg.retraction == "truncation") {
    try {
      h = bl::retraction_handle::truncation(cfg.space);
    } catch (const bl::error& e) {
      throw bl::config_invalid(std::string("truncation handle unavailable for this space: ") + e.what());
    }
  } else if (cfg.retraction == "radial") {
    h = bl::retraction_handle::radial(cfg.space);
  } else {
    throw bl::config_invalid("retraction must be 'truncation' or 'radial', got '" + cfg.retraction + "'");
  }
  const bl::space_spec D = bl::dual(cfg.space);
  const bool analytic = D.is_leaf() && bl::uniformly_monotone(D);
  const bl::modulus_curve omega = bl::omega_estimate(h, cfg.grid, cfg.seed, cfg.samples);

  run_report rep;
  rep.csv = "t,omega_hat,bound_2Minv,pass\n";
  for (std::size_t i = 0; i < omega.grid.size(); ++i) {
    const double t = omega.grid[i], hat = omega.values[i];
    std::string bound, pass = "true";
    if (cfg.retraction == "truncation") {
      const double b = analytic ? 2.0 * bl::monotonicity_inverse_leaf(D, t) : h.modulus_bound.value_at(t);
      bound = num(b);
      if (!(hat <= b + 1e-6)) {
        pass = "false";
        rep.all_pass = false;
      }
    }
    rep.csv += num(t) + "," + num(hat) + "," + bound + "," + pass + "\n";
  }
  return rep;
}

// --- bpb: random almost-attaining pairs through the correction ------------

run_report run_bpb(const experiment_config& cfg) {
  const bl::space_spec D = bl::dual(cfg.space);
  run_report rep;
  rep.csv = "epsilon,pair_gy,dist_x_y,dist_f_g,pass\n";
  const std::size_t n = static_cast<std::size_t>(cfg.space.total_dim());
  std::vector<double> diff(n);
  for (int i = 0; i < cfg.samples; ++i) {
    const double eps = cfg.grid[static_cast<std::size_t>(i) % cfg.grid.size()];
    bool emitted = false;
    for (int attempt = 0; attempt < 64 && !emitted; ++attempt) {
      bl::rng r = bl::rng::substream(cfg.seed, static_cast<std::uint64_t>(i), static_cast<std::uint64_t>(attempt));
      const bl::primal_vector x(cfg.space, bl::random_unit(cfg.space, r));
      std::vector<double> fc;
      try {
        fc = bl::support_functional(x).coords;
      } catch (const bl::non_smooth_point&) {
        continue;
      }
      const auto dir = bl::random_unit(D, r);
      for (std::size_t k = 0; k < n; ++k) fc[k] += 0.1 * eps * dir[k];
      const double nf = bl::norm_on(D, fc);
      if (nf == 0.0) continue;
      for (auto& v : fc) v /= nf;
      const bl::dual_element f(cfg.space, fc);
      if (!(bl::pairing(f, x) > 1.0 - eps * eps / 4.0)) continue;

      const auto out = bl::bpb_point(cfg.space, x, f, eps);
      const double pair = bl::pairing(out.g, out.y);
      for (std::size_t k = 0; k < n; ++k) diff[k] = x.coords[k] - out.y.coords[k];
      const double dxy = bl::norm_on(cfg.space, diff);
      for (std::size_t k = 0; k < n; ++k) diff[k] = f.coords[k] - out.g.coords[k];
      const double dfg = bl::norm_on(D, diff);
      const bool ok = std::abs(pair - 1.0) <= 1e-9 && dxy < eps && dfg < eps;
      if (!ok) rep.all_pass = false;
      rep.csv += num(eps) + "," + num(pair) + "," + num(dxy) + "," + num(dfg) + "," + (ok ? "true" : "false") + "\n";
      emitted = true;
    }
    if (!emitted)
      throw bl::config_invalid("could not draw a premise-satisfying pair on this space; pick a smooth space");
  }
  return rep;
}

// --- perturb: compact-form operator perturbation certificates -------------

run_report run_perturb(const experiment_config& cfg) {
  for (double eps : cfg.grid)
    if (!(eps < 1.0)) throw bl::config_invalid("perturbation needs epsilon strictly inside (0, 1)");
  const bl::space_spec D = bl::dual(cfg.space);
  run_report rep;
  rep.csv = "epsilon,distance,bound_4eps,attained,pass,skipped\n";
  for (int i = 0; i < cfg.samples; ++i) {
    const double eps = cfg.grid[static_cast<std::size_t>(i) % cfg.grid.size()];
    const double eta = eps * eps / 64.0;
    int skipped = 0;
    bool emitted = false;
    for (int attempt = 0; attempt < 256 && !emitted; ++attempt) {
      bl::rng r = bl::rng::substream(cfg.seed, static_cast<std::uint64_t>(i), static_cast<std::uint64_t>(attempt));
      const bl::primal_vector x0(cfg.space, bl::random_unit(cfg.space, r));
      std::vector<double> row0;
      try {
        row0 = bl::support_functional(x0).coords;
      } catch (const bl::non_smooth_point&) {
        continue;
      }
      const double damp = 1.0 - eta * r.uniform(0.0, 0.4);
      for (auto& v : row0) v *= damp;
      bl::c0_operator T{cfg.space, {"t0", "t1", "t2"}, {}};
      T.rows.push_back(std::move(row0));
      T.rows.push_back(bl::random_with_norm(D, r.uniform(0.2, 1.02), r));
      T.rows.push_back(bl::random_with_norm(D, r.uniform(0.2, 1.02), r));
      try {
        const auto cert = bl::perturb_compact(T, x0, eps);
        const double nS = bl::operator_norm(cert.new_operator);
        const double at_x1 = bl::sup_value(cert.new_operator, cert.attaining_point);
        const bool attained = std::abs(nS - 1.0) <= 1e-9 && std::abs(at_x1 - 1.0) <= 1e-9;
        const bool ok = attained && cert.distance <= cert.bound;
        if (!ok) rep.all_pass = false;
        rep.csv += num(eps) + "," + num(cert.distance) + "," + num(cert.bound) + "," + (attained ? "true" : "false") +
                   "," + (ok ? "true" : "false") + "," + std::to_string(skipped) + "\n";
        emitted = true;
      } catch (const bl::premise_violation&) {
        ++skipped;  // a random row out-normed the designed witness; try again
      }
    }
    if (!emitted) throw bl::config_invalid("could not draw a premise-satisfying operator on this space");
  }
  return rep;
}

// --- lemma: convex-series weight bound on random premise tuples -----------

run_report run_lemma(const experiment_config& cfg) {
  run_report rep;
  rep.csv = "eta,r,weight_on_A,threshold,ok\n";
  for (int i = 0; i < cfg.samples; ++i) {
    const double eta = cfg.grid[static_cast<std::size_t>(i) % cfg.grid.size()];
    bl::rng r = bl::rng::substream(cfg.seed, static_cast<std::uint64_t>(i), 0);
    const double rr = r.uniform(0.05, 0.95);
    bool emitted = false;
    for (int attempt = 0; attempt < 200 && !emitted; ++attempt) {
      const int n = 2 + r.uniform_int(7);
      std::vector<double> alpha(static_cast<std::size_t>(n)), c(static_cast<std::size_t>(n));
      double asum = 0.0;
      for (auto& a : alpha) {
        a = r.uniform();
        asum += a;
      }
      for (auto& a : alpha) a /= asum;
      for (auto& v : c) v = 1.0 - r.uniform() * r.uniform() * std::min(1.0, 2.0 * eta);
      double dot = 0.0;
      for (int k = 0; k < n; ++k) dot += alpha[static_cast<std::size_t>(k)] * c[static_cast<std::size_t>(k)];
      if (!(dot > 1.0 - eta)) continue;
      const auto out = bl::convex_series_bound(c, alpha, eta, rr);
      if (!out.ok) rep.all_pass = false;
      rep.csv += num(eta) + "," + num(rr) + "," + num(out.weight) + "," + num(out.threshold) + "," +
                 (out.ok ? "true" : "false") + "\n";
      emitted = true;
    }
    if (!emitted) throw bl::config_invalid("could not draw a premise-satisfying tuple for eta in the grid");
  }
  return rep;
}

int run(const std::string& subcmd, const std::string& expected_experiment, const std::string& config_path,
        const std::uint64_t* seed_override, const int* samples_override, const std::string* out_override) {
  experiment_config cfg = load_config(config_path);
  if (seed_override) cfg.seed = *seed_override;
  if (samples_override) cfg.samples = *samples_override;
  if (out_override) cfg.output_path = *out_override;
  if (cfg.samples < 1) throw bl::config_invalid("samples must be >= 1");
  if (cfg.experiment != expected_experiment)
    throw bl::config_invalid("config experiment is '" + cfg.experiment + "' but the '" + subcmd +
                             "' subcommand expects '" + expected_experiment + "'");

  run_report rep;
  if (expected_experiment == "modulus") rep = run_modulus(cfg);
  else if (expected_experiment == "retraction-continuity") rep = run_continuity(cfg);
  else if (expected_experiment == "bpb") rep = run_bpb(cfg);
  else if (expected_experiment == "perturbation") rep = run_perturb(cfg);
  else rep = run_lemma(cfg);

  {
    std::ofstream out(cfg.output_path);
    if (!out) throw bl::config_invalid("cannot open output path '" + cfg.output_path + "'");
    out << rep.csv;
  }
  {
    std::ofstream side(cfg.output_path + ".config.json");
    if (!side) throw bl::config_invalid("cannot open sidecar path '" + cfg.output_path + ".config.json'");
    side << effective_config_json(cfg).dump(2) << '\n';
  }
  if (!rep.all_pass) {
    std::fprintf(stderr, "%s: some rows failed their property check; see %s\n", subcmd.c_str(),
                 cfg.output_path.c_str());
    return 3;
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"banachlab experiment runner"};
  app.require_subcommand(1);

  struct sub_state {
    std::string config_path;
    std::uint64_t seed = 0;
    int samples = 0;
    std::string out;
    CLI::App* cmd = nullptr;
  };
  const std::pair<const char*, const char*> table[] = {
      {"modulus", "modulus"},
      {"continuity", "retraction-continuity"},
      {"bpb", "bpb"},
      {"perturb", "perturbation"},
      {"lemma", "convex-lemma"},
  };
  std::vector<sub_state> states(std::size(table));
  for (std::size_t i = 0; i < std::size(table); ++i) {
    auto& st = states[i];
    st.cmd = app.add_subcommand(table[i].first, std::string("run the ") + table[i].second + " experiment");
    st.cmd->add_option("--config", st.config_path, "experiment config (json)")->required();
    st.cmd->add_option("--seed", st.seed, "override the config seed");
    st.cmd->add_option("--samples", st.samples, "override the config sample count");
    st.cmd->add_option("--out", st.out, "override the config output path");
  }

  CLI11_PARSE(app, argc, argv);

  for (std::size_t i = 0; i < std::size(table); ++i) {
    const auto& st = states[i];
    if (!st.cmd->parsed()) continue;
    try {
      return run(table[i].first, table[i].second, st.config_path, st.cmd->count("--seed") ? &st.seed : nullptr,
                 st.cmd->count("--samples") ? &st.samples : nullptr, st.cmd->count("--out") ? &st.out : nullptr);
    } catch (const bl::config_invalid& e) {
      std::fprintf(stderr, "config error: %s\n", e.what());
      return 2;
    } catch (const bl::error& e) {
      std::fprintf(stderr, "property failure: %s\n", e.what());
      return 3;
    }
  }
  return 2;  // unreachable: a subcommand is required
}

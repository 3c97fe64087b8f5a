#include <cstdio>
#include <iostream>
#include <string>

#include "CLI11.hpp"
#include "pushsim/config.hpp"
#include "pushsim/env.hpp"
#include "pushsim/eval.hpp"
#include "pushsim/sensors.hpp"
#include "pushsim/server.hpp"

using namespace pushsim;

namespace {

SimConfig load_or_default(const std::string& path) {
  return path.empty() ? default_config() : load_config(path);
}

int cmd_config(const std::string& config_path) {
  SimConfig cfg = load_or_default(config_path);
  std::cout << dump_config(cfg);
  std::cerr << "config_hash: " << config_hash(cfg) << "\n";
  return 0;
}

int cmd_serve(const std::string& config_path, int port) {
  SimConfig cfg = load_or_default(config_path);
  if (port > 0) {
    std::cerr << "listening on tcp port " << port << "\n";
    serve_tcp(cfg, port);
  } else {
    serve_stdio(cfg, std::cin, std::cout);
  }
  return 0;
}

int cmd_eval(const std::string& config_path, const std::string& suite,
             const std::string& out_dir, int threads) {
  SimConfig cfg = load_or_default(config_path);
  ResultsTable table = run_eval(cfg, suite, threads);
  std::cout << results_text(table);
  if (!out_dir.empty()) {
    write_results(table, out_dir);
    std::cerr << "wrote " << out_dir << "/" << suite << ".{csv,txt}\n";
  }
  return 0;
}

int cmd_rollout(const std::string& config_path, uint64_t seed,
                const std::string& policy, const std::string& preset,
                bool perception, bool augment, const std::string& trace_path,
                const std::string& params_path) {
  SimConfig cfg = load_or_default(config_path);
  if (!params_path.empty())
    cfg.teacher = read_params_json(params_path, cfg.teacher);
  EnvOptions opt;
  opt.preset = preset;
  opt.use_perception = perception || policy == "student";
  opt.augment = augment;
  opt.trace = !trace_path.empty();
  Environment env(cfg, opt);
  PolicyFn fn = make_policy(policy, cfg.teacher, cfg);
  EpisodeRecord rec = run_episode(env, seed, fn, policy);
  std::cout << "seed=" << rec.seed << " preset=" << preset << " policy=" << policy
            << " outcome=" << to_string(rec.outcome) << " steps=" << rec.steps
            << " return=" << rec.return_sum
            << " goal_sector=" << to_string(rec.goal_sector)
            << " mass_bin=" << to_string(rec.mass_bin) << "\n";
  if (!trace_path.empty()) {
    export_episode(rec, trace_path);
    std::cerr << "wrote " << trace_path << "\n";
  }
  return rec.outcome == EpisodeStatus::Success ? 0 : 1;
}

int cmd_optimize(const std::string& config_path, const std::string& suite,
                 const std::string& out_path, int iterations) {
  SimConfig cfg = load_or_default(config_path);
  if (iterations > 0) cfg.cem.iterations = iterations;
  std::vector<CemTracePoint> trace;
  TeacherParams best = cem_optimize(cfg.teacher, cfg.cem, cfg, suite, &trace);
  for (const auto& p : trace)
    std::printf("iter %2d  elite_mean %.4f  best %.4f\n", p.iteration,
                p.elite_mean_return, p.best_return);
  std::printf("standoff=%.4f approach=%.4f push=%.4f heading=%.4f lateral=%.4f "
              "realign=%.4f\n",
              best.standoff, best.approach_speed, best.push_speed,
              best.heading_gain, best.lateral_gain, best.realign_threshold);
  if (!out_path.empty()) {
    write_params_json(best, cfg, trace, out_path);
    std::cerr << "wrote " << out_path << "\n";
  }
  return 0;
}

int cmd_render(const std::string& config_path, uint64_t seed,
               const std::string& out_prefix, bool augment) {
  SimConfig cfg = load_or_default(config_path);
  EnvOptions opt;
  opt.use_perception = true;
  opt.augment = augment;
  Environment env(cfg, opt);
  env.reset(seed);
  ObservationSet obs = env.observe();
  if (obs.depth_stack.empty()) throw std::runtime_error("render: no depth frames");
  const DepthImage& img = obs.depth_stack.back();
  write_pfm(img, out_prefix + ".pfm");
  write_pgm(img, out_prefix + ".pgm", cfg.camera.far_plane);
  const ObjectEstimate& est = env.estimate();
  std::cout << "wrote " << out_prefix << ".pfm / .pgm  estimate rel=("
            << est.rel_pos.x << ", " << est.rel_pos.y
            << ") confidence=" << est.confidence << "\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"planar object-goal pushing simulator"};
  app.require_subcommand(1);

  std::string config_path;
  app.add_option("--config", config_path, "config JSON path (default: built-ins)")
      ->envname("PUSHSIM_CONFIG");

  auto* sc_config = app.add_subcommand("config", "print the effective config");

  auto* sc_serve = app.add_subcommand("serve", "NDJSON env server (stdio or TCP)");
  int port = 0;
  sc_serve->add_option("--port", port, "TCP port (omit for stdio)");

  auto* sc_eval = app.add_subcommand("eval", "run an evaluation suite");
  std::string suite = "goal-sectors";
  std::string out_dir;
  int threads = 0;
  sc_eval->add_option("--suite", suite, "suite name");
  sc_eval->add_option("--out", out_dir, "output directory for csv/txt");
  sc_eval->add_option("--threads", threads, "worker threads (0 = auto)");

  auto* sc_rollout = app.add_subcommand("rollout", "run one episode");
  uint64_t seed = 0;
  std::string policy = "teacher";
  std::string preset = "fa";
  std::string trace_path;
  std::string params_path;
  bool perception = false, augment = false;
  sc_rollout->add_option("--seed", seed, "episode seed")->required();
  sc_rollout->add_option("--policy", policy, "teacher | student | greedy");
  sc_rollout->add_option("--preset", preset, "controller preset");
  sc_rollout->add_option("--trace", trace_path, "per-step CSV output path");
  sc_rollout->add_option("--params", params_path, "pilot params JSON");
  sc_rollout->add_flag("--perception", perception, "enable the depth pipeline");
  sc_rollout->add_flag("--augment", augment, "enable depth augmentations");

  auto* sc_opt = app.add_subcommand("optimize", "CEM over the pilot parameters");
  std::string opt_suite = "goal-sectors";
  std::string opt_out;
  int iterations = 0;
  sc_opt->add_option("--suite", opt_suite, "suite name");
  sc_opt->add_option("--out", opt_out, "params JSON output path");
  sc_opt->add_option("--iterations", iterations, "override CEM iterations");

  auto* sc_render = app.add_subcommand("render", "render the reset frame");
  uint64_t render_seed = 0;
  std::string out_prefix = "frame";
  bool render_augment = false;
  sc_render->add_option("--seed", render_seed, "episode seed")->required();
  sc_render->add_option("--out", out_prefix, "output path prefix");
  sc_render->add_flag("--augment", render_augment, "enable depth augmentations");

  CLI11_PARSE(app, argc, argv);

  try {
    if (*sc_config) return cmd_config(config_path);
    if (*sc_serve) return cmd_serve(config_path, port);
    if (*sc_eval) return cmd_eval(config_path, suite, out_dir, threads);
    if (*sc_rollout)
      return cmd_rollout(config_path, seed, policy, preset, perception, augment,
                         trace_path, params_path);
    if (*sc_opt) return cmd_optimize(config_path, opt_suite, opt_out, iterations);
    if (*sc_render)
      return cmd_render(config_path, render_seed, out_prefix, render_augment);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 0;
}

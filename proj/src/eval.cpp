#include "pushsim/eval.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <thread>

#include "json.hpp"
#include "pushsim/protocol.hpp"

namespace pushsim {

using nlohmann::json;

namespace {

int resolve_threads(int threads) {
  if (threads > 0) return threads;
  unsigned hw = std::thread::hardware_concurrency();
  return hw > 0 ? static_cast<int>(hw) : 4;
}

std::string fmt(const char* f, double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), f, v);
  return buf;
}

}  // namespace

ScenarioConfig cell_scenario(const SimConfig& cfg, const SuiteCell& cell) {
  ScenarioConfig s = cfg.scenario;
  if (cell.sector) {
    s.goal_angle_symmetric = true;
    switch (*cell.sector) {
      case GoalSector::Front:
        s.goal_angle_min = 0.0;
        s.goal_angle_max = kPi / 3.0;
        break;
      case GoalSector::Lateral:
        s.goal_angle_min = kPi / 3.0;
        s.goal_angle_max = 2.0 * kPi / 3.0;
        break;
      case GoalSector::Rear:
        s.goal_angle_min = 2.0 * kPi / 3.0;
        s.goal_angle_max = kPi;
        break;
    }
  }
  if (cell.mass_bin) {
    switch (*cell.mass_bin) {
      case MassBin::Light: s.mass_min = 1.0; s.mass_max = 3.0; break;
      case MassBin::Medium: s.mass_min = 3.0; s.mass_max = 5.0; break;
      case MassBin::Heavy: s.mass_min = 5.0; s.mass_max = 8.0; break;
      case MassBin::ExtraHeavy: s.mass_min = 8.0; s.mass_max = 12.0; break;
    }
  }
  return s;
}

std::vector<EpisodeRecord> run_cell(const SimConfig& cfg, const SuiteCell& cell,
                                    int threads) {
  ScenarioConfig scen = cell_scenario(cfg, cell);
  const int n = cell.episodes;
  std::vector<EpisodeRecord> records(n);
  int nthreads = std::min(resolve_threads(threads), n);

  auto worker = [&](int t) {
    EnvOptions opt;
    opt.preset = cell.preset;
    opt.use_perception = cell.policy == "student";
    opt.augment = opt.use_perception;
    Environment env(cfg, opt);
    PolicyFn policy = make_policy(cell.policy, cfg.teacher, cfg);
    for (int i = t; i < n; i += nthreads)
      records[i] = run_episode(env, cell.base_seed + i, policy, cell.policy, &scen);
  };

  std::vector<std::thread> pool;
  for (int t = 0; t < nthreads; ++t) pool.emplace_back(worker, t);
  for (auto& th : pool) th.join();
  return records;
}

ResultsRow summarize_cell(const SuiteCell& cell,
                          const std::vector<EpisodeRecord>& records) {
  ResultsRow row;
  row.cell = cell.name;
  row.preset = cell.preset;
  row.policy = cell.policy;
  if (cell.sector) row.label = to_string(*cell.sector);
  if (cell.mass_bin) {
    row.label = to_string(*cell.mass_bin);
    if (mass_bin_is_ood(*cell.mass_bin)) row.label += " (OOD)";
  }
  row.episodes = static_cast<int>(records.size());
  row.base_seed = cell.base_seed;
  int sr = 0, pre = 0, post = 0, to = 0;
  double steps = 0.0;
  for (const auto& r : records) {
    switch (r.outcome) {
      case EpisodeStatus::Success: ++sr; break;
      case EpisodeStatus::PreContactFall: ++pre; break;
      case EpisodeStatus::PostContactFall: ++post; break;
      case EpisodeStatus::Timeout: ++to; break;
      default: throw std::logic_error("summarize_cell: non-terminal record");
    }
    steps += r.steps;
  }
  double n = std::max<size_t>(records.size(), 1);
  row.sr_pct = 100.0 * sr / n;
  row.pre_c_pct = 100.0 * pre / n;
  row.post_c_pct = 100.0 * post / n;
  row.timeout_pct = 100.0 * to / n;
  row.mean_steps = steps / n;
  return row;
}

ResultsTable run_eval(const SimConfig& cfg, const std::string& suite_name,
                      int threads) {
  auto it = cfg.suites.find(suite_name);
  if (it == cfg.suites.end()) {
    std::string avail;
    for (const auto& [name, s] : cfg.suites) avail += (avail.empty() ? "" : ", ") + name;
    throw std::invalid_argument("run_eval: unknown suite '" + suite_name +
                                "'; available: " + avail);
  }
  ResultsTable table;
  table.suite = suite_name;
  table.config_hash = config_hash(cfg);
  for (const auto& cell : it->second.cells)
    table.rows.push_back(summarize_cell(cell, run_cell(cfg, cell, threads)));
  return table;
}

std::string results_csv(const ResultsTable& table) {
  std::ostringstream out;
  out << "# suite=" << table.suite << " config_hash=" << table.config_hash << "\n";
  out << "cell,preset,policy,label,episodes,base_seed,sr_pct,pre_c_pct,post_c_pct,"
         "timeout_pct,mean_steps\n";
  for (const auto& r : table.rows) {
    out << r.cell << ',' << r.preset << ',' << r.policy << ',' << r.label << ','
        << r.episodes << ',' << r.base_seed << ',' << fmt("%.2f", r.sr_pct) << ','
        << fmt("%.2f", r.pre_c_pct) << ',' << fmt("%.2f", r.post_c_pct) << ','
        << fmt("%.2f", r.timeout_pct) << ',' << fmt("%.1f", r.mean_steps) << "\n";
  }
  return out.str();
}

std::string results_text(const ResultsTable& table) {
  std::ostringstream out;
  out << "suite: " << table.suite << "  (config " << table.config_hash << ")\n";
  char line[256];
  std::snprintf(line, sizeof(line), "%-28s %-9s %-8s %-16s %8s %8s %8s %8s %9s\n",
                "cell", "preset", "policy", "label", "SR%", "Pre-C%", "Post-C%",
                "Timeout%", "steps");
  out << line;
  for (const auto& r : table.rows) {
    std::snprintf(line, sizeof(line),
                  "%-28s %-9s %-8s %-16s %8.2f %8.2f %8.2f %8.2f %9.1f\n",
                  r.cell.c_str(), r.preset.c_str(), r.policy.c_str(),
                  r.label.c_str(), r.sr_pct, r.pre_c_pct, r.post_c_pct,
                  r.timeout_pct, r.mean_steps);
    out << line;
  }
  return out.str();
}

void write_results(const ResultsTable& table, const std::string& out_dir) {
  std::filesystem::create_directories(out_dir);
  {
    std::ofstream f(out_dir + "/" + table.suite + ".csv", std::ios::binary);
    if (!f) throw std::runtime_error("write_results: cannot write to " + out_dir);
    f << results_csv(table);
  }
  {
    std::ofstream f(out_dir + "/" + table.suite + ".txt", std::ios::binary);
    f << results_text(table);
  }
}

const char* kTraceHeader =
    "t,robot_x,robot_y,robot_yaw,"
    "q0,q1,q2,q3,q4,q5,q6,q7,q8,q9,"
    "obj_x,obj_y,obj_yaw,obj_tilt,"
    "ee_l_x,ee_l_y,ee_r_x,ee_r_y,goal_x,goal_y,"
    "cmd_vx,cmd_vy,cmd_vang,cmd_r0,cmd_r1,cmd_r2,cmd_r3,cmd_r4,cmd_r5,cmd_r6,"
    "cmd_r7,cmd_r8,cmd_r9,"
    "r_reach,r_push,r_track,r_align,p_smooth,p_balance,p_upper,r_total,"
    "contact,applied_force,status";

void export_episode(const EpisodeRecord& record, const std::string& path) {
  if (record.trace.empty())
    throw std::invalid_argument("export_episode: record has no trace (tracing disabled?)");
  std::ofstream f(path, std::ios::binary);
  if (!f) throw std::runtime_error("export_episode: cannot open " + path);
  auto n9 = [](double v) { return fmt("%.9g", v); };
  f << "# seed=" << record.seed << " preset=" << record.preset
    << " policy=" << record.policy << " outcome=" << to_string(record.outcome) << "\n";
  f << "# obj_spec mass=" << n9(record.mass) << "\n";
  f << kTraceHeader << "\n";
  for (const auto& r : record.trace) {
    f << n9(r.t) << ',' << n9(r.robot.position.x) << ',' << n9(r.robot.position.y)
      << ',' << n9(r.robot.yaw);
    for (double q : r.arm_q) f << ',' << n9(q);
    f << ',' << n9(r.obj.position.x) << ',' << n9(r.obj.position.y) << ','
      << n9(r.obj.yaw) << ',' << n9(r.obj_tilt);
    f << ',' << n9(r.ee_left.x) << ',' << n9(r.ee_left.y) << ',' << n9(r.ee_right.x)
      << ',' << n9(r.ee_right.y) << ',' << n9(r.goal.x) << ',' << n9(r.goal.y);
    f << ',' << n9(r.cmd.vx) << ',' << n9(r.cmd.vy) << ',' << n9(r.cmd.v_ang);
    for (double q : r.cmd.arm_residual) f << ',' << n9(q);
    f << ',' << n9(r.reward.reach) << ',' << n9(r.reward.push) << ','
      << n9(r.reward.track) << ',' << n9(r.reward.align) << ','
      << n9(r.reward.smooth_pen) << ',' << n9(r.reward.balance_pen) << ','
      << n9(r.reward.upper_pen) << ',' << n9(r.reward.total);
    f << ',' << (r.contact ? 1 : 0) << ',' << n9(r.applied_force) << ','
      << to_string(r.status) << "\n";
  }
}

double mean_suite_return(const SimConfig& cfg, const std::string& suite_name,
                         const TeacherParams& params, int episodes_per_cell,
                         uint64_t seed_offset) {
  auto it = cfg.suites.find(suite_name);
  if (it == cfg.suites.end())
    throw std::invalid_argument("mean_suite_return: unknown suite '" + suite_name + "'");
  SimConfig local = cfg;
  local.teacher = params;
  double sum = 0.0;
  int count = 0;
  for (const auto& cell : it->second.cells) {
    SuiteCell c = cell;
    c.episodes = episodes_per_cell;
    c.base_seed = cell.base_seed + seed_offset;
    for (const auto& rec : run_cell(local, c, 0)) {
      sum += rec.return_sum;
      ++count;
    }
  }
  return count > 0 ? sum / count : 0.0;
}

TeacherParams cem_optimize(const TeacherParams& base, const CemConfig& cem,
                           const SimConfig& cfg, const std::string& suite_name,
                           std::vector<CemTracePoint>* trace) {
  auto it = cfg.suites.find(suite_name);
  if (it == cfg.suites.end())
    throw std::invalid_argument("cem_optimize: unknown suite '" + suite_name + "'");
  const std::vector<SuiteCell>& cells = it->second.cells;
  if (cells.empty()) throw std::invalid_argument("cem_optimize: suite has no cells");

  auto objective = [&](const std::vector<double>& v, uint64_t seed) -> double {
    TeacherParams p = TeacherParams::from_vector(v, base);
    const SuiteCell& cell = cells[seed % cells.size()];
    EnvOptions opt;
    opt.preset = cell.preset;
    opt.use_perception = cell.policy == "student";
    opt.augment = opt.use_perception;
    Environment env(cfg, opt);
    ScenarioConfig scen = cell_scenario(cfg, cell);
    PolicyFn policy = make_policy(cell.policy, p, cfg);
    EpisodeRecord rec = run_episode(env, cell.base_seed + seed, policy,
                                    cell.policy, &scen);
    return rec.return_sum;
  };

  std::vector<double> mean =
      cem_optimize_vec(base.to_vector(), cem, objective, trace);
  return TeacherParams::from_vector(mean, base);
}

void write_params_json(const TeacherParams& params, const SimConfig& cfg,
                       const std::vector<CemTracePoint>& trace,
                       const std::string& path) {
  json j;
  j["params"] = {{"standoff", round9(params.standoff)},
                 {"approach_speed", round9(params.approach_speed)},
                 {"push_speed", round9(params.push_speed)},
                 {"heading_gain", round9(params.heading_gain)},
                 {"lateral_gain", round9(params.lateral_gain)},
                 {"realign_threshold", round9(params.realign_threshold)},
                 {"align_enabled", params.align_enabled}};
  j["provenance"] = {{"config_hash", config_hash(cfg)}, {"cem_seed", cfg.cem.seed}};
  json tr = json::array();
  for (const auto& p : trace)
    tr.push_back({{"iteration", p.iteration},
                  {"elite_mean_return", round9(p.elite_mean_return)},
                  {"best_return", round9(p.best_return)}});
  j["provenance"]["trace"] = tr;
  std::ofstream f(path, std::ios::binary);
  if (!f) throw std::runtime_error("write_params_json: cannot open " + path);
  f << j.dump(2) << "\n";
}

TeacherParams read_params_json(const std::string& path, const TeacherParams& base) {
  std::ifstream f(path);
  if (!f) throw std::runtime_error("read_params_json: cannot open " + path);
  json j = json::parse(f);
  TeacherParams p = base;
  const json& pj = j.at("params");
  p.standoff = pj.value("standoff", p.standoff);
  p.approach_speed = pj.value("approach_speed", p.approach_speed);
  p.push_speed = pj.value("push_speed", p.push_speed);
  p.heading_gain = pj.value("heading_gain", p.heading_gain);
  p.lateral_gain = pj.value("lateral_gain", p.lateral_gain);
  p.realign_threshold = pj.value("realign_threshold", p.realign_threshold);
  p.align_enabled = pj.value("align_enabled", p.align_enabled);
  return p;
}

}  // namespace pushsim

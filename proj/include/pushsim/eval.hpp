#pragma once

#include <string>
#include <vector>

#include "pushsim/config.hpp"
#include "pushsim/env.hpp"

namespace pushsim {

struct ResultsRow {
  std::string cell;
  std::string preset;
  std::string policy;
  std::string label;  // sector or mass bin, "(OOD)" marked
  int episodes = 0;
  uint64_t base_seed = 0;
  double sr_pct = 0.0;
  double pre_c_pct = 0.0;
  double post_c_pct = 0.0;
  double timeout_pct = 0.0;
  double mean_steps = 0.0;
};

struct ResultsTable {
  std::string suite;
  std::string config_hash;
  std::vector<ResultsRow> rows;
};

// Scenario ranges for one evaluation cell (sector / mass-bin overrides).
ScenarioConfig cell_scenario(const SimConfig& cfg, const SuiteCell& cell);

// Episodes use seeds base_seed..base_seed+episodes-1; order-independent.
std::vector<EpisodeRecord> run_cell(const SimConfig& cfg, const SuiteCell& cell,
                                    int threads = 0);

ResultsRow summarize_cell(const SuiteCell& cell,
                          const std::vector<EpisodeRecord>& records);

// Throws std::invalid_argument listing available suites when unknown.
ResultsTable run_eval(const SimConfig& cfg, const std::string& suite_name,
                      int threads = 0);

std::string results_csv(const ResultsTable& table);
std::string results_text(const ResultsTable& table);
// Writes <out_dir>/<suite>.csv and <out_dir>/<suite>.txt.
void write_results(const ResultsTable& table, const std::string& out_dir);

// Per-step CSV trace; requires a record produced with tracing enabled.
void export_episode(const EpisodeRecord& record, const std::string& path);
extern const char* kTraceHeader;

// CEM over TeacherParams against mean episode return on the suite's cells.
TeacherParams cem_optimize(const TeacherParams& base, const CemConfig& cem,
                           const SimConfig& cfg, const std::string& suite_name,
                           std::vector<CemTracePoint>* trace = nullptr);

// Mean return of a policy over the suite's cells on a fixed seed set.
double mean_suite_return(const SimConfig& cfg, const std::string& suite_name,
                         const TeacherParams& params, int episodes_per_cell,
                         uint64_t seed_offset = 0);

// Optimized parameters with provenance (config hash, seed, iteration trace).
void write_params_json(const TeacherParams& params, const SimConfig& cfg,
                       const std::vector<CemTracePoint>& trace,
                       const std::string& path);
TeacherParams read_params_json(const std::string& path, const TeacherParams& base);

}  // namespace pushsim

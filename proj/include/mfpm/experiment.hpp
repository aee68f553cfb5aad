#pragma once

#include <cstdint>
#include <filesystem>
#include <istream>
#include <ostream>
#include <stdexcept>
#include <string>
#include <vector>

#include "mfpm/config.hpp"
#include "mfpm/network.hpp"
#include "mfpm/policies.hpp"

namespace mfpm {

enum class PolicyKind { mgmc, mgris, ag, sag, ar, amd, amp };

PolicyKind parse_policy(const std::string& name);
const char* policy_name(PolicyKind kind);

struct ExperimentConfig {
  std::filesystem::path dataset;
  std::string dataset_name;  // CSV "dataset" column; defaults to the file stem
  ParamConfig params;
  std::vector<double> budgets{0, 10, 20, 30, 40, 50};
  std::vector<PolicyKind> policies{PolicyKind::sag, PolicyKind::amp, PolicyKind::ar};
  std::uint32_t repetitions = 30;
  PolicyOptions options;
  std::uint64_t root_seed = 0;
  std::filesystem::path output = "results.csv";
  std::uint32_t workers = 1;
  /// Real timings in the wallclock_ms column. Off by default so that reruns
  /// produce identical bytes; when off the column holds 0.
  bool record_wallclock = false;

  /// Relative paths are resolved against `base_dir`.
  static ExperimentConfig from(const KeyValueConfig& kv, const std::filesystem::path& base_dir = {});
  static ExperimentConfig load(const std::filesystem::path& path);
};

struct ExperimentRow {
  std::string dataset;
  PolicyKind policy = PolicyKind::sag;
  std::uint32_t q = 1;
  double budget = 0;
  std::uint32_t rep = 0;
  std::vector<NodeId> seeds;
  double total_cost = 0;
  double realized_profit = 0;
  double estimated_profit = 0;
  std::uint64_t samples_used = 0;
  double wallclock_ms = 0;
};

/// Environment stream of a repetition: shared by every policy and budget.
std::uint64_t environment_seed(std::uint64_t root, std::uint32_t rep);

/// Runs one policy for one (budget, repetition) cell.
ExperimentRow run_cell(const ExperimentConfig& config, const SocialNetwork& net, const MultiLevelGraph& mlg,
                       PolicyKind policy, std::size_t budget_index, std::uint32_t rep);

/// All cells in (policy, budget, repetition) order, computed on up to
/// `config.workers` threads.
std::vector<ExperimentRow> run_cells(const ExperimentConfig& config, const SocialNetwork& net,
                                     const MultiLevelGraph& mlg);

void write_csv(std::ostream& out, const std::vector<ExperimentRow>& rows, const SocialNetwork& net,
               bool record_wallclock);

struct SummaryRow {
  std::string policy;
  double budget = 0;
  std::size_t runs = 0;
  double mean_profit = 0, sd_profit = 0;
  double mean_cost = 0, sd_cost = 0;
  double mean_estimated = 0;
  double mean_wallclock_ms = 0;
};

std::vector<SummaryRow> summarize_rows(const std::vector<ExperimentRow>& rows);
void write_summary_csv(std::ostream& out, const std::vector<SummaryRow>& summary);

/// Loads the dataset, runs every cell, writes the CSV to config.output and the
/// per-(policy, budget) summary next to it as <output>.summary.csv.
std::vector<ExperimentRow> run_experiment(const ExperimentConfig& config);

class CsvError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Parses a result CSV and aggregates per (policy, budget), in first-appearance order.
std::vector<SummaryRow> summarize(std::istream& csv);
void print_summary(std::ostream& out, const std::vector<SummaryRow>& summary);

}  // namespace mfpm

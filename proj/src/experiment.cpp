#include "mfpm/experiment.hpp"

#include <algorithm>
#include <atomic>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iomanip>
#include <map>
#include <mutex>
#include <sstream>
#include <thread>

#include "mfpm/random.hpp"

namespace mfpm {

namespace {

constexpr PolicyKind kAllPolicies[] = {PolicyKind::mgmc, PolicyKind::mgris, PolicyKind::ag, PolicyKind::sag,
                                       PolicyKind::ar,   PolicyKind::amd,   PolicyKind::amp};

const char* const kColumns[] = {"dataset",         "policy",           "q",
                                "budget",          "rep",              "seeds",
                                "total_cost",      "realized_profit",  "estimated_profit",
                                "rr_sets_or_sims_used", "wallclock_ms"};

std::string fmt_double(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.10g", v);
  return buf;
}

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

std::vector<std::string> split_csv_line(const std::string& line, int line_no) {
  std::vector<std::string> fields;
  std::string cur;
  bool quoted = false;
  for (std::size_t i = 0; i < line.size(); ++i) {
    char c = line[i];
    if (quoted) {
      if (c == '"' && i + 1 < line.size() && line[i + 1] == '"') {
        cur += '"';
        ++i;
      } else if (c == '"') {
        quoted = false;
      } else {
        cur += c;
      }
    } else if (c == '"') {
      quoted = true;
    } else if (c == ',') {
      fields.push_back(std::move(cur));
      cur.clear();
    } else if (c != '\r') {
      cur += c;
    }
  }
  if (quoted) throw CsvError("line " + std::to_string(line_no) + ": unterminated quoted field");
  fields.push_back(std::move(cur));
  return fields;
}

double parse_field(const std::string& text, int line_no, const char* column) {
  double v{};
  auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
  if (text.empty() || ec != std::errc{} || ptr != text.data() + text.size()) {
    throw CsvError("line " + std::to_string(line_no) + ": column " + column + ": not a number: '" + text + "'");
  }
  return v;
}

struct Moments {
  std::size_t n = 0;
  double sum = 0, sum_sq = 0;
  void add(double v) {
    ++n;
    sum += v;
    sum_sq += v * v;
  }
  double mean() const { return n ? sum / n : 0; }
  double sd() const { return n > 1 ? std::sqrt(std::max(0.0, (sum_sq - sum * sum / n) / (n - 1))) : 0; }
};

struct Accumulator {
  std::string policy;
  double budget = 0;
  Moments profit, cost, estimated, wallclock;

  SummaryRow finish() const {
    SummaryRow r;
    r.policy = policy;
    r.budget = budget;
    r.runs = profit.n;
    r.mean_profit = profit.mean();
    r.sd_profit = profit.sd();
    r.mean_cost = cost.mean();
    r.sd_cost = cost.sd();
    r.mean_estimated = estimated.mean();
    r.mean_wallclock_ms = wallclock.mean();
    return r;
  }
};

// Groups by (policy, budget) preserving first appearance.
class Aggregator {
 public:
  void add(const std::string& policy, double budget, double profit, double cost, double estimated, double wall) {
    auto key = std::make_pair(policy, budget);
    auto it = index_.find(key);
    if (it == index_.end()) {
      it = index_.emplace(key, groups_.size()).first;
      groups_.push_back({policy, budget, {}, {}, {}, {}});
    }
    auto& g = groups_[it->second];
    g.profit.add(profit);
    g.cost.add(cost);
    g.estimated.add(estimated);
    g.wallclock.add(wall);
  }
  std::vector<SummaryRow> finish() const {
    std::vector<SummaryRow> out;
    for (const auto& g : groups_) out.push_back(g.finish());
    return out;
  }

 private:
  std::map<std::pair<std::string, double>, std::size_t> index_;
  std::vector<Accumulator> groups_;
};

}  // namespace

PolicyKind parse_policy(const std::string& name) {
  std::string upper = name;
  std::transform(upper.begin(), upper.end(), upper.begin(), [](unsigned char c) { return std::toupper(c); });
  for (auto kind : kAllPolicies) {
    if (upper == policy_name(kind)) return kind;
  }
  throw ConfigError("unknown policy '" + name + "' (expected MGMC, MGRIS, AG, SAG, AR, AMD or AMP)");
}

const char* policy_name(PolicyKind kind) {
  switch (kind) {
    case PolicyKind::mgmc: return "MGMC";
    case PolicyKind::mgris: return "MGRIS";
    case PolicyKind::ag: return "AG";
    case PolicyKind::sag: return "SAG";
    case PolicyKind::ar: return "AR";
    case PolicyKind::amd: return "AMD";
    case PolicyKind::amp: return "AMP";
  }
  return "?";
}

ExperimentConfig ExperimentConfig::from(const KeyValueConfig& kv, const std::filesystem::path& base_dir) {
  ExperimentConfig c;
  auto dataset = kv.get("dataset");
  if (!dataset) throw ConfigError("missing required key 'dataset'");
  c.dataset = std::filesystem::path(*dataset);
  if (c.dataset.is_relative() && !base_dir.empty()) c.dataset = base_dir / c.dataset;
  c.dataset_name = kv.get_string("dataset_name", std::filesystem::path(*dataset).stem().string());
  c.params = ParamConfig::from(kv);

  if (kv.contains("budgets")) {
    c.budgets.clear();
    for (const auto& b : kv.get_list("budgets")) {
      KeyValueConfig one;
      one.set("budgets", b);
      double v = one.get_double("budgets", 0);
      if (!(v >= 0) || !std::isfinite(v)) throw ConfigError("key 'budgets': budgets must be nonnegative");
      c.budgets.push_back(v);
    }
    if (c.budgets.empty()) throw ConfigError("key 'budgets': empty list");
  }
  if (kv.contains("policies")) {
    c.policies.clear();
    for (const auto& p : kv.get_list("policies")) c.policies.push_back(parse_policy(p));
    if (c.policies.empty()) throw ConfigError("key 'policies': empty list");
  }
  auto reps = kv.get_int("repetitions", c.repetitions);
  if (reps < 1) throw ConfigError("key 'repetitions': must be at least 1");
  c.repetitions = static_cast<std::uint32_t>(reps);

  auto& o = c.options;
  o.epsilon = kv.get_double("epsilon", o.epsilon);
  o.eta = kv.get_double("eta", o.eta);
  o.delta_prime = kv.get_double("delta_prime", o.delta_prime);
  o.eps_hat = kv.get_double("eps_hat", o.eps_hat);
  o.mc_sims = kv.get_uint("mc_sims", o.mc_sims);
  o.sample_cap = kv.get_uint("sample_cap", o.sample_cap);
  o.deterministic_knapsack = kv.get_bool("deterministic_knapsack", o.deterministic_knapsack);
  auto in_unit = [](double v) { return v > 0 && v < 1; };
  if (!in_unit(o.epsilon) || !in_unit(o.eta) || !in_unit(o.eps_hat)) {
    throw ConfigError("epsilon, eta and eps_hat must lie in (0,1)");
  }
  if (!(o.delta_prime > 0 && o.delta_prime <= 1)) throw ConfigError("delta_prime must lie in (0,1]");
  if (o.mc_sims == 0) throw ConfigError("key 'mc_sims': must be positive");
  if (o.sample_cap == 0) throw ConfigError("key 'sample_cap': must be positive");

  c.root_seed = kv.get_uint("root_seed", c.root_seed);
  c.output = kv.get_string("output", c.output.string());
  if (c.output.is_relative() && !base_dir.empty()) c.output = base_dir / c.output;
  auto workers = kv.get_int("workers", c.workers);
  if (workers < 1) throw ConfigError("key 'workers': must be at least 1");
  c.workers = static_cast<std::uint32_t>(workers);
  c.record_wallclock = kv.get_bool("record_wallclock", c.record_wallclock);
  return c;
}

ExperimentConfig ExperimentConfig::load(const std::filesystem::path& path) {
  auto kv = KeyValueConfig::load(path);
  try {
    return from(kv, path.parent_path());
  } catch (const ConfigError& e) {
    throw ConfigError(path.string() + ": " + e.what());
  }
}

std::uint64_t environment_seed(std::uint64_t root, std::uint32_t rep) { return derive_seed(root, {1, rep}); }

ExperimentRow run_cell(const ExperimentConfig& config, const SocialNetwork& net, const MultiLevelGraph& mlg,
                       PolicyKind policy, std::size_t budget_index, std::uint32_t rep) {
  ExperimentRow row;
  row.dataset = config.dataset_name;
  row.policy = policy;
  row.q = net.feature_count();
  row.budget = config.budgets.at(budget_index);
  row.rep = rep;
  if (row.budget <= 0) return row;

  HashedOutcomes world(environment_seed(config.root_seed, rep));
  Rng rng(derive_seed(config.root_seed, {2, static_cast<std::uint64_t>(policy), budget_index, rep}));
  const auto& o = config.options;
  PolicyResult result;
  switch (policy) {
    case PolicyKind::mgmc:
      result = modified_greedy(net, mlg, row.budget, GreedyEstimator::monte_carlo, rng, world, o);
      break;
    case PolicyKind::mgris:
      result = modified_greedy(net, mlg, row.budget, GreedyEstimator::reverse_sampling, rng, world, o);
      break;
    case PolicyKind::ag: result = adaptive_greedy(net, mlg, row.budget, o.mc_sims, rng, world, o); break;
    case PolicyKind::sag: result = sampled_adap_greedy(net, mlg, row.budget, o.epsilon, rng, world, o); break;
    case PolicyKind::ar: result = heuristic_ar(net, mlg, row.budget, rng, world, o); break;
    case PolicyKind::amd: result = heuristic_amd(net, mlg, row.budget, rng, world, o); break;
    case PolicyKind::amp: result = heuristic_amp(net, mlg, row.budget, rng, world, o); break;
  }
  row.seeds = std::move(result.seeds);
  row.total_cost = result.total_cost;
  row.realized_profit = result.realized_profit;
  row.estimated_profit = result.estimated_profit;
  row.samples_used = result.samples_used;
  row.wallclock_ms = std::chrono::duration<double, std::milli>(result.wallclock).count();
  return row;
}

std::vector<ExperimentRow> run_cells(const ExperimentConfig& config, const SocialNetwork& net,
                                     const MultiLevelGraph& mlg) {
  struct Cell {
    PolicyKind policy;
    std::size_t budget_index;
    std::uint32_t rep;
  };
  std::vector<Cell> cells;
  for (auto policy : config.policies) {
    for (std::size_t b = 0; b < config.budgets.size(); ++b) {
      for (std::uint32_t rep = 0; rep < config.repetitions; ++rep) cells.push_back({policy, b, rep});
    }
  }
  std::vector<ExperimentRow> rows(cells.size());
  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;
  auto worker = [&] {
    for (std::size_t i = next++; i < cells.size(); i = next++) {
      try {
        rows[i] = run_cell(config, net, mlg, cells[i].policy, cells[i].budget_index, cells[i].rep);
      } catch (...) {
        std::lock_guard lock(failure_mutex);
        if (!failure) failure = std::current_exception();
        next = cells.size();
      }
    }
  };
  const auto threads = std::min<std::size_t>(config.workers, cells.size());
  if (threads <= 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    for (std::size_t t = 0; t < threads; ++t) pool.emplace_back(worker);
  }
  if (failure) std::rethrow_exception(failure);
  return rows;
}

void write_csv(std::ostream& out, const std::vector<ExperimentRow>& rows, const SocialNetwork& net,
               bool record_wallclock) {
  for (std::size_t c = 0; c < std::size(kColumns); ++c) out << (c ? "," : "") << kColumns[c];
  out << '\n';
  for (const auto& r : rows) {
    std::string seeds;
    for (std::size_t k = 0; k < r.seeds.size(); ++k) seeds += (k ? ";" : "") + net.label(r.seeds[k]);
    out << csv_field(r.dataset) << ',' << policy_name(r.policy) << ',' << r.q << ',' << fmt_double(r.budget) << ','
        << r.rep << ',' << csv_field(seeds) << ',' << fmt_double(r.total_cost) << ','
        << fmt_double(r.realized_profit) << ',' << fmt_double(r.estimated_profit) << ',' << r.samples_used << ','
        << fmt_double(record_wallclock ? r.wallclock_ms : 0.0) << '\n';
  }
}

std::vector<SummaryRow> summarize_rows(const std::vector<ExperimentRow>& rows) {
  Aggregator agg;
  for (const auto& r : rows) {
    agg.add(policy_name(r.policy), r.budget, r.realized_profit, r.total_cost, r.estimated_profit, r.wallclock_ms);
  }
  return agg.finish();
}

void write_summary_csv(std::ostream& out, const std::vector<SummaryRow>& summary) {
  out << "policy,budget,runs,mean_profit,sd_profit,mean_cost,sd_cost,mean_estimated_profit,mean_wallclock_ms\n";
  for (const auto& s : summary) {
    out << s.policy << ',' << fmt_double(s.budget) << ',' << s.runs << ',' << fmt_double(s.mean_profit) << ','
        << fmt_double(s.sd_profit) << ',' << fmt_double(s.mean_cost) << ',' << fmt_double(s.sd_cost) << ','
        << fmt_double(s.mean_estimated) << ',' << fmt_double(s.mean_wallclock_ms) << '\n';
  }
}

std::vector<ExperimentRow> run_experiment(const ExperimentConfig& config) {
  auto net = load_network(config.dataset, config.params);
  auto mlg = build_multi_level(net);
  auto rows = run_cells(config, net, mlg);

  std::ofstream out(config.output, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write output file " + config.output.string());
  write_csv(out, rows, net, config.record_wallclock);
  if (!out) throw std::runtime_error("failed writing " + config.output.string());

  auto summary_path = config.output;
  summary_path += ".summary.csv";
  std::ofstream summary(summary_path, std::ios::binary);
  if (!summary) throw std::runtime_error("cannot write summary file " + summary_path.string());
  auto agg = summarize_rows(rows);
  if (!config.record_wallclock) {
    for (auto& s : agg) s.mean_wallclock_ms = 0;
  }
  write_summary_csv(summary, agg);
  return rows;
}

std::vector<SummaryRow> summarize(std::istream& csv) {
  std::string line;
  int line_no = 1;
  if (!std::getline(csv, line) || trim(line).empty()) throw CsvError("empty CSV");
  auto header = split_csv_line(line, line_no);
  std::map<std::string, std::size_t> col;
  for (std::size_t i = 0; i < header.size(); ++i) col[trim(header[i])] = i;
  for (const char* name : kColumns) {
    if (!col.count(name)) throw CsvError(std::string("missing column '") + name + "'");
  }

  Aggregator agg;
  std::size_t rows = 0;
  while (std::getline(csv, line)) {
    ++line_no;
    if (trim(line).empty()) continue;
    auto fields = split_csv_line(line, line_no);
    if (fields.size() != header.size()) {
      throw CsvError("line " + std::to_string(line_no) + ": expected " + std::to_string(header.size()) +
                     " fields, got " + std::to_string(fields.size()));
    }
    auto num = [&](const char* name) { return parse_field(fields[col[name]], line_no, name); };
    agg.add(fields[col["policy"]], num("budget"), num("realized_profit"), num("total_cost"), num("estimated_profit"),
            num("wallclock_ms"));
    ++rows;
  }
  if (rows == 0) throw CsvError("CSV has no data rows");
  return agg.finish();
}

void print_summary(std::ostream& out, const std::vector<SummaryRow>& summary) {
  out << std::left << std::setw(8) << "policy" << std::right << std::setw(10) << "budget" << std::setw(7) << "runs"
      << std::setw(14) << "mean_profit" << std::setw(12) << "sd_profit" << std::setw(12) << "mean_cost"
      << std::setw(16) << "mean_wall_ms" << '\n';
  out << std::fixed;
  for (const auto& s : summary) {
    out << std::left << std::setw(8) << s.policy << std::right << std::setw(10) << std::setprecision(2) << s.budget
        << std::setw(7) << s.runs << std::setw(14) << std::setprecision(4) << s.mean_profit << std::setw(12)
        << s.sd_profit << std::setw(12) << s.mean_cost << std::setw(16) << std::setprecision(1)
        << s.mean_wallclock_ms << '\n';
  }
  out << std::defaultfloat;
}

}  // namespace mfpm

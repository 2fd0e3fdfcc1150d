#include "relaybc/monte_carlo.hpp"

#include <algorithm>
#include <atomic>
#include <charconv>
#include <chrono>
#include <cmath>
#include <ctime>
#include <exception>
#include <filesystem>
#include <fstream>
#include <functional>
#include <mutex>
#include <sstream>
#include <thread>

namespace relaybc {
namespace {

struct Cell {
  int power_index;
  double power_db;
  double t;
  Variant variant;
  int n_init;
};

std::vector<Cell> enumerate_cells(const ExperimentConfig& config) {
  std::vector<Cell> cells;
  for (std::size_t ip = 0; ip < config.power_db.size(); ++ip)
    for (double t : config.t_values)
      for (Variant v : config.variants)
        for (int n : config.n_init)
          cells.push_back({static_cast<int>(ip), config.power_db[ip], t, v, n});
  return cells;
}

struct RealizationData {
  std::vector<double> values;  // one sum-rate per cell
  SolverFlagCounts flags;
  std::vector<TraceFile> traces;
};

RealizationData run_realization(const ExperimentConfig& config,
                                const Topology& topo, int r,
                                const std::vector<Cell>& cells) {
  const std::uint64_t channel_seed = derive_seed(config.seed, 2 * r);
  const std::uint64_t init_master = derive_seed(config.seed, 2 * r + 1);
  const ChannelSet channels = sample_channels(topo, config.system, channel_seed);

  int max_n = 1;
  for (int n : config.n_init) max_n = std::max(max_n, n);

  RealizationData data;
  data.values.resize(cells.size());

  std::size_t cell_index = 0;
  for (std::size_t ip = 0; ip < config.power_db.size(); ++ip) {
    SystemSpec spec = config.system;
    spec.tx_power = db_to_linear(config.power_db[ip]);
    spec.relay_power =
        db_to_linear(config.power_db[ip] + config.relay_offset_db);
    VariantRunner runner(channels, topo, spec, config.options);

    for (std::size_t it = 0; it < config.t_values.size(); ++it) {
      const double t = config.t_values[it];
      for (Variant v : config.variants) {
        // Every restart is solved once; n_init cells read prefix maxima.
        std::vector<double> prefix_best(max_n);
        double best = 0.0;
        for (int i = 0; i < max_n; ++i) {
          const RunOutcome outcome =
              runner.run(v, derive_seed(init_master, i), t, i > 0);
          if (i == 0) {
            best = outcome.sum_rate;
            if (!outcome.phase1_converged) ++data.flags.phase1_unconverged;
            if (!outcome.phase2_converged) ++data.flags.phase2_unconverged;
            if (!outcome.pc_matched) ++data.flags.pc_unmatched;
            if (config.write_traces && ip == 0 && it == 0) {
              data.traces.push_back({"trace_r" + std::to_string(r) + "_" +
                                         variant_name(v) + ".jsonl",
                                     outcome.trace});
            }
          } else {
            best = std::max(best, outcome.sum_rate);
          }
          prefix_best[i] = best;
        }
        for (int n : config.n_init)
          data.values[cell_index++] = prefix_best[n - 1];
      }
    }
  }
  return data;
}

std::string format_double(double v) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

}  // namespace

MonteCarloResult monte_carlo(const ExperimentConfig& config) {
  validate(config);
  const Topology topo = build_topology(config.system);
  const std::vector<Cell> cells = enumerate_cells(config);

  std::vector<RealizationData> per_realization(config.realizations);
  const int workers =
      std::min(config.parallel, std::max(1, config.realizations));
  std::atomic<int> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;

  const auto work = [&] {
    for (int r = next.fetch_add(1); r < config.realizations;
         r = next.fetch_add(1)) {
      try {
        per_realization[r] = run_realization(config, topo, r, cells);
      } catch (...) {
        std::lock_guard<std::mutex> lock(failure_mutex);
        if (!failure) failure = std::current_exception();
        return;
      }
    }
  };

  if (workers == 1) {
    work();
  } else {
    std::vector<std::thread> threads;
    threads.reserve(workers);
    for (int w = 0; w < workers; ++w) threads.emplace_back(work);
    for (auto& th : threads) th.join();
  }
  if (failure) std::rethrow_exception(failure);

  // Deterministic reduction in realization-index order.
  MonteCarloResult result;
  result.rows.reserve(cells.size());
  for (std::size_t c = 0; c < cells.size(); ++c) {
    double sum = 0.0;
    for (int r = 0; r < config.realizations; ++r)
      sum += per_realization[r].values[c];
    const double mean = sum / config.realizations;
    double sq = 0.0;
    for (int r = 0; r < config.realizations; ++r) {
      const double d = per_realization[r].values[c] - mean;
      sq += d * d;
    }
    const double stderr_bits =
        config.realizations > 1
            ? std::sqrt(sq / (config.realizations - 1)) /
                  std::sqrt(static_cast<double>(config.realizations))
            : 0.0;
    result.rows.push_back({cells[c].power_db, cells[c].t, cells[c].variant,
                           cells[c].n_init, mean, stderr_bits,
                           config.realizations});
  }
  for (int r = 0; r < config.realizations; ++r) {
    const auto& data = per_realization[r];
    result.flags.phase1_unconverged += data.flags.phase1_unconverged;
    result.flags.phase2_unconverged += data.flags.phase2_unconverged;
    result.flags.pc_unmatched += data.flags.pc_unmatched;
    result.traces.insert(result.traces.end(), data.traces.begin(),
                         data.traces.end());
  }
  return result;
}

SweepResult timesharing_sweep(const ExperimentConfig& config) {
  SweepResult sweep;
  sweep.mc = monte_carlo(config);
  for (double power_db : config.power_db) {
    for (Variant v : config.variants) {
      for (int n : config.n_init) {
        SweepBest best;
        best.power_db = power_db;
        best.variant = v;
        best.n_init = n;
        bool first = true;
        for (const AggregateRow& row : sweep.mc.rows) {
          if (row.power_db != power_db || row.variant != v || row.n_init != n)
            continue;
          if (first || row.mean_sum_rate_bits > best.best_mean) {
            best.best_t = row.t;
            best.best_mean = row.mean_sum_rate_bits;
            first = false;
          }
        }
        if (!first) sweep.best.push_back(best);
      }
    }
  }
  return sweep;
}

std::string format_csv(const std::vector<AggregateRow>& rows) {
  std::string out =
      "power_db,t,variant,n_init,mean_sum_rate_bits,stderr_bits,"
      "realizations\n";
  for (const AggregateRow& row : rows) {
    out += format_double(row.power_db);
    out += ',';
    out += format_double(row.t);
    out += ',';
    out += variant_name(row.variant);
    out += ',';
    out += std::to_string(row.n_init);
    out += ',';
    out += format_double(row.mean_sum_rate_bits);
    out += ',';
    out += format_double(row.stderr_bits);
    out += ',';
    out += std::to_string(row.realizations);
    out += '\n';
  }
  return out;
}

void emit_results(const MonteCarloResult& result,
                  const ExperimentConfig& config,
                  const std::string& config_text, const std::string& outdir) {
  namespace fs = std::filesystem;
  std::error_code ec;
  fs::create_directories(outdir, ec);
  if (ec)
    throw std::runtime_error("cannot create output directory " + outdir +
                             ": " + ec.message());

  const auto write_file = [&](const std::string& name,
                              const std::string& contents) {
    const fs::path path = fs::path(outdir) / name;
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot open " + path.string());
    out << contents;
    if (!out) throw std::runtime_error("write failed for " + path.string());
  };

  write_file("results.csv", format_csv(result.rows));

  for (const TraceFile& trace : result.traces) {
    std::string body;
    for (const TraceRecord& rec : trace.records) {
      body += "{\"phase\":" + std::to_string(rec.phase) +
              ",\"iteration\":" + std::to_string(rec.iteration) +
              ",\"objective_bits\":" + format_double(rec.objective_bits) +
              ",\"max_delta\":" + format_double(rec.max_delta) + "}\n";
    }
    write_file(trace.name, body);
  }

  std::ostringstream manifest;
  manifest << "config_hash=" << std::hex
           << std::hash<std::string>{}(config_text) << std::dec << "\n";
  manifest << "seed=" << config.seed << "\n";
  manifest << "version=relaybc 1.0.0\n";
  const std::time_t now =
      std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  char stamp[32];
  std::strftime(stamp, sizeof(stamp), "%Y-%m-%dT%H:%M:%SZ", std::gmtime(&now));
  manifest << "timestamp=" << stamp << "\n";
  write_file("manifest", manifest.str());
}

}  // namespace relaybc

#include "relaybc/pipeline.hpp"

#include <chrono>
#include <limits>

namespace relaybc {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

}  // namespace

const char* variant_name(Variant v) {
  switch (v) {
    case Variant::baseline:
      return "baseline";
    case Variant::baseline_pc:
      return "baseline_pc";
    case Variant::after_phase2:
      return "after_phase2";
    case Variant::final_output:
      return "final";
  }
  return "unknown";
}

std::optional<Variant> parse_variant(const std::string& name) {
  if (name == "baseline") return Variant::baseline;
  if (name == "baseline_pc") return Variant::baseline_pc;
  if (name == "after_phase2") return Variant::after_phase2;
  if (name == "final") return Variant::final_output;
  return std::nullopt;
}

VariantRunner::VariantRunner(const ChannelSet& channels, const Topology& topo,
                             SystemSpec spec, SolverOptions options)
    : channels_(channels), topo_(topo), spec_(spec), options_(options) {
  validate(spec_);
}

const VariantRunner::SharedInit& VariantRunner::shared(std::uint64_t init_seed,
                                                       bool explore) {
  const auto key = std::make_pair(init_seed, explore);
  auto it = shared_cache_.find(key);
  if (it != shared_cache_.end()) return it->second;

  // One stream yields the phase-1 init first, then the first-hop init, so
  // every variant at every t sees the same pair.
  Rng rng(init_seed);
  SharedInit entry;
  auto hop2_init = random_second_hop_init(topo_, spec_, rng, explore);
  entry.hop1_init = random_first_hop_init(topo_, spec_, rng, explore);
  entry.phase1 =
      solve_second_hop(channels_, topo_, spec_, std::move(hop2_init), options_);
  return shared_cache_.emplace(key, std::move(entry)).first->second;
}

const FirstHopResult& VariantRunner::first_hop(std::uint64_t init_seed,
                                               bool explore, bool matched,
                                               double t) {
  const auto key = std::make_tuple(init_seed, explore, matched, t);
  auto it = first_hop_cache_.find(key);
  if (it != first_hop_cache_.end()) return it->second;

  const SharedInit& base = shared(init_seed, explore);
  std::vector<double> eta(topo_.num_relays(), kInf);
  if (matched) {
    for (int k = 0; k < topo_.num_relays(); ++k) {
      const double xi2 = xi2_override_ ? *xi2_override_ : base.phase1.relay_sinr[k];
      eta[k] = rate_matching_sinr(xi2, t);
    }
  }
  SystemSpec spec_t = spec_;
  spec_t.timeshare = t;
  FirstHopResult result = solve_first_hop(channels_, topo_, spec_t, eta,
                                          base.hop1_init, options_);
  return first_hop_cache_.emplace(key, std::move(result)).first->second;
}

RunOutcome VariantRunner::run(Variant variant, std::uint64_t init_seed,
                              double t, bool explore) {
  const auto start = std::chrono::steady_clock::now();

  const SharedInit& base = shared(init_seed, explore);
  const bool matched =
      variant == Variant::after_phase2 || variant == Variant::final_output;
  const bool power_control =
      variant == Variant::baseline_pc || variant == Variant::final_output;
  const FirstHopResult& phase2 = first_hop(init_seed, explore, matched, t);

  RunOutcome out;
  out.variant = variant;
  out.init_seed = init_seed;
  out.phase1_converged = base.phase1.converged;
  out.phase2_converged = phase2.converged;
  out.trace = base.phase1.trace;
  out.trace.insert(out.trace.end(), phase2.trace.begin(), phase2.trace.end());

  SystemSpec spec_t = spec_;
  spec_t.timeshare = t;

  PrecoderSet precoders;
  precoders.hop1 = phase2.precoders;
  precoders.hop2 = base.phase1.precoders;

  if (power_control) {
    std::vector<double> eta(topo_.num_relays());
    for (int k = 0; k < topo_.num_relays(); ++k) {
      const double xi2 = xi2_override_ ? *xi2_override_ : base.phase1.relay_sinr[k];
      eta[k] = rate_matching_sinr(xi2, t);
    }
    PowerState state = decompose_precoders(precoders.hop1, eta);
    PowerControlProblem problem(channels_, topo_, spec_t, state.shapes);
    PowerControlResult pc = run_power_control(problem, std::move(state),
                                              options_.max_iter_power_control);
    precoders.hop1 = assemble_precoders(pc.state);
    out.trace.insert(out.trace.end(), pc.trace.begin(), pc.trace.end());
    out.pc_matched = pc.matched;
    out.pc_iterations = pc.iterations;
  }

  out.report = compute_rate_report(channels_, topo_, spec_t, precoders);
  out.sum_rate = out.report.sum_rate;
  out.upper_bound = upper_bound_rate(init_seed, t, explore);
  out.wall_time_sec =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start)
          .count();
  return out;
}

RunOutcome VariantRunner::opportunistic_best(Variant variant, int num_inits,
                                             std::uint64_t seed, double t) {
  if (num_inits < 1) throw ValidationError("opportunistic_best: N must be >= 1");
  RunOutcome best;
  for (int i = 0; i < num_inits; ++i) {
    RunOutcome candidate = run(variant, derive_seed(seed, i), t, i > 0);
    if (i == 0 || candidate.sum_rate > best.sum_rate)
      best = std::move(candidate);
  }
  return best;
}

double VariantRunner::upper_bound_rate(std::uint64_t init_seed, double t,
                                       bool explore) {
  const SharedInit& base = shared(init_seed, explore);
  double total = 0.0;
  for (double r : base.phase1.relay_sum_rate) total += r;
  return (1.0 - t) * total;
}

}  // namespace relaybc

// Apache License, Version 2.0, refer to LICENSE.txt

#ifndef SRR_SIMULATE_HPP
#define SRR_SIMULATE_HPP

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

namespace srr {

// Outcome of a single replication: a performance value plus one 0/1 flag per
// registered event label.
struct Trial {
  double value = 0.0;
  std::vector<std::uint8_t> events;
};

using TrialFn = std::function<Trial(std::uint64_t replication_seed)>;

struct EventStat {
  double frequency = 0.0;
  double half_width = 0.0;  // z * sqrt(f (1-f) / R)
};

struct SimulationReport {
  long replications = 0;
  double mean = 0.0;
  double std_error = 0.0;
  std::uint64_t seed = 0;
  double z = 3.0;
  double wall_seconds = 0.0;
  std::vector<std::string> labels;
  std::vector<EventStat> events;

  std::optional<EventStat> find(const std::string& label) const;
};

// R independent replications with per-replication seeds derived from
// (master_seed, index) by a counter-based scheme; the report is identical for
// fixed inputs regardless of how replications would be scheduled.
SimulationReport run_trials(const std::vector<std::string>& labels, const TrialFn& fn,
                            long replications, std::uint64_t master_seed, double z = 3.0);

struct MarginalCheck {
  std::string label;
  double frequency = 0.0;
  double half_width = 0.0;
  double target = 0.0;
  bool missing = false;
  bool pass = false;
};

// Per-event verdict: frequency + half_width >= factor * target. Targets whose
// label is absent from the report are listed as missing failures.
std::vector<MarginalCheck> verify_marginals(
    const SimulationReport& report,
    const std::vector<std::pair<std::string, double>>& targets, double factor);

}  // namespace srr

#endif  // SRR_SIMULATE_HPP

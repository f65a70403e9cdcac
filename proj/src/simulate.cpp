// Apache License, Version 2.0, refer to LICENSE.txt

#include "srr/simulate.hpp"

#include <chrono>
#include <cmath>
#include <stdexcept>

#include "srr/random.hpp"

namespace srr {

namespace {

// Neumaier-compensated accumulator; insensitive to summand ordering in
// practice and exact enough for 1e6-replication means.
struct CompensatedSum {
  double sum = 0.0;
  double comp = 0.0;

  void add(double v) {
    const double t = sum + v;
    if (std::abs(sum) >= std::abs(v)) {
      comp += (sum - t) + v;
    } else {
      comp += (v - t) + sum;
    }
    sum = t;
  }

  double value() const { return sum + comp; }
};

}  // namespace

std::optional<EventStat> SimulationReport::find(const std::string& label) const {
  for (std::size_t i = 0; i < labels.size(); ++i) {
    if (labels[i] == label) return events[i];
  }
  return std::nullopt;
}

SimulationReport run_trials(const std::vector<std::string>& labels, const TrialFn& fn,
                            long replications, std::uint64_t master_seed, double z) {
  if (replications < 1) throw std::invalid_argument("need at least one replication");
  const auto start = std::chrono::steady_clock::now();

  CompensatedSum total, total_sq;
  std::vector<long> counts(labels.size(), 0);
  for (long r = 0; r < replications; ++r) {
    const Trial trial = fn(replication_seed(master_seed, static_cast<std::uint64_t>(r)));
    if (trial.events.size() != labels.size()) {
      throw std::invalid_argument("trial event flags do not match registered labels");
    }
    total.add(trial.value);
    total_sq.add(trial.value * trial.value);
    for (std::size_t e = 0; e < counts.size(); ++e) counts[e] += trial.events[e] ? 1 : 0;
  }

  SimulationReport report;
  report.replications = replications;
  report.seed = master_seed;
  report.z = z;
  report.labels = labels;
  const double n = static_cast<double>(replications);
  report.mean = total.value() / n;
  if (replications > 1) {
    const double var =
        std::max(0.0, (total_sq.value() - n * report.mean * report.mean) / (n - 1.0));
    report.std_error = std::sqrt(var / n);
  }
  report.events.reserve(labels.size());
  for (long count : counts) {
    EventStat stat;
    stat.frequency = static_cast<double>(count) / n;
    stat.half_width = z * std::sqrt(stat.frequency * (1.0 - stat.frequency) / n);
    report.events.push_back(stat);
  }
  report.wall_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return report;
}

std::vector<MarginalCheck> verify_marginals(
    const SimulationReport& report,
    const std::vector<std::pair<std::string, double>>& targets, double factor) {
  std::vector<MarginalCheck> checks;
  checks.reserve(targets.size());
  for (const auto& [label, target] : targets) {
    MarginalCheck check;
    check.label = label;
    check.target = target;
    const auto stat = report.find(label);
    if (!stat) {
      check.missing = true;
      check.pass = false;
    } else {
      check.frequency = stat->frequency;
      check.half_width = stat->half_width;
      check.pass = check.frequency + check.half_width >= factor * target;
    }
    checks.push_back(check);
  }
  return checks;
}

}  // namespace srr

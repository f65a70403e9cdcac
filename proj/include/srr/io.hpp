// Apache License, Version 2.0, refer to LICENSE.txt

#ifndef SRR_IO_HPP
#define SRR_IO_HPP

#include <iosfwd>
#include <string>
#include <variant>

#include "srr/knapsack.hpp"
#include "srr/matching.hpp"
#include "srr/rationing.hpp"
#include "srr/sequencing.hpp"
#include "srr/simulate.hpp"

namespace srr {

enum class ProblemKind { Rationing, Hiring, ProbeTopK, Knapsack, Matching, GraphProbing };

std::string kind_name(ProblemKind kind);

struct AnyInstance {
  ProblemKind kind;
  std::variant<RationingInstance, HiringInstance, ProbeInstance, KnapsackInstance,
               MatchingInstance, GraphProbingInstance>
      value;
};

// JSON object with a "kind" key selecting the schema; throws
// std::runtime_error naming the offending field on malformed input. Files
// whose first non-space character is not '{' are parsed as graph-probing
// edge lists ("u v weight prob" per line, '#' comments).
AnyInstance read_instance(const std::string& path);

AnyInstance parse_instance_json(const std::string& text);

GraphProbingInstance parse_edge_list(std::istream& in);

std::string instance_to_json(const AnyInstance& inst);

void write_instance(const AnyInstance& inst, const std::string& path);

// Comma-separated report with a header row; events are listed per label, and
// free-table rows can be appended by the knapsack pipeline.
void write_report_csv(const SimulationReport& report, std::ostream& out);

void append_free_table_csv(const FreeTable& table, std::ostream& out);

}  // namespace srr

#endif  // SRR_IO_HPP

#pragma once

#include "missreg/core.hpp"

#include <cstdint>
#include <span>
#include <string>
#include <vector>

namespace missreg {

// One convergence-curve sample. A file groups the arms of one scenario
// replication; k must be strictly increasing within each algorithm label.
struct TraceRow {
  std::string algorithm;
  long k = 0;
  double excess_at_avg = 0.0;
  double excess_at_last = 0.0;
  std::int64_t wall_ns = 0;
};

// CSV body preceded by '#'-prefixed header lines echoing the run config.
struct TraceDoc {
  std::vector<std::string> header;
  std::vector<TraceRow> rows;

  void validate() const;
};

void write_trace(const std::string& path, const TraceDoc& doc);
TraceDoc read_trace(const std::string& path);

// Least-squares slope of log(v) against log(k). Points with v <= 0 are
// dropped (an excess risk can hit the numerical floor); at least two
// distinct k must survive.
double loglog_slope(std::span<const double> k, std::span<const double> v);

// Per-(algorithm, k) quantiles across replications, one NDJSON line each.
struct SummaryStats {
  double mean = 0.0, q25 = 0.0, median = 0.0, q75 = 0.0;
};
struct SummaryRow {
  std::string algorithm;
  long k = 0;
  long count = 0;
  SummaryStats at_avg;
  SummaryStats at_last;
};

std::vector<SummaryRow> summarize_traces(std::span<const TraceDoc> docs);
void write_summary(const std::string& path, std::span<const SummaryRow> rows);

}  // namespace missreg

#pragma once

#include <cstddef>
#include <string>
#include <vector>

namespace skillmap {

struct MatchCounts {
  std::size_t tp = 0;
  std::size_t fp = 0;
  std::size_t fn = 0;

  MatchCounts& operator+=(const MatchCounts& o) noexcept {
    tp += o.tp;
    fp += o.fp;
    fn += o.fn;
    return *this;
  }
};

struct MetricsReport {
  std::size_t tp = 0;
  std::size_t fp = 0;
  std::size_t fn = 0;
  double precision = 0.0;
  double recall = 0.0;
  double f1 = 0.0;
};

// Harmonic mean; 0 when both inputs are 0.
[[nodiscard]] double f1_score(double precision, double recall) noexcept;

[[nodiscard]] MetricsReport metrics_from_counts(const MatchCounts& counts) noexcept;

// Set comparison; duplicates in either list count once.
[[nodiscard]] MatchCounts compare_sets(const std::vector<std::string>& predicted,
                                       const std::vector<std::string>& truth);

[[nodiscard]] MetricsReport compute_metrics(const std::vector<std::string>& predicted,
                                            const std::vector<std::string>& truth);

// Micro-average: counts are summed before the ratios are taken.
[[nodiscard]] MetricsReport aggregate_metrics(const std::vector<MatchCounts>& per_document);

}  // namespace skillmap

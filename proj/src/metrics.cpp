#include "skillmap/metrics.hpp"

#include <set>

namespace skillmap {

double f1_score(double precision, double recall) noexcept {
  const double denom = precision + recall;
  return denom > 0.0 ? 2.0 * precision * recall / denom : 0.0;
}

MetricsReport metrics_from_counts(const MatchCounts& c) noexcept {
  MetricsReport r;
  r.tp = c.tp;
  r.fp = c.fp;
  r.fn = c.fn;
  r.precision = c.tp + c.fp > 0 ? static_cast<double>(c.tp) / static_cast<double>(c.tp + c.fp) : 0.0;
  r.recall = c.tp + c.fn > 0 ? static_cast<double>(c.tp) / static_cast<double>(c.tp + c.fn) : 0.0;
  r.f1 = f1_score(r.precision, r.recall);
  return r;
}

MatchCounts compare_sets(const std::vector<std::string>& predicted, const std::vector<std::string>& truth) {
  const std::set<std::string> p(predicted.begin(), predicted.end());
  const std::set<std::string> t(truth.begin(), truth.end());
  MatchCounts c;
  for (const auto& x : p) (t.count(x) ? c.tp : c.fp) += 1;
  for (const auto& x : t) c.fn += p.count(x) ? 0 : 1;
  return c;
}

MetricsReport compute_metrics(const std::vector<std::string>& predicted, const std::vector<std::string>& truth) {
  return metrics_from_counts(compare_sets(predicted, truth));
}

MetricsReport aggregate_metrics(const std::vector<MatchCounts>& per_document) {
  MatchCounts total;
  for (const auto& c : per_document) total += c;
  return metrics_from_counts(total);
}

}  // namespace skillmap

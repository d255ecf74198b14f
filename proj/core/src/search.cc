#include "best/search.h"

#include <map>

#include "best/error.h"
#include "best/policy.h"
#include "best/rng.h"

namespace best {
namespace {

struct BalancedSplits {
  LabeledDataset train;
  LabeledDataset val;
  std::int64_t q_min;
  std::int64_t q_max;
};

BalancedSplits Prepare(const LabeledDataset& train, const LabeledDataset& val,
                       const SearchConfig& cfg) {
  cfg.Validate();
  if (train.source_classes() != val.source_classes() ||
      train.target_classes() != val.target_classes()) {
    throw InvalidInput("train and validation splits disagree on m or n");
  }
  BalancedSplits s{Balance(train, DeriveSeed(cfg.seed, 0)),
                   Balance(val, DeriveSeed(cfg.seed, 1)), cfg.q_min, 0};
  const auto per_class = static_cast<std::int64_t>(s.val.size()) /
                         s.val.target_classes();
  s.q_max = cfg.q_max.value_or(per_class);
  if (s.q_max < s.q_min) {
    throw InsufficientData(
        "insufficient validation data: search range [" +
        std::to_string(s.q_min) + ", " + std::to_string(s.q_max) +
        "] is empty (" + std::to_string(per_class) +
        " validation samples per class)");
  }
  return s;
}

// Memoizes A_val per level within one search and records the trace.
class LevelCache {
 public:
  LevelCache(const LabeledDataset& train, const LabeledDataset& val)
      : train_(train), val_(val) {}

  const ProbeRecord& Get(std::int64_t q) {
    const auto it = index_.find(q);
    if (it != index_.end()) return trace_[it->second];
    index_.emplace(q, trace_.size());
    trace_.push_back(EvaluateLevel(train_, val_, q));
    return trace_.back();
  }

  std::vector<ProbeRecord> TakeTrace() { return std::move(trace_); }

 private:
  const LabeledDataset& train_;
  const LabeledDataset& val_;
  std::map<std::int64_t, std::size_t> index_;
  std::vector<ProbeRecord> trace_;
};

std::int64_t BestProbe(const std::vector<ProbeRecord>& trace) {
  const ProbeRecord* best = &trace.front();
  for (const ProbeRecord& r : trace) {
    if (r.val > best->val || (r.val == best->val && r.q < best->q)) best = &r;
  }
  return best->q;
}

}  // namespace

void SearchConfig::Validate() const {
  if (tolerance < 1) throw InvalidInput("tolerance must be >= 1");
  if (max_steps < 1) throw InvalidInput("max_steps must be >= 1");
  if (q_min < 2) throw InvalidInput("q_min must be >= 2");
  if (q_max && *q_max < q_min) {
    throw InvalidInput("q_max must be >= q_min");
  }
}

std::string ToString(SearchMethod method) {
  return method == SearchMethod::kTernary ? "ternary" : "brute";
}

SearchMethod ParseSearchMethod(const std::string& name) {
  if (name == "ternary") return SearchMethod::kTernary;
  if (name == "brute") return SearchMethod::kBrute;
  throw InvalidInput("unknown search method '" + name + "'");
}

ProbeRecord EvaluateLevel(const LabeledDataset& train,
                          const LabeledDataset& val, std::int64_t q) {
  const QuantizationLevel level(q);
  const ConditionalCounts counts = BuildCounts(train, level);
  const Policy policy = DerivePolicy(counts);
  return ProbeRecord{q, TrainAccuracy(counts, policy),
                     ValAccuracy(val, policy, level)};
}

MetricResult MetricTernary(const LabeledDataset& train,
                           const LabeledDataset& val,
                           const SearchConfig& cfg) {
  const BalancedSplits s = Prepare(train, val, cfg);
  LevelCache cache(s.train, s.val);
  const TernaryBounds b = TernarySearchMax(
      s.q_min, s.q_max, cfg.tolerance, cfg.max_steps,
      [&](std::int64_t q) { return cache.Get(q).val; });

  MetricResult r;
  r.method = SearchMethod::kTernary;
  const Fraction left_val = cache.Get(b.left).val;
  const Fraction right_val = cache.Get(b.right).val;
  r.metric = (left_val + right_val) * Fraction(1, 2);
  r.final_left = b.left;
  r.final_right = b.right;
  r.q_min = s.q_min;
  r.q_max = s.q_max;
  r.steps = b.steps;
  r.trace = cache.TakeTrace();
  r.q_star = BestProbe(r.trace);
  return r;
}

MetricResult MetricBrute(const LabeledDataset& train,
                         const LabeledDataset& val, const SearchConfig& cfg) {
  const BalancedSplits s = Prepare(train, val, cfg);
  MetricResult r;
  r.method = SearchMethod::kBrute;
  r.q_min = s.q_min;
  r.q_max = s.q_max;
  r.final_left = s.q_min;
  r.final_right = s.q_max;
  r.trace.reserve(static_cast<std::size_t>(s.q_max - s.q_min + 1));
  for (std::int64_t q = s.q_min; q <= s.q_max; ++q) {
    r.trace.push_back(EvaluateLevel(s.train, s.val, q));
  }
  r.q_star = BestProbe(r.trace);
  for (const ProbeRecord& p : r.trace) {
    if (p.q == r.q_star) r.metric = p.val;
  }
  return r;
}

MetricResult ComputeMetric(const LabeledDataset& train,
                           const LabeledDataset& val, const SearchConfig& cfg,
                           SearchMethod method) {
  return method == SearchMethod::kTernary ? MetricTernary(train, val, cfg)
                                          : MetricBrute(train, val, cfg);
}

std::vector<ProbeRecord> SweepCurve(const LabeledDataset& train,
                                    const LabeledDataset& val,
                                    std::span<const std::int64_t> q_list) {
  std::vector<ProbeRecord> out;
  out.reserve(q_list.size());
  for (const std::int64_t q : q_list) {
    out.push_back(EvaluateLevel(train, val, q));
  }
  return out;
}

}  // namespace best

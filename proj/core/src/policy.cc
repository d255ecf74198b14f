#include "best/policy.h"

#include <algorithm>
#include <map>
#include <numeric>
#include <string>

#include "best/error.h"

namespace best {
namespace {

void CheckLabel(int label, int n) {
  if (label < 1 || label > n) {
    throw InvalidInput("label " + std::to_string(label) + " outside [1, " +
                       std::to_string(n) + "]");
  }
}

std::vector<int> AllLabels(int n) {
  std::vector<int> labels(static_cast<std::size_t>(n));
  std::iota(labels.begin(), labels.end(), 1);
  return labels;
}

}  // namespace

ConditionalCounts::ConditionalCounts(std::int64_t level, int target_classes)
    : level_(level),
      n_(target_classes),
      totals_(static_cast<std::size_t>(target_classes), 0) {
  if (n_ < 2) throw InvalidInput("target class count must be >= 2");
}

Fraction ConditionalCounts::Conditional(const BinKey& key, int label) const {
  CheckLabel(label, n_);
  const std::int64_t total = totals_[static_cast<std::size_t>(label - 1)];
  if (total == 0) {
    throw InvalidInput("class " + std::to_string(label) +
                       " has no training samples");
  }
  const auto it = bins_.find(key);
  if (it == bins_.end()) return Fraction(0, 1);
  return Fraction(it->second[static_cast<std::size_t>(label - 1)], total);
}

void ConditionalCounts::Increment(const BinKey& key, int label) {
  CheckLabel(label, n_);
  if (key.level() != level_) throw InvalidInput("bin level mismatch");
  auto [it, inserted] = bins_.try_emplace(key);
  if (inserted) it->second.assign(static_cast<std::size_t>(n_), 0);
  ++it->second[static_cast<std::size_t>(label - 1)];
  ++totals_[static_cast<std::size_t>(label - 1)];
}

void ConditionalCounts::Merge(const ConditionalCounts& other) {
  if (other.level_ != level_ || other.n_ != n_) {
    throw InvalidInput("cannot merge counts of different level or n");
  }
  for (const auto& [key, row] : other.bins_) {
    auto [it, inserted] = bins_.try_emplace(key);
    if (inserted) it->second.assign(static_cast<std::size_t>(n_), 0);
    for (std::size_t c = 0; c < row.size(); ++c) it->second[c] += row[c];
  }
  for (std::size_t c = 0; c < totals_.size(); ++c) {
    totals_[c] += other.totals_[c];
  }
}

ConditionalCounts BuildCounts(const LabeledDataset& data,
                              QuantizationLevel q) {
  if (data.empty()) throw InvalidInput("cannot build counts from empty data");
  ConditionalCounts counts(q.value(), data.target_classes());
  for (std::size_t i = 0; i < data.size(); ++i) {
    counts.Increment(Quantize(data.probs(i), q), data.label(i));
  }
  const auto totals = counts.per_class_totals();
  for (std::size_t c = 0; c < totals.size(); ++c) {
    if (totals[c] == 0) {
      throw InvalidInput("class " + std::to_string(c + 1) +
                         " has no training samples");
    }
  }
  return counts;
}

Decision Decision::Single(int label) { return Decision({label}); }

Decision Decision::Tie(std::vector<int> labels) {
  std::sort(labels.begin(), labels.end());
  labels.erase(std::unique(labels.begin(), labels.end()), labels.end());
  if (labels.size() < 2) throw InvalidInput("a tie needs at least 2 classes");
  return Decision(std::move(labels));
}

bool Decision::Contains(int label) const {
  return std::binary_search(classes_.begin(), classes_.end(), label);
}

Policy::Policy(std::int64_t level, int target_classes, Map decisions)
    : level_(level),
      n_(target_classes),
      decisions_(std::move(decisions)),
      default_(Decision::Tie(AllLabels(target_classes))) {
  for (const auto& [key, decision] : decisions_) {
    if (key.level() != level_) throw InvalidInput("policy level mismatch");
    for (const int c : decision.classes()) CheckLabel(c, n_);
  }
}

const Decision& Policy::Decide(const BinKey& key) const {
  const auto it = decisions_.find(key);
  return it == decisions_.end() ? default_ : it->second;
}

Policy DerivePolicy(const ConditionalCounts& counts) {
  const auto totals = counts.per_class_totals();
  const int n = counts.target_classes();
  Policy::Map decisions;
  decisions.reserve(counts.bins().size());
  std::vector<int> best;
  for (const auto& [key, row] : counts.bins()) {
    // Compare row[a]/totals[a] against row[b]/totals[b] by cross-multiplying
    // so ties are detected exactly.
    best.assign(1, 1);
    for (int c = 2; c <= n; ++c) {
      const auto ci = static_cast<std::size_t>(c - 1);
      const auto bi = static_cast<std::size_t>(best.front() - 1);
      const Int128 lhs = static_cast<Int128>(row[ci]) * totals[bi];
      const Int128 rhs = static_cast<Int128>(row[bi]) * totals[ci];
      if (lhs > rhs) {
        best.assign(1, c);
      } else if (lhs == rhs) {
        best.push_back(c);
      }
    }
    decisions.emplace(key, best.size() == 1 ? Decision::Single(best.front())
                                            : Decision::Tie(best));
  }
  return Policy(counts.level(), n, std::move(decisions));
}

Fraction TrainAccuracy(const ConditionalCounts& counts, const Policy& policy) {
  if (counts.level() != policy.level()) {
    throw InvalidInput("policy level " + std::to_string(policy.level()) +
                       " differs from counts level " +
                       std::to_string(counts.level()));
  }
  const int n = counts.target_classes();
  if (policy.target_classes() != n) {
    throw InvalidInput("policy and counts disagree on n");
  }
  // mass[{k, c}] = number of class-c samples sitting in k-way decisions
  // that include c. Summing integers first keeps the rational small.
  std::map<std::pair<std::size_t, int>, std::int64_t> mass;
  for (const auto& [key, row] : counts.bins()) {
    const Decision& d = policy.Decide(key);
    const std::size_t k = d.classes().size();
    for (const int c : d.classes()) {
      mass[{k, c}] += row[static_cast<std::size_t>(c - 1)];
    }
  }
  const auto totals = counts.per_class_totals();
  Fraction acc;
  for (const auto& [kc, m] : mass) {
    if (m == 0) continue;
    const std::int64_t total = totals[static_cast<std::size_t>(kc.second - 1)];
    acc += Fraction(m, total * static_cast<std::int64_t>(kc.first) * n);
  }
  return acc;
}

Fraction ValAccuracy(const LabeledDataset& val, const Policy& policy,
                     QuantizationLevel q) {
  if (val.empty()) throw InvalidInput("validation set is empty");
  if (q.value() != policy.level()) {
    throw InvalidInput("policy level " + std::to_string(policy.level()) +
                       " differs from requested level " +
                       std::to_string(q.value()));
  }
  if (val.target_classes() != policy.target_classes()) {
    throw InvalidInput("validation set and policy disagree on n");
  }
  // hits[k] = number of samples whose label lies in a k-way decision.
  std::map<std::size_t, std::int64_t> hits;
  for (std::size_t i = 0; i < val.size(); ++i) {
    const Decision& d = policy.Decide(Quantize(val.probs(i), q));
    if (d.Contains(val.label(i))) ++hits[d.classes().size()];
  }
  const auto total = static_cast<std::int64_t>(val.size());
  Fraction acc;
  for (const auto& [k, h] : hits) {
    acc += Fraction(h, total * static_cast<std::int64_t>(k));
  }
  return acc;
}

double ValAccuracySampled(const LabeledDataset& val, const Policy& policy,
                          QuantizationLevel q, Rng& rng) {
  if (val.empty()) throw InvalidInput("validation set is empty");
  if (q.value() != policy.level()) {
    throw InvalidInput("policy level differs from requested level");
  }
  std::size_t correct = 0;
  for (std::size_t i = 0; i < val.size(); ++i) {
    const auto classes = policy.Decide(Quantize(val.probs(i), q)).classes();
    const int guess = classes[rng.UniformIndex(classes.size())];
    if (guess == val.label(i)) ++correct;
  }
  return static_cast<double>(correct) / static_cast<double>(val.size());
}

LabeledDataset Balance(const LabeledDataset& data, std::uint64_t seed) {
  const int n = data.target_classes();
  std::vector<std::vector<std::size_t>> rows(static_cast<std::size_t>(n));
  for (std::size_t i = 0; i < data.size(); ++i) {
    rows[static_cast<std::size_t>(data.label(i) - 1)].push_back(i);
  }
  std::size_t keep = SIZE_MAX;
  for (int c = 1; c <= n; ++c) {
    const auto& r = rows[static_cast<std::size_t>(c - 1)];
    if (r.empty()) {
      throw InvalidInput("class " + std::to_string(c) + " has no samples");
    }
    keep = std::min(keep, r.size());
  }
  Rng rng(seed);
  std::vector<std::size_t> selected;
  selected.reserve(keep * static_cast<std::size_t>(n));
  for (auto& r : rows) {
    // Partial Fisher-Yates: the first `keep` slots become a uniform sample.
    if (r.size() > keep) {
      for (std::size_t i = 0; i < keep; ++i) {
        const std::size_t j = i + rng.UniformIndex(r.size() - i);
        std::swap(r[i], r[j]);
      }
      r.resize(keep);
    }
    selected.insert(selected.end(), r.begin(), r.end());
  }
  std::sort(selected.begin(), selected.end());
  return data.Subset(selected);
}

}  // namespace best

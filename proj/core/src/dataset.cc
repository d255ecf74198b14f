#include "best/dataset.h"

#include <algorithm>
#include <cmath>
#include <string>

#include "best/error.h"

namespace best {

void NormalizeSoftmax(std::span<double> probs) {
  if (probs.size() < 2) {
    throw InvalidInput("softmax vector needs at least 2 entries, got " +
                       std::to_string(probs.size()));
  }
  double sum = 0.0;
  for (const double p : probs) {
    if (!std::isfinite(p)) throw InvalidInput("non-finite softmax entry");
    if (p < 0.0) {
      throw InvalidInput("negative softmax entry " + std::to_string(p));
    }
    if (p > 1.0 + kSoftmaxSumTolerance) {
      throw InvalidInput("softmax entry above 1: " + std::to_string(p));
    }
    sum += p;
  }
  if (std::abs(sum - 1.0) > kSoftmaxSumTolerance) {
    throw InvalidInput("softmax entries sum to " + std::to_string(sum) +
                       ", expected 1");
  }
  if (sum != 1.0) {
    for (double& p : probs) p = std::min(1.0, p / sum);
  }
}

SoftmaxVector::SoftmaxVector(std::vector<double> probs)
    : probs_(std::move(probs)) {
  NormalizeSoftmax(probs_);
}

LabeledDataset::LabeledDataset(int source_classes, int target_classes)
    : m_(source_classes), n_(target_classes) {
  if (m_ < 2) throw InvalidInput("source class count m must be >= 2");
  if (n_ < 2) throw InvalidInput("target class count n must be >= 2");
}

void LabeledDataset::Add(std::span<const double> probs, int label) {
  if (probs.size() != static_cast<std::size_t>(m_)) {
    throw InvalidInput("softmax width " + std::to_string(probs.size()) +
                       " does not match m=" + std::to_string(m_));
  }
  if (label < 1 || label > n_) {
    throw InvalidInput("label " + std::to_string(label) + " outside [1, " +
                       std::to_string(n_) + "]");
  }
  const std::size_t offset = probs_.size();
  probs_.insert(probs_.end(), probs.begin(), probs.end());
  try {
    NormalizeSoftmax(std::span<double>(probs_.data() + offset, probs.size()));
  } catch (...) {
    probs_.resize(offset);
    throw;
  }
  labels_.push_back(label);
}

void LabeledDataset::Add(const SoftmaxVector& probs, int label) {
  Add(probs.probs(), label);
}

std::vector<std::size_t> LabeledDataset::ClassCounts() const {
  std::vector<std::size_t> counts(static_cast<std::size_t>(n_), 0);
  for (const int y : labels_) ++counts[static_cast<std::size_t>(y - 1)];
  return counts;
}

LabeledDataset LabeledDataset::Subset(
    std::span<const std::size_t> rows) const {
  LabeledDataset out(m_, n_);
  out.probs_.reserve(rows.size() * static_cast<std::size_t>(m_));
  out.labels_.reserve(rows.size());
  for (const std::size_t r : rows) {
    if (r >= size()) throw InvalidInput("row index out of range");
    const auto p = probs(r);
    out.probs_.insert(out.probs_.end(), p.begin(), p.end());
    out.labels_.push_back(labels_[r]);
  }
  return out;
}

}  // namespace best

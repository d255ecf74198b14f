#ifndef BEST_DATASET_H_
#define BEST_DATASET_H_

#include <cstddef>
#include <span>
#include <vector>

namespace best {

// Softmax rows whose sum is off by at most this much are rescaled onto the
// simplex; anything larger is rejected.
inline constexpr double kSoftmaxSumTolerance = 1e-6;

// An m-class probability vector, m >= 2, validated on construction.
class SoftmaxVector {
 public:
  // Throws InvalidInput on wrong length, negative or non-finite entries, or a
  // sum further than kSoftmaxSumTolerance from 1.
  explicit SoftmaxVector(std::vector<double> probs);

  std::span<const double> probs() const { return probs_; }
  std::size_t size() const { return probs_.size(); }
  double operator[](std::size_t j) const { return probs_[j]; }

 private:
  std::vector<double> probs_;
};

// Validates `probs` in place (renormalizing within tolerance).
void NormalizeSoftmax(std::span<double> probs);

// Source softmax outputs on target samples together with their target
// labels. Labels are 1-based, in [1, n]. Rows are stored contiguously.
class LabeledDataset {
 public:
  LabeledDataset(int source_classes, int target_classes);

  // Copies, validates and (if needed) renormalizes `probs`.
  void Add(std::span<const double> probs, int label);
  void Add(const SoftmaxVector& probs, int label);

  int source_classes() const { return m_; }
  int target_classes() const { return n_; }
  std::size_t size() const { return labels_.size(); }
  bool empty() const { return labels_.empty(); }

  std::span<const double> probs(std::size_t row) const {
    return {probs_.data() + row * static_cast<std::size_t>(m_),
            static_cast<std::size_t>(m_)};
  }
  int label(std::size_t row) const { return labels_[row]; }
  std::span<const int> labels() const { return labels_; }

  // Sample count per class; element c is the count for label c + 1.
  std::vector<std::size_t> ClassCounts() const;

  // Rows in the order given by `rows`.
  LabeledDataset Subset(std::span<const std::size_t> rows) const;

  friend bool operator==(const LabeledDataset&,
                         const LabeledDataset&) = default;

 private:
  int m_;
  int n_;
  std::vector<double> probs_;
  std::vector<int> labels_;
};

}  // namespace best

#endif  // BEST_DATASET_H_

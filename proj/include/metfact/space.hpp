#pragma once

#include <cstddef>
#include <map>
#include <span>
#include <string>
#include <unordered_map>
#include <vector>

namespace metfact {

// Sorted, duplicate-free point indices into a FinMetricSpace.
using IndexSet = std::vector<std::size_t>;

/// A finite set of labelled points with a square distance matrix.
///
/// Construction checks shape only (square matrix, one row per label,
/// distinct labels, finite non-negative entries). Whether the matrix is
/// actually a metric is answered by validate_metric(); the quotient and
/// suite machinery needs to hold perturbed matrices for fault injection.
class FinMetricSpace {
 public:
  FinMetricSpace() = default;
  FinMetricSpace(std::vector<std::string> labels, std::vector<double> row_major);
  FinMetricSpace(std::vector<std::string> labels,
                 const std::vector<std::vector<double>>& rows);

  std::size_t size() const { return labels_.size(); }
  bool empty() const { return labels_.empty(); }

  double operator()(std::size_t i, std::size_t j) const {
    return dist_[i * labels_.size() + j];
  }
  std::span<const double> row(std::size_t i) const {
    return {dist_.data() + i * labels_.size(), labels_.size()};
  }
  std::span<const double> data() const { return dist_; }

  const std::vector<std::string>& labels() const { return labels_; }
  const std::string& label(std::size_t i) const { return labels_[i]; }

  // Throws StructuralError for unknown labels.
  std::size_t index_of(const std::string& label) const;
  bool contains(const std::string& label) const {
    return index_.find(label) != index_.end();
  }

  IndexSet indices_of(const std::vector<std::string>& labels) const;
  std::vector<std::string> labels_of(const IndexSet& subset) const;

  // Subspace on the given indices, in the order given.
  FinMetricSpace restrict_to(const IndexSet& subset) const;

  // Largest entry; 0 for spaces with fewer than two points.
  double diameter() const;
  // Smallest off-diagonal entry; 0 for spaces with fewer than two points.
  double min_positive_distance() const;
  // Sorted distinct off-diagonal values, grouped under the shared tolerance.
  std::vector<double> distance_spectrum() const;

  friend bool operator==(const FinMetricSpace& a, const FinMetricSpace& b) {
    return a.labels_ == b.labels_ && a.dist_ == b.dist_;
  }

 private:
  void build_index();

  std::vector<std::string> labels_;
  std::vector<double> dist_;
  std::unordered_map<std::string, std::size_t> index_;
};

// Several metrics over one shared label sequence.
class MetricFamily {
 public:
  explicit MetricFamily(std::vector<std::string> labels) : labels_(std::move(labels)) {}

  // Throws StructuralError on label mismatch, DomainError if not a metric.
  void add(std::string name, FinMetricSpace member);

  const std::vector<std::string>& labels() const { return labels_; }
  const std::map<std::string, FinMetricSpace>& members() const { return members_; }
  const FinMetricSpace& at(const std::string& name) const;

 private:
  std::vector<std::string> labels_;
  std::map<std::string, FinMetricSpace> members_;
};

// Sorts, deduplicates and bounds-checks a subset.
IndexSet normalize_subset(IndexSet subset, std::size_t n);
IndexSet complement(const IndexSet& subset, std::size_t n);
std::vector<bool> membership(const IndexSet& subset, std::size_t n);

// Both spaces carry the identical label sequence; StructuralError otherwise.
void require_same_labels(const FinMetricSpace& a, const FinMetricSpace& b);

}  // namespace metfact

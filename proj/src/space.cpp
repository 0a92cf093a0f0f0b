#include "metfact/space.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "metfact/core.hpp"
#include "metfact/error.hpp"
#include "metfact/tolerance.hpp"

namespace metfact {

FinMetricSpace::FinMetricSpace(std::vector<std::string> labels, std::vector<double> row_major)
    : labels_(std::move(labels)), dist_(std::move(row_major)) {
  const std::size_t n = labels_.size();
  if (dist_.size() != n * n) {
    throw StructuralError("distance matrix has " + std::to_string(dist_.size()) +
                          " entries, expected " + std::to_string(n * n));
  }
  for (std::size_t k = 0; k < dist_.size(); ++k) {
    if (!std::isfinite(dist_[k]) || dist_[k] < 0.0) {
      throw StructuralError("entry (" + std::to_string(k / n) + ", " + std::to_string(k % n) +
                            ") is not a finite non-negative number");
    }
  }
  build_index();
}

FinMetricSpace::FinMetricSpace(std::vector<std::string> labels,
                               const std::vector<std::vector<double>>& rows)
    : FinMetricSpace(std::move(labels), [&] {
        std::vector<double> flat;
        for (std::size_t i = 0; i < rows.size(); ++i) {
          if (rows[i].size() != rows.size()) {
            throw StructuralError("row " + std::to_string(i) + " has " +
                                  std::to_string(rows[i].size()) + " entries, expected " +
                                  std::to_string(rows.size()));
          }
          flat.insert(flat.end(), rows[i].begin(), rows[i].end());
        }
        return flat;
      }()) {}

void FinMetricSpace::build_index() {
  index_.reserve(labels_.size());
  for (std::size_t i = 0; i < labels_.size(); ++i) {
    if (!index_.emplace(labels_[i], i).second) {
      throw StructuralError("duplicate label '" + labels_[i] + "'");
    }
  }
}

std::size_t FinMetricSpace::index_of(const std::string& label) const {
  auto it = index_.find(label);
  if (it == index_.end()) throw StructuralError("unknown label '" + label + "'");
  return it->second;
}

IndexSet FinMetricSpace::indices_of(const std::vector<std::string>& labels) const {
  IndexSet out;
  out.reserve(labels.size());
  for (const auto& l : labels) out.push_back(index_of(l));
  return normalize_subset(std::move(out), size());
}

std::vector<std::string> FinMetricSpace::labels_of(const IndexSet& subset) const {
  std::vector<std::string> out;
  out.reserve(subset.size());
  for (auto i : subset) out.push_back(labels_.at(i));
  return out;
}

FinMetricSpace FinMetricSpace::restrict_to(const IndexSet& subset) const {
  std::vector<std::string> labels;
  std::vector<double> flat;
  labels.reserve(subset.size());
  flat.reserve(subset.size() * subset.size());
  for (auto i : subset) {
    labels.push_back(labels_.at(i));
    for (auto j : subset) flat.push_back((*this)(i, j));
  }
  return FinMetricSpace(std::move(labels), std::move(flat));
}

double FinMetricSpace::diameter() const {
  double best = 0.0;
  for (double v : dist_) best = std::max(best, v);
  return best;
}

double FinMetricSpace::min_positive_distance() const {
  const std::size_t n = size();
  if (n < 2) return 0.0;
  double best = (*this)(0, 1);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j) best = std::min(best, (*this)(i, j));
  return best;
}

std::vector<double> FinMetricSpace::distance_spectrum() const {
  std::vector<double> values;
  const std::size_t n = size();
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j) values.push_back((*this)(i, j));
  std::sort(values.begin(), values.end());
  std::vector<double> out;
  for (double v : values) {
    if (out.empty() || !approx_eq(out.back(), v)) out.push_back(v);
  }
  return out;
}

void MetricFamily::add(std::string name, FinMetricSpace member) {
  if (member.labels() != labels_) {
    throw StructuralError("family member '" + name + "' has a different label sequence");
  }
  require_metric(member, "family member");
  members_.insert_or_assign(std::move(name), std::move(member));
}

const FinMetricSpace& MetricFamily::at(const std::string& name) const {
  auto it = members_.find(name);
  if (it == members_.end()) throw StructuralError("no family member '" + name + "'");
  return it->second;
}

IndexSet normalize_subset(IndexSet subset, std::size_t n) {
  std::sort(subset.begin(), subset.end());
  subset.erase(std::unique(subset.begin(), subset.end()), subset.end());
  if (!subset.empty() && subset.back() >= n) {
    throw StructuralError("subset index " + std::to_string(subset.back()) + " out of range");
  }
  return subset;
}

IndexSet complement(const IndexSet& subset, std::size_t n) {
  auto in = membership(subset, n);
  IndexSet out;
  for (std::size_t i = 0; i < n; ++i)
    if (!in[i]) out.push_back(i);
  return out;
}

std::vector<bool> membership(const IndexSet& subset, std::size_t n) {
  std::vector<bool> in(n, false);
  for (auto i : subset) in.at(i) = true;
  return in;
}

void require_same_labels(const FinMetricSpace& a, const FinMetricSpace& b) {
  if (a.labels() != b.labels()) {
    throw StructuralError("metrics are defined on different label sequences");
  }
}

}  // namespace metfact

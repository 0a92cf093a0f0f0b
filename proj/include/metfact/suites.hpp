#pragma once

// Named invariant suites over seeded random instances, with counterexample
// shrinking. Shared by the `check` subcommand and the acceptance tests.

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "metfact/space.hpp"

namespace metfact::suites {

// One randomized case: a space, a non-empty subset F and, for the extensor
// suites, metrics d and e on the labels of F.
struct Instance {
  FinMetricSpace space;
  IndexSet subset;
  std::optional<FinMetricSpace> d;
  std::optional<FinMetricSpace> e;
};

struct SuiteOptions {
  std::size_t instances = 200;
  std::uint64_t seed = 1;
  std::size_t max_size = 40;
  std::vector<double> taus{1.5, 2.0, 4.0};
  std::vector<double> etas{0.1, 1.0};
  std::size_t threads = 0;  // 0: hardware concurrency
};

struct Outcome {
  std::string property;
  bool ok = true;
  std::string detail;  // set on failure
};
using CheckFn = std::function<std::vector<Outcome>(const Instance&)>;
using GeneratorFn = std::function<Instance(std::uint64_t seed, std::size_t index,
                                           std::size_t max_size)>;

struct PropertyTally {
  std::string name;
  std::size_t checked = 0;
  std::size_t failed = 0;
};

struct SuiteReport {
  std::string suite;
  std::uint64_t seed = 0;
  std::size_t instances = 0;
  std::size_t failed_instances = 0;
  std::vector<PropertyTally> properties;
  std::optional<std::size_t> first_failure;
  std::string first_message;
  std::optional<Instance> counterexample;  // shrunk

  bool passed() const { return failed_instances == 0; }
  std::string to_json() const;
  std::string to_text() const;
};

std::vector<std::string> suite_names();
// The per-instance check of a named suite. DomainError for unknown names.
CheckFn suite_check(const std::string& name, const SuiteOptions& options);

// Instances are generated from (seed, index) only and checked in parallel;
// the report is independent of the thread count.
SuiteReport run_suite(const std::string& name, const SuiteOptions& options);
// Runs the suite's checks on one supplied instance (replay).
SuiteReport run_suite_on(const std::string& name, const Instance& instance,
                         const SuiteOptions& options);

SuiteReport run_property(const std::string& suite, const GeneratorFn& generator,
                         const CheckFn& check, const SuiteOptions& options);

// Greedily deletes points while `property` keeps failing; F stays non-empty.
Instance shrink(Instance instance, const CheckFn& check, const std::string& property);

// Counterexample serialization (SpaceFile with subset "F", metrics d/e).
std::string instance_to_json(const Instance& instance);
Instance instance_from_json(const std::string& text);

// Per-instance seed for case `index` of a run seeded with `seed`.
std::uint64_t instance_seed(std::uint64_t seed, std::size_t index);

}  // namespace metfact::suites

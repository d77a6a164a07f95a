#pragma once

#include <string>
#include <utility>
#include <vector>

namespace kanlab {

struct CheckRecord {
  std::string name;
  bool passed;
};

/// Ordered log of named checks performed while building an object.
class Transcript {
public:
  bool add(std::string name, bool passed) {
    records_.push_back({std::move(name), passed});
    return passed;
  }

  void append(const Transcript& other, const std::string& prefix = {}) {
    for (const auto& r : other.records_) records_.push_back({prefix + r.name, r.passed});
  }

  bool all_passed() const {
    for (const auto& r : records_)
      if (!r.passed) return false;
    return true;
  }

  const std::vector<CheckRecord>& records() const { return records_; }

private:
  std::vector<CheckRecord> records_;
};

} // namespace kanlab

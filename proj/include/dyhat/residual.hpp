#pragma once

#include <algorithm>
#include <string>
#include <vector>

namespace dyhat {

enum class Status { Pass, Fail, Skipped };

inline const char* status_name(Status s) {
  switch (s) {
    case Status::Pass: return "pass";
    case Status::Fail: return "fail";
    default: return "skipped";
  }
}

/// Outcome of one identity check. Exact checks report max_residual "0" or the
/// first nonzero deviation as text; numeric checks report a float.
struct Residual {
  std::string id;
  Status status = Status::Pass;
  bool exact = true;
  std::string max_residual = "0";
  double max_residual_value = 0.0;
  long trusted = 0;
  long flagged = 0;  // entries skipped because truncation could reach them
  long truncation_events = 0;
  std::vector<std::string> failures;  // a few witnesses, capped
  std::string note;

  static constexpr size_t kMaxWitnesses = 8;

  void record_exact(bool zero, const std::string& where, const std::string& value) {
    ++trusted;
    if (zero) return;
    if (status == Status::Pass) max_residual = value;
    status = Status::Fail;
    if (failures.size() < kMaxWitnesses) failures.push_back(where + ": " + value);
  }
  void record_numeric(double value, double tolerance, const std::string& where) {
    exact = false;
    ++trusted;
    max_residual_value = std::max(max_residual_value, value);
    if (!(value <= tolerance)) {
      status = Status::Fail;
      if (failures.size() < kMaxWitnesses) failures.push_back(where);
    }
  }
  /// Pass requires at least one trusted comparison.
  void finish() {
    if (trusted == 0 && status == Status::Pass) {
      status = Status::Fail;
      note = note.empty() ? "no trusted entries at these cutoffs" : note + "; no trusted entries";
    }
  }
  void merge(const Residual& o) {
    trusted += o.trusted;
    flagged += o.flagged;
    truncation_events += o.truncation_events;
    if (o.status == Status::Fail) {
      if (status != Status::Fail) max_residual = o.max_residual;
      status = Status::Fail;
      for (const auto& f : o.failures)
        if (failures.size() < kMaxWitnesses) failures.push_back(f);
    }
    if (!o.exact) {
      exact = false;
      max_residual_value = std::max(max_residual_value, o.max_residual_value);
    }
  }
};

}  // namespace dyhat

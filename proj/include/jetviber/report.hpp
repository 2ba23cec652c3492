#pragma once

#include <string>
#include <utility>
#include <vector>

namespace jetviber {

enum class Status { Pass, Fail, Error };

const char* status_name(Status s);

struct ReportItem {
  std::string task;
  std::string item;
  Status status = Status::Pass;
  std::string message;
  std::vector<std::pair<std::string, std::string>> payload;  // canonical expressions, counts
  double millis = 0;
  bool internal = false;  // an engine inconsistency rather than bad input
};

/// Exit code: 3 if any internal error, else 2 if any input error, else 1 if
/// any FAIL, else 0.
struct Report {
  std::string task;
  std::vector<ReportItem> items;
  std::vector<std::string> warnings;

  void add(ReportItem item) { items.push_back(std::move(item)); }
  void merge(Report other);
  int exit_code() const;
  std::size_t count(Status s) const;
};

std::string format_text(const Report& r, bool timings = true);
std::string format_json(const Report& r);

}  // namespace jetviber

#include "jetviber/report.hpp"

#include <algorithm>
#include <cstdio>
#include <sstream>

#include "json.hpp"

namespace jetviber {

const char* status_name(Status s) {
  switch (s) {
    case Status::Pass:
      return "PASS";
    case Status::Fail:
      return "FAIL";
    case Status::Error:
      return "ERROR";
  }
  return "?";
}

void Report::merge(Report other) {
  for (auto& i : other.items) items.push_back(std::move(i));
  for (auto& w : other.warnings) warnings.push_back(std::move(w));
}

std::size_t Report::count(Status s) const {
  std::size_t n = 0;
  for (const auto& i : items)
    if (i.status == s) ++n;
  return n;
}

int Report::exit_code() const {
  int code = 0;
  for (const auto& i : items) {
    if (i.status == Status::Error) code = std::max(code, i.internal ? 3 : 2);
    if (i.status == Status::Fail) code = std::max(code, 1);
  }
  return code;
}

std::string format_text(const Report& r, bool timings) {
  std::ostringstream out;
  for (const auto& i : r.items) {
    out << status_name(i.status) << "  [" << i.task << "] " << i.item;
    if (timings) {
      char buf[32];
      std::snprintf(buf, sizeof buf, "%.1f", i.millis);
      out << "  (" << buf << " ms)";
    }
    out << '\n';
    if (!i.message.empty()) out << "      " << i.message << '\n';
    for (const auto& [k, v] : i.payload) out << "      " << k << ": " << v << '\n';
  }
  if (!r.warnings.empty()) {
    out << "WARN\n";
    for (const auto& w : r.warnings) out << "  " << w << '\n';
  }
  out << "SUMMARY " << r.count(Status::Pass) << " pass, " << r.count(Status::Fail) << " fail, "
      << r.count(Status::Error) << " error\n";
  return out.str();
}

std::string format_json(const Report& r) {
  nlohmann::ordered_json j;
  j["task"] = r.task;
  j["items"] = nlohmann::ordered_json::array();
  for (const auto& i : r.items) {
    nlohmann::ordered_json e;
    e["task"] = i.task;
    e["item"] = i.item;
    e["status"] = status_name(i.status);
    if (!i.message.empty()) e["message"] = i.message;
    nlohmann::ordered_json payload = nlohmann::ordered_json::object();
    for (const auto& [k, v] : i.payload) payload[k] = v;
    e["payload"] = payload;
    e["millis"] = i.millis;
    j["items"].push_back(e);
  }
  j["warnings"] = r.warnings;
  j["exit_code"] = r.exit_code();
  return j.dump(2) + "\n";
}

}  // namespace jetviber

#pragma once

#include <algorithm>
#include <string>
#include <tuple>
#include <vector>

namespace tmuml {

enum class Severity { Warning, Error };

inline const char* severity_name(Severity s) {
  return s == Severity::Error ? "error" : "warning";
}

// One coded validation finding. `location` is a machine path or an arc
// rendered as text; `code` is a stable machine-readable identifier.
struct Finding {
  Severity severity = Severity::Error;
  std::string code;
  std::string location;
  std::string message;

  friend bool operator==(const Finding&, const Finding&) = default;
};

using ValidationReport = std::vector<Finding>;

inline bool has_errors(const ValidationReport& report) {
  return std::any_of(report.begin(), report.end(),
                     [](const Finding& f) { return f.severity == Severity::Error; });
}

// Canonical report order: location, then code, then message.
inline void sort_report(ValidationReport& report) {
  std::stable_sort(report.begin(), report.end(), [](const Finding& a, const Finding& b) {
    return std::tie(a.location, a.code, a.message) < std::tie(b.location, b.code, b.message);
  });
}

inline std::string render_finding(const Finding& f) {
  std::string out = severity_name(f.severity);
  out += ' ';
  out += f.code;
  out += ' ';
  out += f.location;
  out += ": ";
  out += f.message;
  return out;
}

inline std::string render_report(const ValidationReport& report) {
  std::string out;
  for (const Finding& f : report) {
    out += render_finding(f);
    out += '\n';
  }
  return out;
}

}  // namespace tmuml

#pragma once

#include <algorithm>
#include <iomanip>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "backresp/responsibility.hpp"

namespace backresp {

enum class OutputFormat { Table, Json, Csv };

struct RenderOptions {
  unsigned digits = 4;
};

namespace detail {

/// Decimal rendering of a player value, exact when possible.
inline std::string decimal(const PlayerResult& p, unsigned digits) {
  if (p.exact) return to_decimal_string(*p.exact, digits);
  return to_decimal_string(Rational(p.estimate.value_or(0.0)), digits);
}

inline std::string fraction(const PlayerResult& p) { return p.exact ? to_fraction_string(*p.exact) : ""; }

inline std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

}  // namespace detail

/// Key-sorted JSON; big integers are strings so that no precision is lost.
inline nlohmann::json to_json(const ResponsibilityReport& r, const RenderOptions& opts = {}) {
  using nlohmann::json;
  json players = json::array();
  for (const auto& p : r.players) {
    json entry;
    entry["name"] = p.name;
    entry["decimal"] = detail::decimal(p, opts.digits);
    if (p.exact) {
      entry["exact"] = {{"num", numerator(*p.exact).str()}, {"den", denominator(*p.exact).str()}};
    } else {
      entry["exact"] = nullptr;
    }
    entry["estimate"] = p.estimate ? json(*p.estimate) : json(nullptr);
    entry["samples_per_size"] = p.samples_per_size ? json(*p.samples_per_size) : json(nullptr);
    if (p.samples_per_size) entry["coverage_gaps"] = p.coverage_gaps;
    players.push_back(std::move(entry));
  }

  json out;
  out["variant"] = to_string(r.variant);
  out["index"] = to_string(r.index);
  out["grouping"] = r.grouped ? "groups" : "states";
  out["engine"] = r.engine;
  out["players"] = std::move(players);
  if (r.exact_sum) {
    out["sum"] = to_decimal_string(*r.exact_sum, opts.digits);
    out["exact_sum"] = {{"num", numerator(*r.exact_sum).str()}, {"den", denominator(*r.exact_sum).str()}};
  } else {
    out["sum"] = r.sum;
    out["exact_sum"] = nullptr;
  }
  out["safe_path"] = r.safe_path;
  out["warnings"] = r.warnings;
  out["diagnostics"] = r.diagnostics;
  if (r.plan) {
    out["plan"] = {{"seed", r.plan->seed}, {"per_size", r.plan->per_size}, {"total", r.plan->total()}};
  } else {
    out["plan"] = nullptr;
  }
  return out;
}

/// One row per player in report order: name,value,exact.
inline std::string to_csv(const ResponsibilityReport& r, const RenderOptions& opts = {}) {
  std::ostringstream out;
  out << "name,value,exact\n";
  for (const auto& p : r.players) {
    out << detail::csv_field(p.name) << ',' << detail::decimal(p, opts.digits) << ',' << detail::fraction(p)
        << '\n';
  }
  return out.str();
}

/// Players sorted by descending value, then by name.
inline std::vector<const PlayerResult*> ranked(const ResponsibilityReport& r) {
  std::vector<const PlayerResult*> order;
  for (const auto& p : r.players) order.push_back(&p);
  std::stable_sort(order.begin(), order.end(), [](const PlayerResult* a, const PlayerResult* b) {
    if (a->exact && b->exact && *a->exact != *b->exact) return *a->exact > *b->exact;
    if (!(a->exact && b->exact) && a->value() != b->value()) return a->value() > b->value();
    return a->name < b->name;
  });
  return order;
}

inline std::string to_table(const ResponsibilityReport& r, const RenderOptions& opts = {}) {
  const auto order = ranked(r);
  const bool estimated = !r.players.empty() && !r.players.front().exact;
  std::size_t name_w = 6;
  for (const auto* p : order) name_w = std::max(name_w, p->name.size());

  std::ostringstream out;
  out << to_string(r.variant) << ' ' << to_string(r.index) << " responsibility (" << r.engine << ", "
      << (r.grouped ? "grouped" : "per state") << ")\n";
  out << std::left << std::setw(static_cast<int>(name_w)) << "player" << "  " << std::setw(10) << "value"
      << (estimated ? "gaps" : "exact") << '\n';
  for (const auto* p : order) {
    out << std::setw(static_cast<int>(name_w)) << p->name << "  " << std::setw(10) << detail::decimal(*p, opts.digits);
    if (estimated) {
      out << p->coverage_gaps.size();
    } else {
      out << detail::fraction(*p);
    }
    out << '\n';
  }
  out << "sum: " << (r.exact_sum ? to_fraction_string(*r.exact_sum) : to_decimal_string(Rational(r.sum), opts.digits))
      << '\n';
  out << "safe path: " << (r.safe_path ? "yes" : "no") << '\n';
  for (const auto& [k, v] : r.diagnostics) out << k << " = " << v << '\n';
  if (r.plan) {
    out << "plan: seed " << r.plan->seed << ", samples per size";
    for (auto c : r.plan->per_size) out << ' ' << c;
    out << '\n';
  }
  for (const auto& w : r.warnings) out << "warning: " << w << '\n';
  return out.str();
}

inline std::string render(const ResponsibilityReport& r, OutputFormat format, const RenderOptions& opts = {}) {
  switch (format) {
    case OutputFormat::Json: return to_json(r, opts).dump(2) + "\n";
    case OutputFormat::Csv: return to_csv(r, opts);
    case OutputFormat::Table: return to_table(r, opts);
  }
  return {};
}

}  // namespace backresp

#pragma once

// TSR: a line-based text format for transition systems, plus a JSON mirror
// with the same content.
//
//   ts 1
//   states <n>
//   name <id> <label...>
//   initial <id>
//   bad <id>+
//   trans <src> <dst>
//   counterexample <id>+
//   group <name> <id>+
//
// '#' starts a comment. Tokens are whitespace separated; a name label is the
// rest of its line.

#include <algorithm>
#include <cctype>
#include <charconv>
#include <set>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "backresp/error.hpp"
#include "backresp/transition_system.hpp"

namespace backresp {

namespace tsr_detail {

inline std::string_view trim(std::string_view s) {
  const auto ws = " \t\r\v\f";
  const auto b = s.find_first_not_of(ws);
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(ws);
  return s.substr(b, e - b + 1);
}

inline std::vector<std::string_view> split(std::string_view s) {
  std::vector<std::string_view> out;
  std::size_t i = 0;
  while (i < s.size()) {
    while (i < s.size() && std::isspace(static_cast<unsigned char>(s[i]))) ++i;
    const std::size_t start = i;
    while (i < s.size() && !std::isspace(static_cast<unsigned char>(s[i]))) ++i;
    if (i > start) out.push_back(s.substr(start, i - start));
  }
  return out;
}

[[noreturn]] inline void fail(std::size_t line, const std::string& msg) {
  throw input_error("SyntaxError", "line " + std::to_string(line) + ": " + msg);
}

inline std::uint64_t parse_id(std::string_view tok, std::size_t line) {
  std::uint64_t v = 0;
  const auto* end = tok.data() + tok.size();
  const auto [ptr, ec] = std::from_chars(tok.data(), end, v);
  if (ec != std::errc() || ptr != end) fail(line, "expected a non-negative integer, got '" + std::string(tok) + "'");
  return v;
}

}  // namespace tsr_detail

inline RawModel parse_tsr(std::string_view text) {
  using namespace tsr_detail;
  RawModel raw;
  bool seen_header = false, seen_states = false, seen_initial = false, seen_ce = false;
  std::set<std::uint64_t> named;
  std::set<std::string> group_names;

  std::size_t line_no = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    auto eol = text.find('\n', pos);
    if (eol == std::string_view::npos) eol = text.size();
    std::string_view line = text.substr(pos, eol - pos);
    pos = eol + 1;
    ++line_no;

    if (const auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) {
      if (eol == text.size()) break;
      continue;
    }

    const auto toks = split(line);
    const std::string_view kw = toks[0];

    if (!seen_header) {
      if (kw != "ts") fail(line_no, "file must start with 'ts 1'");
      if (toks.size() != 2 || toks[1] != "1") fail(line_no, "unsupported format version");
      seen_header = true;
      continue;
    }

    auto need_states = [&] {
      if (!seen_states) fail(line_no, "'" + std::string(kw) + "' before 'states'");
    };
    auto ids_from = [&](std::size_t first) {
      std::vector<std::uint64_t> ids;
      for (std::size_t i = first; i < toks.size(); ++i) ids.push_back(parse_id(toks[i], line_no));
      return ids;
    };

    if (kw == "ts") {
      fail(line_no, "duplicate header");
    } else if (kw == "states") {
      if (seen_states) fail(line_no, "'states' given twice");
      if (toks.size() != 2) fail(line_no, "usage: states <n>");
      raw.num_states = parse_id(toks[1], line_no);
      seen_states = true;
    } else if (kw == "name") {
      need_states();
      if (toks.size() < 3) fail(line_no, "usage: name <id> <string>");
      const auto id = parse_id(toks[1], line_no);
      if (!named.insert(id).second) fail(line_no, "state " + std::to_string(id) + " named twice");
      const auto label_start = static_cast<std::size_t>(toks[2].data() - line.data());
      raw.names.emplace_back(id, std::string(line.substr(label_start)));
    } else if (kw == "initial") {
      need_states();
      if (seen_initial) fail(line_no, "'initial' given twice");
      if (toks.size() != 2) fail(line_no, "usage: initial <id>");
      raw.initial = parse_id(toks[1], line_no);
      seen_initial = true;
    } else if (kw == "bad") {
      need_states();
      if (toks.size() < 2) fail(line_no, "usage: bad <id>+");
      for (auto id : ids_from(1)) raw.bad.push_back(id);
    } else if (kw == "trans") {
      need_states();
      if (toks.size() != 3) fail(line_no, "usage: trans <src> <dst>");
      raw.transitions.emplace_back(parse_id(toks[1], line_no), parse_id(toks[2], line_no));
    } else if (kw == "counterexample") {
      need_states();
      if (seen_ce) fail(line_no, "'counterexample' given twice");
      if (toks.size() < 2) fail(line_no, "usage: counterexample <id>+");
      raw.counterexample = ids_from(1);
      seen_ce = true;
    } else if (kw == "group") {
      need_states();
      if (toks.size() < 3) fail(line_no, "usage: group <name> <id>+");
      std::string gname(toks[1]);
      if (!group_names.insert(gname).second) fail(line_no, "group '" + gname + "' declared twice");
      raw.groups.push_back({std::move(gname), ids_from(2)});
    } else {
      fail(line_no, "unknown directive '" + std::string(kw) + "'");
    }
    if (eol == text.size()) break;
  }

  if (!seen_header) fail(line_no, "empty file (expected 'ts 1')");
  if (!seen_states) fail(line_no, "missing 'states'");
  if (!seen_initial) fail(line_no, "missing 'initial'");

  // Keep bad states as a set union.
  std::sort(raw.bad.begin(), raw.bad.end());
  raw.bad.erase(std::unique(raw.bad.begin(), raw.bad.end()), raw.bad.end());
  return raw;
}

inline std::string emit_tsr(const RawModel& raw) {
  std::ostringstream out;
  out << "ts 1\n";
  out << "states " << raw.num_states << '\n';
  auto names = raw.names;
  std::sort(names.begin(), names.end());
  for (const auto& [id, label] : names) {
    if (label.find_first_of("#\n\r") != std::string::npos || tsr_detail::trim(label).empty() ||
        tsr_detail::trim(label) != label) {
      throw input_error("BadName", "state label '" + label + "' cannot be written to TSR");
    }
    out << "name " << id << ' ' << label << '\n';
  }
  out << "initial " << raw.initial << '\n';
  if (!raw.bad.empty()) {
    out << "bad";
    for (auto b : raw.bad) out << ' ' << b;
    out << '\n';
  }
  for (const auto& [s, t] : raw.transitions) out << "trans " << s << ' ' << t << '\n';
  if (raw.counterexample) {
    out << "counterexample";
    for (auto s : *raw.counterexample) out << ' ' << s;
    out << '\n';
  }
  for (const auto& g : raw.groups) {
    if (g.name.empty() || g.name.find_first_of(" \t#\n\r") != std::string::npos) {
      throw input_error("BadName", "group name '" + g.name + "' cannot be written to TSR");
    }
    out << "group " << g.name;
    for (auto s : g.members) out << ' ' << s;
    out << '\n';
  }
  return out.str();
}

/// JSON mirror: {states, names, initial, bad, trans, counterexample, groups}.
/// `names` is an array of per-state labels; `trans` an array of [src, dst];
/// `groups` an array of {name, states}.
inline RawModel parse_json_model(std::string_view text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw input_error("SyntaxError", e.what());
  }
  try {
    RawModel raw;
    raw.num_states = j.at("states").get<std::uint64_t>();
    if (j.contains("names") && !j["names"].is_null()) {
      const auto& names = j["names"];
      for (std::size_t i = 0; i < names.size(); ++i) raw.names.emplace_back(i, names[i].get<std::string>());
    }
    raw.initial = j.at("initial").get<std::uint64_t>();
    if (j.contains("bad")) raw.bad = j["bad"].get<std::vector<std::uint64_t>>();
    std::sort(raw.bad.begin(), raw.bad.end());
    raw.bad.erase(std::unique(raw.bad.begin(), raw.bad.end()), raw.bad.end());
    if (j.contains("trans")) {
      for (const auto& e : j["trans"]) {
        if (e.size() != 2) throw input_error("SyntaxError", "transition entries must be [src, dst]");
        raw.transitions.emplace_back(e[0].get<std::uint64_t>(), e[1].get<std::uint64_t>());
      }
    }
    if (j.contains("counterexample") && !j["counterexample"].is_null()) {
      raw.counterexample = j["counterexample"].get<std::vector<std::uint64_t>>();
    }
    if (j.contains("groups") && !j["groups"].is_null()) {
      for (const auto& g : j["groups"]) {
        raw.groups.push_back({g.at("name").get<std::string>(), g.at("states").get<std::vector<std::uint64_t>>()});
      }
    }
    return raw;
  } catch (const nlohmann::json::exception& e) {
    throw input_error("SyntaxError", e.what());
  }
}

inline std::string emit_json_model(const RawModel& raw) {
  nlohmann::json j;
  j["states"] = raw.num_states;
  if (!raw.names.empty()) {
    std::vector<std::string> names(raw.num_states);
    for (std::uint64_t i = 0; i < raw.num_states; ++i) names[i] = std::to_string(i);
    for (const auto& [id, label] : raw.names) {
      if (id < raw.num_states) names[id] = label;
    }
    j["names"] = names;
  }
  j["initial"] = raw.initial;
  j["bad"] = raw.bad;
  j["trans"] = nlohmann::json::array();
  for (const auto& [s, t] : raw.transitions) j["trans"].push_back({s, t});
  j["counterexample"] = raw.counterexample ? nlohmann::json(*raw.counterexample) : nlohmann::json(nullptr);
  j["groups"] = nlohmann::json::array();
  for (const auto& g : raw.groups) j["groups"].push_back({{"name", g.name}, {"states", g.members}});
  return j.dump(2) + "\n";
}

/// Dispatches on the first non-blank character: '{' means JSON.
inline RawModel parse_model_text(std::string_view text) {
  const auto body = tsr_detail::trim(text);
  if (!body.empty() && body.front() == '{') return parse_json_model(text);
  return parse_tsr(text);
}

}  // namespace backresp

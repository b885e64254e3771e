#pragma once

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <istream>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "crowdprice/analysis.hpp"
#include "crowdprice/bonus.hpp"
#include "crowdprice/common.hpp"
#include "crowdprice/cp_solver.hpp"
#include "crowdprice/pp_solver.hpp"
#include "crowdprice/utility.hpp"
#include "crowdprice/worker.hpp"

namespace crowdprice::io {

using nlohmann::json;

/// %.17g: enough digits to round-trip every double.
inline std::string format_double(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

namespace detail {

inline std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
  return s;
}

inline std::vector<std::string_view> split(std::string_view line) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  for (;;) {
    const auto comma = line.find(',', start);
    out.push_back(trim(line.substr(start, comma == std::string_view::npos ? std::string_view::npos : comma - start)));
    if (comma == std::string_view::npos) return out;
    start = comma + 1;
  }
}

inline double parse_double(std::string_view s, std::size_t line_no, std::string_view column) {
  double v = 0.0;
  const auto* end = s.data() + s.size();
  const auto [ptr, ec] = std::from_chars(s.data(), end, v);
  if (ec != std::errc() || ptr != end || s.empty()) {
    throw ConfigError("line " + std::to_string(line_no) + ": column '" + std::string(column) + "' is not a number");
  }
  return v;
}

// Rows of the named numeric columns plus the optional id column.
struct Table {
  std::vector<std::string> ids;
  std::vector<std::vector<double>> rows;
};

inline Table read_csv(std::istream& in, const std::vector<std::string>& columns) {
  std::string line;
  std::size_t line_no = 0;
  std::vector<std::string_view> header;
  std::string header_line;
  while (std::getline(in, line)) {
    ++line_no;
    if (!trim(line).empty()) {
      header_line = line;
      if (header_line.size() >= 3 && header_line.compare(0, 3, "\xEF\xBB\xBF") == 0) header_line.erase(0, 3);
      header = split(header_line);
      break;
    }
  }
  if (header.empty()) throw ConfigError("csv: missing header");
  std::vector<std::size_t> pos;
  for (const auto& c : columns) {
    const auto it = std::find(header.begin(), header.end(), c);
    if (it == header.end()) throw ConfigError("csv: header lacks column '" + c + "'");
    pos.push_back(static_cast<std::size_t>(it - header.begin()));
  }
  const auto id_it = std::find(header.begin(), header.end(), "id");
  Table t;
  while (std::getline(in, line)) {
    ++line_no;
    if (trim(line).empty()) continue;
    const auto cells = split(line);
    if (cells.size() != header.size()) {
      throw ConfigError("line " + std::to_string(line_no) + ": expected " + std::to_string(header.size()) + " fields");
    }
    std::vector<double> row;
    for (std::size_t k = 0; k < columns.size(); ++k) row.push_back(parse_double(cells[pos[k]], line_no, columns[k]));
    t.rows.push_back(std::move(row));
    t.ids.push_back(id_it == header.end() ? "w" + std::to_string(t.rows.size())
                                          : std::string(cells[static_cast<std::size_t>(id_it - header.begin())]));
  }
  return t;
}

inline Table read_json_array(const json& j, const std::vector<std::string>& columns) {
  if (!j.is_array()) throw ConfigError("json: expected an array of objects");
  Table t;
  for (const auto& e : j) {
    if (!e.is_object()) throw ConfigError("json: expected an array of objects");
    std::vector<double> row;
    for (const auto& c : columns) {
      if (!e.contains(c) || !e[c].is_number()) throw ConfigError("json: entry lacks numeric '" + c + "'");
      row.push_back(e[c].get<double>());
    }
    t.rows.push_back(std::move(row));
    t.ids.push_back(e.contains("id") ? (e["id"].is_string() ? e["id"].get<std::string>() : e["id"].dump())
                                     : "w" + std::to_string(t.rows.size()));
  }
  return t;
}

inline bool ends_with(std::string_view s, std::string_view suffix) {
  return s.size() >= suffix.size() && s.substr(s.size() - suffix.size()) == suffix;
}

inline Table read_file(const std::string& path, const std::vector<std::string>& columns) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open '" + path + "'");
  if (ends_with(path, ".json")) {
    json j;
    try {
      in >> j;
    } catch (const json::exception& e) {
      throw ConfigError("'" + path + "': " + e.what());
    }
    return read_json_array(j, columns);
  }
  return read_csv(in, columns);
}

}  // namespace detail

/// CSV with header `id,quality,cost` (any column order; id optional).
inline std::vector<WorkerProfile> read_workers_csv(std::istream& in) {
  const auto t = detail::read_csv(in, {"quality", "cost"});
  std::vector<WorkerProfile> ws;
  for (std::size_t i = 0; i < t.rows.size(); ++i) ws.push_back({t.rows[i][0], t.rows[i][1], t.ids[i]});
  validate(ws);
  return ws;
}

/// `[{"id": ..., "quality": ..., "cost": ...}, ...]`
inline std::vector<WorkerProfile> workers_from_json(const json& j) {
  const auto t = detail::read_json_array(j, {"quality", "cost"});
  std::vector<WorkerProfile> ws;
  for (std::size_t i = 0; i < t.rows.size(); ++i) ws.push_back({t.rows[i][0], t.rows[i][1], t.ids[i]});
  validate(ws);
  return ws;
}

/// Format chosen by extension: `.json`, anything else is CSV.
inline std::vector<WorkerProfile> read_workers(const std::string& path) {
  const auto t = detail::read_file(path, {"quality", "cost"});
  std::vector<WorkerProfile> ws;
  for (std::size_t i = 0; i < t.rows.size(); ++i) ws.push_back({t.rows[i][0], t.rows[i][1], t.ids[i]});
  validate(ws);
  return ws;
}

/// Header `id,ability,cost`, or the JSON array form with those keys.
inline AbilityProfile read_abilities(const std::string& path) {
  const auto t = detail::read_file(path, {"ability", "cost"});
  AbilityProfile out;
  for (std::size_t i = 0; i < t.rows.size(); ++i) {
    const double s = t.rows[i][0], c = t.rows[i][1];
    if (!(s >= 0.0 && s <= 1.0)) throw DomainError("ability outside [0,1] for '" + t.ids[i] + "'");
    if (!(c >= 0.0) || !std::isfinite(c)) throw DomainError("invalid cost for '" + t.ids[i] + "'");
    out.push_back({s, c, t.ids[i]});
  }
  return out;
}

inline void write_workers_csv(std::ostream& out, const std::vector<WorkerProfile>& ws) {
  out << "id,quality,cost\n";
  for (const auto& w : ws) out << w.id << ',' << format_double(w.quality) << ',' << format_double(w.cost) << '\n';
}

/// `{"kind": "additive" | "typo" | "binary_labeling", "M": .., "m": ..}`
inline UtilityConfig utility_config_from_json(const json& j) {
  UtilityConfig cfg;
  const std::string kind = j.is_string() ? j.get<std::string>() : j.value("kind", std::string("additive"));
  if (kind == "additive") {
    cfg.kind = UtilityConfig::Kind::Additive;
  } else if (kind == "typo") {
    cfg.kind = UtilityConfig::Kind::Typo;
  } else if (kind == "binary_labeling") {
    cfg.kind = UtilityConfig::Kind::BinaryLabeling;
  } else {
    throw ConfigError("unknown utility kind '" + kind + "'");
  }
  if (j.is_object()) {
    cfg.M = j.value("M", cfg.M);
    cfg.m = j.value("m", cfg.m);
  }
  if (cfg.kind == UtilityConfig::Kind::Typo && (cfg.M < 1 || cfg.m < 1 || cfg.m > cfg.M)) {
    throw ConfigError("typo utility needs 1 <= m <= M");
  }
  return cfg;
}

/// `{"kind": "threshold", "m": 14, "M": 25}` or `{"kind": "linear", "M": 25}`
inline BonusPolicy bonus_policy_from_json(const json& j) {
  const std::string kind = j.value("kind", std::string("threshold"));
  const int M = j.value("M", 25);
  if (kind == "linear") return BonusPolicy::linear(M);
  if (kind == "threshold") return BonusPolicy::threshold(j.value("m", 1), M);
  throw ConfigError("unknown bonus policy kind '" + kind + "'");
}

inline json to_json(const BonusPolicy& p) {
  if (p.kind == BonusPolicy::Kind::Linear) return {{"kind", "linear"}, {"M", p.M}};
  return {{"kind", "threshold"}, {"m", p.m}, {"M", p.M}};
}

inline json to_json(const StructureClass& s) {
  json j = {{"kind", std::string(to_string(s.kind))}};
  if (s.kind != StructureClass::Kind::Other && !s.empty()) {
    j["l"] = s.l;
    j["u"] = s.u;
  }
  return j;
}

inline json ids_of(const std::vector<WorkerProfile>& ws, const std::vector<std::size_t>& idx) {
  json a = json::array();
  for (std::size_t i : idx) a.push_back(ws[i].id);
  return a;
}

inline json to_json(const CpSolveReport& r, const std::vector<WorkerProfile>& ws) {
  return {{"algorithm", r.algorithm},
          {"policy", {{"base", r.policy.base}, {"bonus", r.policy.bonus}}},
          {"accepted", ids_of(ws, r.accepted)},
          {"spent", r.spent},
          {"utility", r.utility_value},
          {"structure", to_json(r.structure)},
          {"diagnostics", r.diagnostics}};
}

inline json to_json(const PpSolution& s, const std::vector<WorkerProfile>& ws, std::string_view algorithm) {
  json policy = json::array();
  std::vector<std::size_t> chosen;
  for (std::size_t i = 0; i < ws.size(); ++i) {
    policy.push_back({{"id", ws[i].id}, {"base", s.policy[i].base}, {"bonus", s.policy[i].bonus}});
    if (s.selection.x[i]) chosen.push_back(i);
  }
  return {{"algorithm", algorithm},
          {"policy", policy},
          {"accepted", ids_of(ws, chosen)},
          {"spent", s.selection.spent},
          {"utility", s.selection.utility_value},
          {"diagnostics", s.diagnostics}};
}

inline json to_json(const RelaxedSolution& s, const std::vector<WorkerProfile>& ws) {
  json z = json::array();
  for (std::size_t i = 0; i < ws.size(); ++i) z.push_back({{"id", ws[i].id}, {"z", s.z[i]}});
  json j = {{"algorithm", "relaxed"}, {"z", z}, {"utility", s.value}, {"alpha", s.alpha}};
  j["split"] = s.split ? json(ws[*s.split].id) : json(nullptr);
  return j;
}

inline json to_json(const PoaCertificate& c) {
  return {{"k_B", c.k_B}, {"gamma", c.gamma}, {"delta", c.delta}, {"u_pp", c.u_pp}, {"u_cp_scaled", c.u_cp_scaled}};
}

inline json to_json(const PoaAuditReport& r) {
  json j = {{"status", std::string(to_string(r.status))},
            {"certificate", to_json(r.certificate)},
            {"half_bound", r.half_bound},
            {"delta_at_least_one", r.delta_at_least_one},
            {"detail", r.detail}};
  j["gamma_bound"] = r.gamma_bound ? json(*r.gamma_bound) : json(nullptr);
  return j;
}

inline json to_json(const AuditReport& r) {
  return {{"property", r.property},
          {"trials", r.trials},
          {"violations", r.violations},
          {"worst_excess", r.worst_excess},
          {"first_counterexample", r.first_counterexample},
          {"passed", r.passed()}};
}

}  // namespace crowdprice::io

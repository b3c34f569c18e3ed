#include "fqc/app/output.hpp"

#include <cmath>
#include <fstream>

#include <fmt/format.h>
#include <fmt/ranges.h>

#include "fqc/solver.hpp"
#include "fqc/version.hpp"

namespace fqc::app {

namespace {

std::ofstream open_out(const std::filesystem::path& p) {
  std::ofstream out(p, std::ios::binary);
  if (!out) throw ConfigError("cannot write " + p.string());
  return out;
}

}  // namespace

std::string num(double x) {
  if (std::isnan(x)) return "nan";
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  return fmt::format("{:.17g}", x);
}

ArtifactWriter::ArtifactWriter(std::filesystem::path dir, std::string config_hash)
    : dir_(std::move(dir)), hash_(std::move(config_hash)) {
  std::error_code ec;
  std::filesystem::create_directories(dir_, ec);
  if (ec) throw ConfigError("cannot create output directory " + dir_.string() + ": " + ec.message());
}

void ArtifactWriter::json(const std::string& name, nlohmann::json body) {
  body["config_hash"] = hash_;
  auto out = open_out(dir_ / name);
  out << body.dump(2) << '\n';
  artifacts_.push_back(name);
}

void ArtifactWriter::csv(const std::string& name, const CsvRow& header,
                         const std::vector<CsvRow>& rows) {
  auto out = open_out(dir_ / name);
  out << fmt::format("{}\n", fmt::join(header, ","));
  for (const CsvRow& r : rows) {
    if (r.size() != header.size()) throw NumericalError("CSV row width mismatch in " + name);
    out << fmt::format("{}\n", fmt::join(r, ","));
  }
  artifacts_.push_back(name);
}

void ArtifactWriter::field(const std::string& name, const GridField& f) {
  auto out = open_out(dir_ / name);
  write_columnar(out, f);
  artifacts_.push_back(name);
}

void ArtifactWriter::manifest(const std::string& task, double wall_seconds, int exit_code) {
  nlohmann::json m;
  m["config_hash"] = hash_;
  m["version"] = kVersion;
  m["task"] = task;
  m["wall_time_seconds"] = wall_seconds;
  m["exit_code"] = exit_code;
  m["artifacts"] = artifacts_;
  auto out = open_out(dir_ / "manifest.json");
  out << m.dump(2) << '\n';
}

CsvRow trace_header() {
  return {"tau",           "m",          "profile_error", "pohozaev_residual", "argmax_x1",
          "argmax_x2",     "argmax_x3",  "argmax_x4",     "k_fit",             "k_predicted",
          "harnack_ratio", "pair_a_fit", "pair_b_fit",    "pair_a_expected",   "unit_radius_value",
          "critical_radii", "residual",  "iterations",    "degenerate"};
}

std::vector<CsvRow> trace_rows(const BlowupTrace& trace) {
  std::vector<CsvRow> rows;
  for (const BlowupRecord& r : trace.records) {
    CsvRow row = {num(r.tau), num(r.m), num(r.profile_error), num(r.pohozaev_residual)};
    for (int j = 0; j < 4; ++j) row.push_back(j < r.argmax.size() ? num(r.argmax(j)) : "");
    for (double x : {r.k_fit, r.k_predicted, r.harnack_ratio, r.pair_a_fit, r.pair_b_fit,
                     r.pair_a_expected, r.unit_radius_value})
      row.push_back(num(x));
    row.push_back(std::to_string(r.critical_radii));
    row.push_back(num(r.residual));
    row.push_back(std::to_string(r.iterations));
    row.push_back(r.degenerate ? "1" : "0");
    rows.push_back(std::move(row));
  }
  return rows;
}

std::vector<CsvRow> moment_rows(const BlowupTrace& trace) {
  std::vector<CsvRow> rows;
  for (const BlowupRecord& r : trace.records) {
    for (const MomentRow& m : r.moments) {
      rows.push_back({num(r.tau), num(m.s), "inner", num(m.inner)});
      rows.push_back({num(r.tau), num(m.s), "outer", num(m.outer)});
    }
  }
  return rows;
}

}  // namespace fqc::app

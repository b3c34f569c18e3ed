#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include <json.hpp>

#include "fqc/grid.hpp"

namespace fqc {
struct BlowupTrace;
}

namespace fqc::app {

/// Shortest text that round-trips a double ({:.17g}); "nan" and "inf" as is.
std::string num(double x);

using CsvRow = std::vector<std::string>;

/// Writes artifacts into one output directory and records them for the manifest.
/// Every JSON artifact carries the producing config hash.
class ArtifactWriter {
 public:
  ArtifactWriter(std::filesystem::path dir, std::string config_hash);

  void json(const std::string& name, nlohmann::json body);
  void csv(const std::string& name, const CsvRow& header, const std::vector<CsvRow>& rows);
  /// Columnar grid format (see write_columnar).
  void field(const std::string& name, const GridField& f);
  /// manifest.json: hash, version, task, wall time, artifact list. Not byte-stable.
  void manifest(const std::string& task, double wall_seconds, int exit_code);

  const std::filesystem::path& dir() const { return dir_; }
  const std::vector<std::string>& artifacts() const { return artifacts_; }

 private:
  std::filesystem::path dir_;
  std::string hash_;
  std::vector<std::string> artifacts_;
};

/// Long-format plot tables.
/// trace: tau, m, profile_error, pohozaev_residual, then the remaining per-record values.
std::vector<CsvRow> trace_rows(const BlowupTrace& trace);
CsvRow trace_header();
/// moments: tau, s, region (inner|outer), value.
std::vector<CsvRow> moment_rows(const BlowupTrace& trace);

}  // namespace fqc::app

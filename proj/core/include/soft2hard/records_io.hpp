#pragma once

// Machine-readable sweep outputs.
//
// CSV: header "alpha,terminal_err,control_err,state_err,solver_tag", one row
// per record, state_err left empty when the solver has none. Numbers are in
// shortest round-trip form, so parse_records(emit) reproduces the records
// exactly.
//
// JSON summary: artifact version, caller metadata (problem spec, grid), the
// record count and the fitted slopes.

#include <filesystem>
#include <iosfwd>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "soft2hard/sweep.hpp"

namespace soft2hard::sweep {

/// I/O failure carrying the offending path.
class OutputError : public std::runtime_error {
 public:
  OutputError(const std::filesystem::path& path, const std::string& what);
  const std::filesystem::path& path() const { return path_; }

 private:
  std::filesystem::path path_;
};

enum class OutputFormat { kCsv, kJsonSummary };

struct NamedFit {
  std::string label;
  /// Empty when the fit was degenerate; `note` then says why.
  std::optional<RateFit> fit;
  std::string note;
};

const char* artifact_version();

void write_records_csv(std::ostream& out, std::span<const SweepRecord> records);
std::vector<SweepRecord> parse_records_csv(std::istream& in);

nlohmann::json fit_to_json(const NamedFit& fit);
nlohmann::json summary_json(std::span<const SweepRecord> records,
                            std::span<const NamedFit> fits,
                            const nlohmann::json& metadata);

/// Writes either the CSV records or the JSON summary to `path`, creating
/// parent directories. Throws OutputError on failure.
void emit_records(std::span<const SweepRecord> records, std::span<const NamedFit> fits,
                  const std::filesystem::path& path, OutputFormat format,
                  const nlohmann::json& metadata = nlohmann::json::object());

/// Writes text to `path`, creating parent directories; throws OutputError.
void write_text_file(const std::filesystem::path& path, const std::string& contents);

}  // namespace soft2hard::sweep

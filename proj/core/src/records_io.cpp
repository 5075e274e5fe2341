#include "soft2hard/records_io.hpp"

#include <charconv>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>

#include "soft2hard/numeric.hpp"

#ifndef SOFT2HARD_VERSION
#define SOFT2HARD_VERSION "0.0.0"
#endif

namespace soft2hard::sweep {

namespace {

constexpr const char* kCsvHeader = "alpha,terminal_err,control_err,state_err,solver_tag";

std::vector<std::string> split_csv(const std::string& line) {
  std::vector<std::string> cells;
  std::string cell;
  std::istringstream in(line);
  while (std::getline(in, cell, ',')) cells.push_back(cell);
  if (!line.empty() && line.back() == ',') cells.emplace_back();
  return cells;
}

double parse_cell(const std::string& cell, std::size_t line, const char* column) {
  double value = 0.0;
  const char* end = cell.data() + cell.size();
  auto [ptr, ec] = std::from_chars(cell.data(), end, value);
  if (ec != std::errc{} || ptr != end) {
    throw std::runtime_error("records csv line " + std::to_string(line) + ": bad " +
                             column + " value '" + cell + "'");
  }
  return value;
}

}  // namespace

OutputError::OutputError(const std::filesystem::path& path, const std::string& what)
    : std::runtime_error(path.string() + ": " + what), path_(path) {}

const char* artifact_version() { return SOFT2HARD_VERSION; }

void write_records_csv(std::ostream& out, std::span<const SweepRecord> records) {
  out << kCsvHeader << '\n';
  for (const SweepRecord& r : records) {
    out << format_double(r.alpha) << ',' << format_double(r.terminal_err) << ','
        << format_double(r.control_err) << ','
        << (r.state_err ? format_double(*r.state_err) : std::string()) << ','
        << to_string(r.solver) << '\n';
  }
}

std::vector<SweepRecord> parse_records_csv(std::istream& in) {
  std::string line;
  if (!std::getline(in, line) || line != kCsvHeader) {
    throw std::runtime_error("records csv: missing or unexpected header");
  }
  std::vector<SweepRecord> records;
  std::size_t lineno = 1;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty()) continue;
    const std::vector<std::string> cells = split_csv(line);
    if (cells.size() != 5) {
      throw std::runtime_error("records csv line " + std::to_string(lineno) +
                               ": expected 5 columns, got " + std::to_string(cells.size()));
    }
    SweepRecord r;
    r.alpha = parse_cell(cells[0], lineno, "alpha");
    r.terminal_err = parse_cell(cells[1], lineno, "terminal_err");
    r.control_err = parse_cell(cells[2], lineno, "control_err");
    if (!cells[3].empty()) r.state_err = parse_cell(cells[3], lineno, "state_err");
    r.solver = parse_solver_tag(cells[4]);
    records.push_back(r);
  }
  return records;
}

nlohmann::json fit_to_json(const NamedFit& f) {
  nlohmann::json j;
  j["label"] = f.label;
  if (f.fit) {
    j["field"] = to_string(f.fit->field);
    j["slope"] = f.fit->slope;
    j["intercept"] = f.fit->intercept;
    j["r_squared"] = f.fit->r_squared;
    j["window"] = {f.fit->window_lo, f.fit->window_hi};
    j["points"] = f.fit->points;
  } else {
    j["slope"] = nullptr;
  }
  if (!f.note.empty()) j["note"] = f.note;
  return j;
}

nlohmann::json summary_json(std::span<const SweepRecord> records,
                            std::span<const NamedFit> fits,
                            const nlohmann::json& metadata) {
  nlohmann::json j;
  j["artifact_version"] = artifact_version();
  j["metadata"] = metadata;
  j["record_count"] = records.size();
  nlohmann::json fit_list = nlohmann::json::array();
  for (const NamedFit& f : fits) fit_list.push_back(fit_to_json(f));
  j["fits"] = std::move(fit_list);
  return j;
}

void write_text_file(const std::filesystem::path& path, const std::string& contents) {
  std::error_code ec;
  if (path.has_parent_path()) {
    std::filesystem::create_directories(path.parent_path(), ec);
    if (ec) throw OutputError(path, "cannot create directory: " + ec.message());
  }
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw OutputError(path, "cannot open for writing");
  out << contents;
  out.flush();
  if (!out) throw OutputError(path, "write failed");
}

void emit_records(std::span<const SweepRecord> records, std::span<const NamedFit> fits,
                  const std::filesystem::path& path, OutputFormat format,
                  const nlohmann::json& metadata) {
  std::ostringstream buffer;
  if (format == OutputFormat::kCsv) {
    write_records_csv(buffer, records);
  } else {
    buffer << summary_json(records, fits, metadata).dump(2) << '\n';
  }
  write_text_file(path, buffer.str());
}

}  // namespace soft2hard::sweep

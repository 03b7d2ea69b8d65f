#pragma once
// Result persistence: one JSON object per line (append-only JSONL) plus a
// column-equivalent CSV export.  Every record carries a schema version.

#include <cstdint>
#include <string>

#include "cadec/harness.hpp"

namespace cadec {

inline constexpr int kSchemaVersion = 1;

struct ResultRecord {
  std::string decoder;  // scala1d | scala2d | harrington1d | harrington2d
  int d = 3;
  std::string model;  // code_capacity | phenomenological | signal
  double p = 0.0, q = 0.0, p_sig = 0.0, p_cs = 0.0, p_fs = 0.0;
  int t_r = 0;
  long long shots = 0, failures = 0, censored = 0;
  double estimate = 0.0, se = 0.0;
  std::uint64_t seed = 0;
  int schema_version = kSchemaVersion;
  double wall_ms = 0.0;
};

std::string decoder_name(DecoderId id);
std::string model_name(NoiseModel m);
DecoderId parse_decoder(const std::string& name);  // throws invalid_argument
NoiseModel parse_model(const std::string& name);

ResultRecord make_record(const ExperimentSpec& spec, const RunResult& result);

std::string to_json_line(const ResultRecord& rec);  // single line, no newline
ResultRecord record_from_json(const std::string& line);

std::string csv_header();
std::string to_csv_row(const ResultRecord& rec);

// Reads a JSONL file and writes the column-equivalent CSV; returns the
// number of records converted.
std::size_t export_csv(const std::string& jsonl_path, const std::string& csv_path);

}  // namespace cadec

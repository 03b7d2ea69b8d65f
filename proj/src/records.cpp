#include "cadec/records.hpp"

#include <fstream>
#include <sstream>

#include <json.hpp>

namespace cadec {

using nlohmann::json;

std::string decoder_name(DecoderId id) {
  switch (id) {
    case DecoderId::kScala1D: return "scala1d";
    case DecoderId::kScala2D: return "scala2d";
    case DecoderId::kHarrington1D: return "harrington1d";
    case DecoderId::kHarrington2D: return "harrington2d";
  }
  return "unknown";
}

std::string model_name(NoiseModel m) {
  switch (m) {
    case NoiseModel::kCodeCapacity: return "code_capacity";
    case NoiseModel::kPhenomenological: return "phenomenological";
    case NoiseModel::kSignal: return "signal";
  }
  return "unknown";
}

DecoderId parse_decoder(const std::string& name) {
  if (name == "scala1d") return DecoderId::kScala1D;
  if (name == "scala2d") return DecoderId::kScala2D;
  if (name == "harrington1d" || name == "har1d") return DecoderId::kHarrington1D;
  if (name == "harrington2d" || name == "har2d") return DecoderId::kHarrington2D;
  throw std::invalid_argument("unknown decoder '" + name +
                              "' (expected scala1d|scala2d|harrington1d|harrington2d)");
}

NoiseModel parse_model(const std::string& name) {
  if (name == "code-capacity" || name == "code_capacity") return NoiseModel::kCodeCapacity;
  if (name == "phenomenological") return NoiseModel::kPhenomenological;
  if (name == "signal") return NoiseModel::kSignal;
  throw std::invalid_argument("unknown noise model '" + name +
                              "' (expected code-capacity|phenomenological|signal)");
}

ResultRecord make_record(const ExperimentSpec& spec, const RunResult& result) {
  ResultRecord rec;
  rec.decoder = decoder_name(spec.decoder);
  rec.d = spec.d;
  rec.model = model_name(spec.model);
  rec.p = spec.noise.p;
  rec.q = spec.noise.q;
  rec.p_sig = spec.noise.p_sig;
  rec.p_cs = spec.noise.p_cs;
  rec.p_fs = spec.noise.p_fs;
  rec.t_r = result.t_reset;
  rec.shots = result.shots;
  rec.failures = result.failures;
  rec.censored = result.censored;
  rec.estimate = result.estimate;
  rec.se = result.se;
  rec.seed = result.seed;
  rec.wall_ms = result.wall_ms;
  return rec;
}

std::string to_json_line(const ResultRecord& rec) {
  json j;
  j["decoder"] = rec.decoder;
  j["d"] = rec.d;
  j["model"] = rec.model;
  j["p"] = rec.p;
  j["q"] = rec.q;
  j["p_sig"] = rec.p_sig;
  j["p_cs"] = rec.p_cs;
  j["p_fs"] = rec.p_fs;
  j["t_r"] = rec.t_r;
  j["shots"] = rec.shots;
  j["failures"] = rec.failures;
  j["censored"] = rec.censored;
  j["estimate"] = rec.estimate;
  j["se"] = rec.se;
  j["seed"] = rec.seed;
  j["schema_version"] = rec.schema_version;
  j["wall_ms"] = rec.wall_ms;
  return j.dump();
}

ResultRecord record_from_json(const std::string& line) {
  const json j = json::parse(line);
  ResultRecord rec;
  rec.decoder = j.at("decoder").get<std::string>();
  rec.d = j.at("d").get<int>();
  rec.model = j.at("model").get<std::string>();
  rec.p = j.at("p").get<double>();
  rec.q = j.at("q").get<double>();
  rec.p_sig = j.at("p_sig").get<double>();
  rec.p_cs = j.at("p_cs").get<double>();
  rec.p_fs = j.at("p_fs").get<double>();
  rec.t_r = j.at("t_r").get<int>();
  rec.shots = j.at("shots").get<long long>();
  rec.failures = j.at("failures").get<long long>();
  rec.censored = j.at("censored").get<long long>();
  rec.estimate = j.at("estimate").get<double>();
  rec.se = j.at("se").get<double>();
  rec.seed = j.at("seed").get<std::uint64_t>();
  rec.schema_version = j.at("schema_version").get<int>();
  rec.wall_ms = j.at("wall_ms").get<double>();
  return rec;
}

std::string csv_header() {
  return "decoder,d,model,p,q,p_sig,p_cs,p_fs,t_r,shots,failures,censored,"
         "estimate,se,seed,schema_version,wall_ms";
}

std::string to_csv_row(const ResultRecord& rec) {
  std::ostringstream os;
  os.precision(17);
  os << rec.decoder << ',' << rec.d << ',' << rec.model << ',' << rec.p << ','
     << rec.q << ',' << rec.p_sig << ',' << rec.p_cs << ',' << rec.p_fs << ','
     << rec.t_r << ',' << rec.shots << ',' << rec.failures << ',' << rec.censored
     << ',' << rec.estimate << ',' << rec.se << ',' << rec.seed << ','
     << rec.schema_version << ',' << rec.wall_ms;
  return os.str();
}

std::size_t export_csv(const std::string& jsonl_path, const std::string& csv_path) {
  std::ifstream in(jsonl_path);
  if (!in) throw std::runtime_error("cannot open " + jsonl_path);
  std::ofstream out(csv_path);
  if (!out) throw std::runtime_error("cannot open " + csv_path);
  out << csv_header() << '\n';
  std::string line;
  std::size_t count = 0;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    out << to_csv_row(record_from_json(line)) << '\n';
    ++count;
  }
  return count;
}

}  // namespace cadec

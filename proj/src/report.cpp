#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include "json.hpp"
#include "qpr/experiment.hpp"
#include "qpr/version.hpp"

namespace qpr::bench {

using nlohmann::ordered_json;

bool Report::all_ok() const {
  for (const auto& r : records)
    if (r.status != "ok") return false;
  return true;
}

namespace {

ordered_json record_to_json(const RunRecord& r) {
  ordered_json j;
  j["solver_id"] = r.solver_id;
  j["seed"] = r.seed;
  j["problem"] = r.problem;
  j["status"] = r.status;
  if (r.status == "ok") {
    j["energy"] = r.energy;
    j["evaluations"] = r.evaluations;
    j["wall_time"] = r.wall_time;
    if (!r.metrics.empty()) {
      ordered_json m;
      for (const auto& [k, v] : r.metrics) m[k] = v;
      j["metrics"] = m;
    }
    if (r.has_target) {
      if (r.time_to_target)
        j["time_to_target"] = *r.time_to_target;
      else
        j["time_to_target"] = nullptr;
    }
  } else {
    j["error"] = r.error;
  }
  return j;
}

RunRecord record_from_json(const ordered_json& j) {
  RunRecord r;
  r.solver_id = j.at("solver_id").get<std::string>();
  r.seed = j.at("seed").get<std::uint64_t>();
  r.problem = j.at("problem").get<std::string>();
  r.status = j.at("status").get<std::string>();
  if (r.status == "ok") {
    r.energy = j.at("energy").get<double>();
    r.evaluations = j.at("evaluations").get<std::uint64_t>();
    r.wall_time = j.at("wall_time").get<double>();
    if (j.contains("metrics"))
      for (const auto& [k, v] : j.at("metrics").items())
        r.metrics[k] = v.get<double>();
    if (j.contains("time_to_target")) {
      r.has_target = true;
      if (!j.at("time_to_target").is_null())
        r.time_to_target = j.at("time_to_target").get<double>();
    }
  } else {
    r.error = j.value("error", "");
  }
  return r;
}

}  // namespace

void write_report(const Report& report, const std::string& path) {
  const std::string tmp = path + ".tmp";
  {
    std::ofstream out(tmp);
    if (!out) throw std::runtime_error("cannot write report: " + tmp);
    ordered_json header;
    header["qpr_report"] = 1;
    header["schema_version"] = report.schema_version;
    header["library_version"] = report.library_version;
    if (!report.config_echo.empty())
      header["config_echo"] = ordered_json::parse(report.config_echo);
    out << header.dump() << "\n";
    for (const auto& r : report.records)
      out << record_to_json(r).dump() << "\n";
    if (!out.good()) throw std::runtime_error("write failed: " + tmp);
  }
  if (std::rename(tmp.c_str(), path.c_str()) != 0)
    throw std::runtime_error("cannot rename report into place: " + path);
}

Report read_report(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open report: " + path);
  std::string line;
  if (!std::getline(in, line))
    throw std::runtime_error(path + ": empty report");
  const ordered_json header = ordered_json::parse(line);
  if (!header.contains("qpr_report"))
    throw std::runtime_error(path + ": not a qpr report");
  Report report;
  report.schema_version = header.at("schema_version").get<int>();
  report.library_version = header.at("library_version").get<std::string>();
  if (header.contains("config_echo"))
    report.config_echo = header.at("config_echo").dump();
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    report.records.push_back(record_from_json(ordered_json::parse(line)));
  }
  return report;
}

void emit_trace(const SolveResult& result, const std::string& path) {
  if (result.trace.empty())
    throw std::invalid_argument("emit_trace: empty trace");
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write trace: " + path);
  out << "step best_energy\n";
  char buf[64];
  for (const auto& tp : result.trace) {
    std::snprintf(buf, sizeof(buf), "%lld %.17g\n",
                  static_cast<long long>(tp.step), tp.energy);
    out << buf;
  }
  if (!out.good()) throw std::runtime_error("write failed: " + path);
}

std::vector<TracePoint> read_trace(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open trace: " + path);
  std::string header;
  std::getline(in, header);
  if (header != "step best_energy")
    throw std::runtime_error(path + ": bad trace header");
  std::vector<TracePoint> out;
  long long step = 0;
  double energy = 0.0;
  while (in >> step >> energy) out.push_back({step, energy});
  return out;
}

}  // namespace qpr::bench

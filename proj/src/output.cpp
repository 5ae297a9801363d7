#include "esrtwin/output.hpp"

#include <fstream>

#include <fmt/format.h>
#include <json.hpp>

#include "esrtwin/errors.hpp"
#include "esrtwin/version.hpp"

namespace esrtwin {

namespace {

std::string axis_value(AxisKind kind, double v) {
  return kind == AxisKind::excitation ? fmt::format("{:.4f}", v) : fmt::format("{:.9f}", v * 1e-9);
}

const char* axis_name(AxisKind kind) { return kind == AxisKind::excitation ? "E_obj_pct" : "freq_axis_GHz"; }

}  // namespace

std::string sweep_csv(const Spectrum& s) {
  std::string out = axis_name(s.axis1_kind);
  if (s.axis2_kind) out += std::string(",") + axis_name(*s.axis2_kind);
  out += ",B0_mT,freq_GHz,I_V,Q_V\n";
  for (std::size_t r = 0; r < s.rows; ++r) {
    for (std::size_t c = 0; c < s.cols; ++c) {
      const std::size_t p = r * s.cols + c;
      out += axis_value(s.axis1_kind, s.axis1[r]);
      if (s.axis2_kind) out += "," + axis_value(*s.axis2_kind, s.axis2[c]);
      out += fmt::format(",{:.6f},{:.9f},{:.10e},{:.10e}\n", s.bias_field[p] * 1e3, s.drive_frequency[p] * 1e-9,
                         s.i[p], s.q[p]);
    }
  }
  return out;
}

std::string matrix_csv(const Spectrum& s) {
  if (!s.axis2_kind) throw ConfigError("matrix output needs a 2D sweep");
  std::string out = "E_obj_pct";
  for (double f : s.axis2) out += "," + axis_value(*s.axis2_kind, f);
  out += "\n";
  for (std::size_t r = 0; r < s.rows; ++r) {
    out += axis_value(s.axis1_kind, s.axis1[r]);
    for (std::size_t c = 0; c < s.cols; ++c) out += fmt::format(",{:.10e}", s.i[r * s.cols + c]);
    out += "\n";
  }
  return out;
}

std::string sensitivity_csv(const SensitivityTable& t, bool full) {
  std::string out = "B0_T";
  for (double temp : t.temperatures) out += fmt::format(",{:g}", temp);
  out += "\n";
  for (std::size_t i = 0; i < t.fields.size(); ++i) {
    out += fmt::format("{:g}", t.fields[i]);
    for (std::size_t j = 0; j < t.temperatures.size(); ++j)
      out += full ? fmt::format(",{:.17g}", t.at(i, j)) : fmt::format(",{:.1e}", t.at(i, j));
    out += "\n";
  }
  return out;
}

std::string manifest_json(const RunConfig& cfg, const std::string& command, const std::vector<std::string>& flags) {
  nlohmann::json m;
  m["software"] = software_name;
  m["version"] = software_version;
  m["command"] = command;
  m["seed"] = cfg.seed;
  m["flags"] = flags;
  m["config"] = nlohmann::json::parse(config_to_json(cfg));
  return m.dump(2) + "\n";
}

void write_text(const std::filesystem::path& p, const std::string& content) {
  if (p.has_parent_path()) std::filesystem::create_directories(p.parent_path());
  std::ofstream out(p, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + p.string());
  out << content;
  if (!out) throw std::runtime_error("failed writing " + p.string());
}

}  // namespace esrtwin

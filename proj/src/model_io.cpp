#include "shrinklearn/model_io.hpp"

#include <fstream>
#include <json.hpp>

#include "shrinklearn/errors.hpp"

namespace shrinklearn {

void save_model(const std::string& path, const Model& model) {
  const SplineNonlinearity& nl = model.nonlinearity;
  if (nl.coefficients.size() != 2 * nl.grid_halfwidth + 1)
    throw std::invalid_argument("save_model: coefficient length mismatch");

  nlohmann::ordered_json j;
  j["format"] = "shrinklearn-model";
  j["version"] = 1;
  j["degree"] = nl.degree;
  j["grid_halfwidth"] = nl.grid_halfwidth;
  j["delta"] = nl.delta;
  j["init_threshold"] = model.init_threshold;
  j["coefficients"] = std::vector<double>(
      nl.coefficients.data(), nl.coefficients.data() + nl.coefficients.size());

  std::ofstream os(path);
  if (!os) throw IoError("cannot open for writing: " + path);
  os << j.dump(2) << "\n";
  if (!os) throw IoError("write failed: " + path);
}

Model load_model(const std::string& path) {
  std::ifstream is(path);
  if (!is) throw IoError("cannot open for reading: " + path);
  nlohmann::json j;
  try {
    is >> j;
  } catch (const nlohmann::json::exception& e) {
    throw IoError("bad model file " + path + ": " + e.what());
  }
  if (j.value("format", "") != "shrinklearn-model")
    throw IoError("not a model file: " + path);

  Model model;
  SplineNonlinearity& nl = model.nonlinearity;
  nl.degree = j.at("degree").get<int>();
  nl.grid_halfwidth = j.at("grid_halfwidth").get<int>();
  nl.delta = j.at("delta").get<double>();
  model.init_threshold = j.at("init_threshold").get<double>();
  const auto coeffs = j.at("coefficients").get<std::vector<double>>();
  if (static_cast<int>(coeffs.size()) != 2 * nl.grid_halfwidth + 1)
    throw IoError("coefficient length mismatch in " + path);
  nl.coefficients = Eigen::Map<const Vector>(coeffs.data(), coeffs.size());
  return model;
}

}  // namespace shrinklearn

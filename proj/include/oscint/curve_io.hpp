#pragma once

// Curve files:
//   {"type":"support_fourier","a0":1.0,"cos":[c1,c2,...],"sin":[s1,...]}
//   {"type":"ellipse","a":2.0,"b":1.0}          optional "angle" (radians)

#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "oscint/curve.hpp"
#include "oscint/error.hpp"

namespace oscint {

inline SupportCurve curve_from_json(const nlohmann::json& j) {
  if (!j.is_object() || !j.contains("type") || !j["type"].is_string())
    throw Error(ErrorKind::InvalidInput, "curve JSON needs a string \"type\"");
  const std::string type = j["type"];
  auto number = [&](const char* key) {
    if (!j.contains(key) || !j[key].is_number()) throw Error(ErrorKind::InvalidInput, std::string("curve JSON needs numeric \"") + key + "\"");
    return j[key].get<double>();
  };
  auto list = [&](const char* key) {
    std::vector<double> v;
    if (!j.contains(key)) return v;
    if (!j[key].is_array()) throw Error(ErrorKind::InvalidInput, std::string("\"") + key + "\" must be an array");
    for (const auto& x : j[key]) {
      if (!x.is_number()) throw Error(ErrorKind::InvalidInput, std::string("\"") + key + "\" entries must be numbers");
      v.push_back(x.get<double>());
    }
    return v;
  };
  if (type == "support_fourier") return SupportCurve::fourier(number("a0"), list("cos"), list("sin"));
  if (type == "ellipse") {
    const double angle = j.contains("angle") ? number("angle") : 0.0;
    return SupportCurve::ellipse(number("a"), number("b"), angle);
  }
  throw Error(ErrorKind::InvalidInput, "unknown curve type \"" + type + "\"");
}

inline nlohmann::json curve_to_json(const SupportCurve& c) {
  nlohmann::json j;
  if (c.kind() == CurveKind::ellipse) {
    j["type"] = "ellipse";
    j["a"] = c.semi_major();
    j["b"] = c.semi_minor();
    if (c.angle() != 0.0) j["angle"] = c.angle();
  } else {
    j["type"] = "support_fourier";
    j["a0"] = c.a0();
    j["cos"] = c.cos_coeffs();
    j["sin"] = c.sin_coeffs();
  }
  return j;
}

inline SupportCurve parse_curve(const std::string& text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorKind::InvalidInput, std::string("curve JSON: ") + e.what());
  }
  return curve_from_json(j);
}

inline SupportCurve load_curve(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorKind::IoError, "cannot open curve file " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_curve(ss.str());
}

}  // namespace oscint

#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "lpdens/estimator.hpp"
#include "lpdens/selection.hpp"

namespace lpdens {

//! Floats in every produced file carry 17 significant digits.
std::string fmt17(double v);

//! Minimal JSON value with insertion-ordered objects and fmt17 numbers, so
//! serialized artifacts are byte-deterministic.
struct JsonVal {
  enum class Type { null, boolean, number, integer, string, array, object };

  Type type = Type::null;
  bool bval = false;
  double nval = 0.0;
  std::int64_t ival = 0;
  std::string sval;
  std::vector<JsonVal> arr;
  std::vector<std::pair<std::string, JsonVal>> obj;

  static JsonVal null();
  static JsonVal boolean(bool b);
  static JsonVal number(double v);
  static JsonVal integer(std::int64_t v);
  static JsonVal str(std::string s);
  static JsonVal array();
  static JsonVal object();

  JsonVal& set(const std::string& key, JsonVal v);  // object only
  JsonVal& push(JsonVal v);                         // array only

  std::string dump(int indent = 2) const;
};

//! CSV sample file: one point per row, d numeric columns, optional header.
Sample read_sample_csv(const std::string& path);
void write_sample_csv(const std::string& path, const Sample& sample);

//! Domain specification file, {"kind": "axis_box" | "poly_sector" |
//! "convex_polygon" | "implicit_grid", ...}.
Domain domain_from_json_text(const std::string& text,
                             const std::string& base_dir = ".");
Domain domain_from_json_file(const std::string& path);

//! Raster text: header "d nx ny xmin xmax ymin ymax", then ny rows of 0/1
//! characters (row 0 at ymin).
BitRaster parse_raster_text(const std::string& text);

JsonVal report_to_json(const SelectionReport& report,
                       const std::vector<double>& t);

void write_text_file(const std::string& path, const std::string& content);
std::string read_text_file(const std::string& path);

}  // namespace lpdens

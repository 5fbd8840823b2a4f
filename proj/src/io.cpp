#include "lpdens/io.hpp"

#include <cctype>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include "json.hpp"
#include "lpdens/errors.hpp"

namespace lpdens {

std::string fmt17(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

JsonVal JsonVal::null() { return JsonVal{}; }

JsonVal JsonVal::boolean(bool b) {
  JsonVal v;
  v.type = Type::boolean;
  v.bval = b;
  return v;
}

JsonVal JsonVal::number(double x) {
  JsonVal v;
  v.type = Type::number;
  v.nval = x;
  return v;
}

JsonVal JsonVal::integer(std::int64_t x) {
  JsonVal v;
  v.type = Type::integer;
  v.ival = x;
  return v;
}

JsonVal JsonVal::str(std::string s) {
  JsonVal v;
  v.type = Type::string;
  v.sval = std::move(s);
  return v;
}

JsonVal JsonVal::array() {
  JsonVal v;
  v.type = Type::array;
  return v;
}

JsonVal JsonVal::object() {
  JsonVal v;
  v.type = Type::object;
  return v;
}

JsonVal& JsonVal::set(const std::string& key, JsonVal v) {
  if (type != Type::object) throw std::logic_error("JsonVal::set on non-object");
  obj.emplace_back(key, std::move(v));
  return *this;
}

JsonVal& JsonVal::push(JsonVal v) {
  if (type != Type::array) throw std::logic_error("JsonVal::push on non-array");
  arr.push_back(std::move(v));
  return *this;
}

namespace {

void escape_to(const std::string& s, std::string& out) {
  out += '"';
  for (char c : s) {
    switch (c) {
      case '"': out += "\\\""; break;
      case '\\': out += "\\\\"; break;
      case '\b': out += "\\b"; break;
      case '\f': out += "\\f"; break;
      case '\n': out += "\\n"; break;
      case '\r': out += "\\r"; break;
      case '\t': out += "\\t"; break;
      default:
        if (static_cast<unsigned char>(c) < 0x20) {
          char buf[8];
          std::snprintf(buf, sizeof(buf), "\\u%04x", c);
          out += buf;
        } else {
          out += c;
        }
    }
  }
  out += '"';
}

void dump_to(const JsonVal& v, int indent, int depth, std::string& out) {
  const std::string pad(static_cast<std::size_t>(indent) * depth, ' ');
  const std::string pad1(static_cast<std::size_t>(indent) * (depth + 1), ' ');
  switch (v.type) {
    case JsonVal::Type::null: out += "null"; return;
    case JsonVal::Type::boolean: out += v.bval ? "true" : "false"; return;
    case JsonVal::Type::number: {
      if (std::isfinite(v.nval)) {
        out += fmt17(v.nval);
      } else {
        out += "null";  // JSON has no inf/nan
      }
      return;
    }
    case JsonVal::Type::integer: out += std::to_string(v.ival); return;
    case JsonVal::Type::string: escape_to(v.sval, out); return;
    case JsonVal::Type::array: {
      if (v.arr.empty()) {
        out += "[]";
        return;
      }
      out += "[\n";
      for (std::size_t i = 0; i < v.arr.size(); ++i) {
        out += pad1;
        dump_to(v.arr[i], indent, depth + 1, out);
        if (i + 1 < v.arr.size()) out += ',';
        out += '\n';
      }
      out += pad + "]";
      return;
    }
    case JsonVal::Type::object: {
      if (v.obj.empty()) {
        out += "{}";
        return;
      }
      out += "{\n";
      for (std::size_t i = 0; i < v.obj.size(); ++i) {
        out += pad1;
        escape_to(v.obj[i].first, out);
        out += ": ";
        dump_to(v.obj[i].second, indent, depth + 1, out);
        if (i + 1 < v.obj.size()) out += ',';
        out += '\n';
      }
      out += pad + "}";
      return;
    }
  }
}

}  // namespace

std::string JsonVal::dump(int indent) const {
  std::string out;
  dump_to(*this, indent, 0, out);
  out += '\n';
  return out;
}

std::string read_text_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open file: " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_text_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot write file: " + path);
  out << content;
  if (!out) throw IoError("write failed: " + path);
}

namespace {

bool parse_double(const std::string& tok, double& out) {
  const char* begin = tok.c_str();
  char* end = nullptr;
  out = std::strtod(begin, &end);
  if (end == begin) return false;
  while (*end != '\0') {
    if (!std::isspace(static_cast<unsigned char>(*end))) return false;
    ++end;
  }
  return true;
}

std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> out;
  std::string cur;
  for (char c : line) {
    if (c == ',') {
      out.push_back(cur);
      cur.clear();
    } else if (c != '\r') {
      cur += c;
    }
  }
  out.push_back(cur);
  return out;
}

}  // namespace

Sample read_sample_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open data file: " + path);
  std::string line;
  Sample sample;
  std::size_t lineno = 0;
  std::vector<double> row;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty() || line.find_first_not_of(" \t\r") == std::string::npos)
      continue;
    const auto tokens = split_csv_line(line);
    row.clear();
    bool numeric = true;
    for (const auto& tok : tokens) {
      double v;
      if (!parse_double(tok, v)) {
        numeric = false;
        break;
      }
      row.push_back(v);
    }
    if (!numeric) {
      if (sample.d == 0 && lineno == 1) continue;  // header row
      throw IoError(path + ":" + std::to_string(lineno) +
                    ": non-numeric value in data file");
    }
    if (sample.d == 0) sample = Sample::with_dimension(static_cast<int>(row.size()));
    if (static_cast<int>(row.size()) != sample.d)
      throw IoError(path + ":" + std::to_string(lineno) +
                    ": inconsistent column count");
    sample.push_back(row);
  }
  if (sample.d == 0 || sample.size() == 0)
    throw IoError(path + ": no data rows");
  return sample;
}

void write_sample_csv(const std::string& path, const Sample& sample) {
  std::string out;
  for (std::size_t i = 0; i < sample.size(); ++i) {
    for (int j = 0; j < sample.d; ++j) {
      if (j) out += ',';
      out += fmt17(sample.cols[j][i]);
    }
    out += '\n';
  }
  write_text_file(path, out);
}

BitRaster parse_raster_text(const std::string& text) {
  std::istringstream in(text);
  BitRaster raster;
  int d = 0;
  if (!(in >> d >> raster.nx >> raster.ny >> raster.xmin >> raster.xmax >>
        raster.ymin >> raster.ymax))
    throw IoError("raster: bad header, expected 'd nx ny xmin xmax ymin ymax'");
  if (d != 2) throw IoError("raster: only d = 2 grids are supported");
  if (raster.nx < 1 || raster.ny < 1) throw IoError("raster: empty grid");
  raster.bits.assign(static_cast<std::size_t>(raster.nx) * raster.ny, 0);
  std::string row;
  int iy = 0;
  while (iy < raster.ny && (in >> row)) {
    if (static_cast<int>(row.size()) != raster.nx)
      throw IoError("raster: row " + std::to_string(iy) + " has wrong length");
    for (int ix = 0; ix < raster.nx; ++ix) {
      const char c = row[static_cast<std::size_t>(ix)];
      if (c != '0' && c != '1') throw IoError("raster: rows must be 0/1");
      raster.bits[static_cast<std::size_t>(iy) * raster.nx + ix] =
          static_cast<std::uint8_t>(c == '1');
    }
    ++iy;
  }
  if (iy != raster.ny) throw IoError("raster: missing rows");
  return raster;
}

namespace {

using nlohmann::json;

std::vector<double> json_vector(const json& j, const std::string& key) {
  if (!j.contains(key) || !j[key].is_array())
    throw IoError("domain file: missing array field '" + key + "'");
  std::vector<double> out;
  for (const auto& v : j[key]) out.push_back(v.get<double>());
  return out;
}

}  // namespace

Domain domain_from_json_text(const std::string& text,
                             const std::string& base_dir) {
  json j;
  try {
    j = json::parse(text);
  } catch (const std::exception& e) {
    throw IoError(std::string("domain file: invalid JSON: ") + e.what());
  }
  const std::string kind = j.value("kind", "");
  try {
    if (kind == "axis_box") {
      return Domain::axis_box(json_vector(j, "lower"), json_vector(j, "upper"));
    }
    if (kind == "poly_sector") {
      if (!j.contains("k")) throw IoError("domain file: poly_sector needs 'k'");
      return Domain::poly_sector(j["k"].get<double>());
    }
    if (kind == "convex_polygon") {
      if (!j.contains("vertices") || !j["vertices"].is_array())
        throw IoError("domain file: convex_polygon needs 'vertices'");
      std::vector<std::array<double, 2>> verts;
      for (const auto& v : j["vertices"]) {
        if (!v.is_array() || v.size() != 2)
          throw IoError("domain file: vertices must be [x, y] pairs");
        verts.push_back({v[0].get<double>(), v[1].get<double>()});
      }
      return Domain::convex_polygon(std::move(verts));
    }
    if (kind == "implicit_grid") {
      std::string raster_text;
      if (j.contains("raster")) {
        raster_text = j["raster"].get<std::string>();
      } else if (j.contains("raster_file")) {
        raster_text =
            read_text_file(base_dir + "/" + j["raster_file"].get<std::string>());
      } else {
        throw IoError("domain file: implicit_grid needs 'raster' or 'raster_file'");
      }
      return Domain::implicit_raster(parse_raster_text(raster_text));
    }
  } catch (const std::invalid_argument& e) {
    throw IoError(std::string("domain file: ") + e.what());
  }
  throw IoError("domain file: unknown kind '" + kind + "'");
}

Domain domain_from_json_file(const std::string& path) {
  std::string base = ".";
  const auto slash = path.find_last_of('/');
  if (slash != std::string::npos) base = path.substr(0, slash);
  return domain_from_json_text(read_text_file(path), base);
}

JsonVal report_to_json(const SelectionReport& report,
                       const std::vector<double>& t) {
  JsonVal root = JsonVal::object();
  JsonVal tv = JsonVal::array();
  for (double v : t) tv.push(JsonVal::number(v));
  root.set("t", std::move(tv));
  JsonVal entries = JsonVal::array();
  for (const GridEntry& e : report.entries) {
    JsonVal row = JsonVal::object();
    row.set("ell", JsonVal::integer(e.ell));
    row.set("m", JsonVal::integer(e.gamma.m));
    row.set("h", JsonVal::number(e.gamma.h));
    row.set("W_h", JsonVal::number(e.W_h));
    row.set("lambda", JsonVal::number(e.gram.lambda));
    row.set("n_in_window", JsonVal::integer(static_cast<std::int64_t>(e.n_in_window)));
    row.set("f_hat", JsonVal::number(e.f_hat));
    row.set("v_hat", JsonVal::number(e.v_hat));
    row.set("U_hat", JsonVal::number(e.U_hat));
    row.set("A_hat", JsonVal::number(e.A_hat));
    row.set("pen", JsonVal::number(e.pen));
    entries.push(std::move(row));
  }
  root.set("entries", std::move(entries));
  root.set("selected_ell", JsonVal::integer(report.selected_ell));
  root.set("f_hat_adaptive", JsonVal::number(report.f_hat_adaptive));
  JsonVal warns = JsonVal::array();
  for (const auto& w : report.warnings) warns.push(JsonVal::str(w));
  root.set("warnings", std::move(warns));
  return root;
}

}  // namespace lpdens

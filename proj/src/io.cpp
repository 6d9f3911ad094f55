#include "fpp/io.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>

#include <json.hpp>

namespace fpp::io {

namespace {

using nlohmann::json;

json parse_json(const std::string& text) {
  json doc = json::parse(text, nullptr, /*allow_exceptions=*/false);
  if (doc.is_discarded()) throw ParseError("malformed structured document");
  return doc;
}

Vector as_vector(const json& j, const char* what) {
  if (!j.is_array()) throw ParseError(std::string(what) + " must be an array");
  Vector v;
  v.reserve(j.size());
  for (const auto& x : j) {
    if (!x.is_number())
      throw ParseError(std::string(what) + " entries must be numbers");
    v.push_back(x.get<double>());
  }
  return v;
}

}  // namespace

NormSpec parse_norm_tag(const std::string& tag) {
  if (tag == "l1") return NormSpec::l1();
  if (tag == "l2") return NormSpec::l2();
  if (tag == "linf") return NormSpec::linf();
  if (tag.rfind("lp:", 0) == 0) {
    const std::string rest = tag.substr(3);
    std::size_t used = 0;
    double p = 0.0;
    try {
      p = std::stod(rest, &used);
    } catch (const std::exception&) {
      throw ParseError("bad exponent in norm tag '" + tag + "'");
    }
    if (used != rest.size() || !(p >= 1.0) || !std::isfinite(p))
      throw ParseError("bad exponent in norm tag '" + tag + "'");
    if (p == 1.0) return NormSpec::l1();
    if (p == 2.0) return NormSpec::l2();
    return NormSpec::lp(p);
  }
  throw ParseError("unknown norm tag '" + tag + "' (use l1|l2|linf|lp:<p>)");
}

std::string norm_tag(const NormSpec& n) {
  switch (n.kind) {
    case NormSpec::Kind::L1:
      return "l1";
    case NormSpec::Kind::L2:
      return "l2";
    case NormSpec::Kind::Linf:
      return "linf";
    case NormSpec::Kind::Lp:
      return "lp:" + fmt17(n.p);
  }
  return "l2";
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ParseError("cannot open '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

InputDocument parse_input_text(const std::string& text) {
  InputDocument doc;
  const std::size_t start = text.find_first_not_of(" \t\r\n");
  if (start == std::string::npos) throw ParseError("empty input document");

  if (text[start] == '{') {
    const json j = parse_json(text);
    if (!j.contains("dim") || !j["dim"].is_number_integer())
      throw ParseError("missing integer field 'dim'");
    const long long dim = j["dim"].get<long long>();
    if (dim < 1) throw ParseError("'dim' must be positive");
    doc.dim = static_cast<std::size_t>(dim);
    if (!j.contains("norm") || !j["norm"].is_string())
      throw ParseError("missing string field 'norm'");
    doc.norm = parse_norm_tag(j["norm"].get<std::string>());
    doc.norm_given = true;
    if (!j.contains("points") || !j["points"].is_array())
      throw ParseError("missing array field 'points'");
    for (const auto& p : j["points"])
      doc.points.push_back(as_vector(p, "point"));
    if (j.contains("base")) doc.base = as_vector(j["base"], "base");
    if (j.contains("delta")) {
      if (!j["delta"].is_number()) throw ParseError("'delta' must be a number");
      doc.delta = j["delta"].get<double>();
    }
  } else {
    // Plain format: one point per line, whitespace-separated numbers.
    std::istringstream lines(text);
    std::string line;
    while (std::getline(lines, line)) {
      std::istringstream row(line);
      Vector v;
      double x;
      while (row >> x) v.push_back(x);
      std::string trailing;
      if (row.clear(), row >> trailing)
        throw ParseError("non-numeric token '" + trailing + "' in row");
      if (!v.empty()) doc.points.push_back(std::move(v));
    }
    if (doc.points.empty()) throw ParseError("no points in input");
    doc.dim = doc.points.front().size();
  }

  if (doc.points.empty()) throw ParseError("no points in input");
  for (const auto& p : doc.points)
    if (p.size() != doc.dim)
      throw ParseError("every point must have length dim");
  for (const auto& p : doc.points)
    if (!all_finite(p)) throw ParseError("points must be finite");
  if (doc.base) {
    if (doc.base->size() != doc.dim)
      throw ParseError("base must have length dim");
    if (!all_finite(*doc.base)) throw ParseError("base must be finite");
  }
  if (doc.delta && !(*doc.delta > 0.0))
    throw ParseError("delta must be positive when present");
  return doc;
}

InputDocument load_input_file(const std::string& path) {
  return parse_input_text(read_file(path));
}

dyn::MapSpec parse_map_text(const std::string& text) {
  const json j = parse_json(text);
  if (!j.contains("kind") || !j["kind"].is_string())
    throw ParseError("missing string field 'kind'");
  const std::string kind = j["kind"].get<std::string>();
  NormSpec n = NormSpec::l2();
  if (j.contains("norm")) {
    if (!j["norm"].is_string()) throw ParseError("'norm' must be a string");
    n = parse_norm_tag(j["norm"].get<std::string>());
  }
  if (!j.contains("b")) throw ParseError("missing field 'b'");
  Vector b = as_vector(j["b"], "b");

  try {
    if (kind == "translation") return dyn::MapSpec::translation(std::move(b), n);
    if (kind == "affine") {
      if (!j.contains("A") || !j["A"].is_array())
        throw ParseError("missing matrix field 'A'");
      const auto& ja = j["A"];
      const std::size_t rows = ja.size();
      if (rows == 0) throw ParseError("'A' must be nonempty");
      Matrix A(rows, as_vector(ja[0], "matrix row").size());
      for (std::size_t i = 0; i < rows; ++i) {
        const Vector row = as_vector(ja[i], "matrix row");
        if (row.size() != A.cols)
          throw ParseError("matrix rows must have equal length");
        for (std::size_t c = 0; c < A.cols; ++c) A.at(i, c) = row[c];
      }
      return dyn::MapSpec::affine(std::move(A), std::move(b), n);
    }
  } catch (const ParseError&) {
    throw;
  } catch (const Error& e) {
    throw ParseError(e.what());  // shape problems are input problems here
  }
  throw ParseError("unknown map kind '" + kind + "'");
}

dyn::MapSpec load_map_file(const std::string& path) {
  return parse_map_text(read_file(path));
}

std::string fmt17(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

void JsonWriter::sep() {
  if (pending_key_) {
    pending_key_ = false;
    return;
  }
  if (!first_.empty()) {
    if (first_.back())
      first_.back() = false;
    else
      out_ += ',';
  }
}

JsonWriter& JsonWriter::obj_open() {
  sep();
  out_ += '{';
  first_.push_back(true);
  return *this;
}

JsonWriter& JsonWriter::obj_close() {
  out_ += '}';
  first_.pop_back();
  return *this;
}

JsonWriter& JsonWriter::arr_open() {
  sep();
  out_ += '[';
  first_.push_back(true);
  return *this;
}

JsonWriter& JsonWriter::arr_close() {
  out_ += ']';
  first_.pop_back();
  return *this;
}

JsonWriter& JsonWriter::key(const std::string& k) {
  sep();
  out_ += '"';
  out_ += k;  // report keys are plain identifiers; no escaping needed
  out_ += "\":";
  pending_key_ = true;
  return *this;
}

JsonWriter& JsonWriter::num(double v) {
  sep();
  out_ += fmt17(v);
  return *this;
}

JsonWriter& JsonWriter::uint(std::size_t v) {
  sep();
  out_ += std::to_string(v);
  return *this;
}

JsonWriter& JsonWriter::str(const std::string& s) {
  sep();
  out_ += '"';
  for (char c : s) {
    if (c == '"' || c == '\\') out_ += '\\';
    out_ += c;
  }
  out_ += '"';
  return *this;
}

JsonWriter& JsonWriter::boolean(bool b) {
  sep();
  out_ += b ? "true" : "false";
  return *this;
}

JsonWriter& JsonWriter::nums(const std::vector<double>& vs) {
  arr_open();
  for (double v : vs) num(v);
  return arr_close();
}

JsonWriter& JsonWriter::uints(const std::vector<std::size_t>& vs) {
  arr_open();
  for (std::size_t v : vs) uint(v);
  return arr_close();
}

}  // namespace fpp::io

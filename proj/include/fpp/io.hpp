#pragma once

#include <optional>
#include <string>
#include <vector>

#include "fpp/dynamics.hpp"
#include "fpp/vectorspace.hpp"

namespace fpp::io {

struct ParseError : Error {
  using Error::Error;
};

// "l1" | "l2" | "linf" | "lp:<p>"
NormSpec parse_norm_tag(const std::string& tag);
std::string norm_tag(const NormSpec& n);

struct InputDocument {
  std::size_t dim = 0;
  NormSpec norm = NormSpec::l2();
  bool norm_given = false;  // false for the plain rows format
  std::vector<Vector> points;
  std::optional<Vector> base;
  std::optional<double> delta;
};

std::string read_file(const std::string& path);

// Sniffs the format: a leading '{' means the structured document, anything
// else is parsed as whitespace-separated rows of numbers (one point per
// line).
InputDocument parse_input_text(const std::string& text);
InputDocument load_input_file(const std::string& path);

// {"kind": "affine"|"translation", "A": [[...]], "b": [...], "norm": tag}
dyn::MapSpec parse_map_text(const std::string& text);
dyn::MapSpec load_map_file(const std::string& path);

// Shortest decimal form that still round-trips binary64: %.17g.
std::string fmt17(double v);

// Order-preserving JSON emitter.  The std parsers are fine for reading, but
// reports must serialize with fixed key order and fixed float formatting to
// stay byte-identical across runs.
class JsonWriter {
 public:
  JsonWriter& obj_open();
  JsonWriter& obj_close();
  JsonWriter& arr_open();
  JsonWriter& arr_close();
  JsonWriter& key(const std::string& k);
  JsonWriter& num(double v);
  JsonWriter& uint(std::size_t v);
  JsonWriter& str(const std::string& s);
  JsonWriter& boolean(bool b);
  JsonWriter& nums(const std::vector<double>& vs);
  JsonWriter& uints(const std::vector<std::size_t>& vs);
  const std::string& result() const { return out_; }

 private:
  void sep();
  std::string out_;
  std::vector<bool> first_;
  bool pending_key_ = false;
};

}  // namespace fpp::io

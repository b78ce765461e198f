#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

namespace klcalc::cli {

enum class Format { json, csv, latex };

// One command result: the JSON document is normative, the rows are the same
// data flattened for csv and latex.
struct Output {
  nlohmann::ordered_json json;
  std::vector<std::string> columns;
  std::vector<std::vector<std::string>> rows;
  // Columns holding polynomials or words, typeset in math mode by latex.
  std::vector<bool> math;
};

Format parse_format(const std::string& name);
void emit(std::ostream& out, const Output& o, Format format);

std::string csv_field(const std::string& s);
// "v^-2 + 2" -> "v^{-2} + 2"; the empty string (identity word) becomes "e".
std::string latex_math(const std::string& s);

}  // namespace klcalc::cli

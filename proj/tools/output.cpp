#include "output.hpp"

#include <cctype>
#include <ostream>

#include "klcalc/errors.hpp"

namespace klcalc::cli {

Format parse_format(const std::string& name) {
  if (name == "json") return Format::json;
  if (name == "csv") return Format::csv;
  if (name == "latex") return Format::latex;
  throw UsageError("unknown format '" + name + "'");
}

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

std::string latex_math(const std::string& s) {
  if (s.empty()) return "e";
  std::string out;
  for (std::size_t i = 0; i < s.size(); ++i) {
    out += s[i];
    if (s[i] != '^') continue;
    std::size_t j = i + 1;
    if (j < s.size() && s[j] == '-') ++j;
    while (j < s.size() && std::isdigit(static_cast<unsigned char>(s[j]))) ++j;
    out += "{" + s.substr(i + 1, j - i - 1) + "}";
    i = j - 1;
  }
  return out;
}

namespace {

std::string latex_text(const std::string& s) {
  std::string out;
  for (char c : s) {
    if (c == '_' || c == '&' || c == '%' || c == '#' || c == '$' || c == '{' || c == '}') out += '\\';
    out += c;
  }
  return out;
}

void emit_latex(std::ostream& out, const Output& o) {
  out << "\\begin{tabular}{" << std::string(o.columns.size(), 'l') << "}\n";
  for (std::size_t c = 0; c < o.columns.size(); ++c) out << (c ? " & " : "") << latex_text(o.columns[c]);
  out << " \\\\\n\\hline\n";
  for (const auto& row : o.rows) {
    for (std::size_t c = 0; c < row.size(); ++c) {
      const bool math = c < o.math.size() && o.math[c];
      out << (c ? " & " : "") << (math ? "$" + latex_math(row[c]) + "$" : latex_text(row[c]));
    }
    out << " \\\\\n";
  }
  out << "\\end{tabular}\n";
}

}  // namespace

void emit(std::ostream& out, const Output& o, Format format) {
  switch (format) {
    case Format::json:
      out << o.json.dump(2) << '\n';
      break;
    case Format::csv:
      for (std::size_t c = 0; c < o.columns.size(); ++c) out << (c ? "," : "") << csv_field(o.columns[c]);
      out << '\n';
      for (const auto& row : o.rows) {
        for (std::size_t c = 0; c < row.size(); ++c) out << (c ? "," : "") << csv_field(row[c]);
        out << '\n';
      }
      break;
    case Format::latex:
      emit_latex(out, o);
      break;
  }
}

}  // namespace klcalc::cli

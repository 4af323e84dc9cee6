#include <cstdio>
#include <fstream>
#include <ostream>

#include "bura/error.hpp"
#include "bura/experiments.hpp"

namespace bura {

std::string format_sci(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.9e", v);
  return buf;
}

std::string format_opt(const std::optional<double>& v) { return v ? format_sci(*v) : std::string(); }

void CsvTable::add_row(std::vector<std::string> row) {
  if (row.size() != header_.size()) throw Error(ErrorCode::LengthMismatch, "CSV row width differs from header");
  rows_.push_back(std::move(row));
}

namespace {

void write_line(std::ostream& out, const std::vector<std::string>& cells) {
  for (std::size_t i = 0; i < cells.size(); ++i) {
    if (i) out << ',';
    out << cells[i];
  }
  out << '\n';
}

std::ofstream open_for_write(const std::string& path) {
  std::ofstream f(path);
  if (!f) throw Error(ErrorCode::IoError, "cannot open '" + path + "' for writing");
  return f;
}

}  // namespace

void CsvTable::write(std::ostream& out) const {
  write_line(out, header_);
  for (const auto& r : rows_) write_line(out, r);
}

void CsvTable::save(const std::string& path) const {
  auto f = open_for_write(path);
  write(f);
  if (!f) throw Error(ErrorCode::IoError, "write to '" + path + "' failed");
}

void emit_plotdata(const std::vector<PlotSeries>& set, std::ostream& out) {
  out << "# bura plot data, " << set.size() << " series\n";
  for (const auto& s : set) {
    out << "\n# " << s.name << "\n#";
    for (const auto& c : s.columns) out << ' ' << c;
    out << '\n';
    for (const auto& row : s.rows) {
      if (row.size() != s.columns.size()) throw Error(ErrorCode::LengthMismatch, "series '" + s.name + "' row width");
      for (std::size_t i = 0; i < row.size(); ++i) {
        if (i) out << ' ';
        out << format_sci(row[i]);
      }
      out << '\n';
    }
  }
}

void emit_plotdata(const std::vector<PlotSeries>& set, const std::string& path) {
  auto f = open_for_write(path);
  emit_plotdata(set, f);
  if (!f) throw Error(ErrorCode::IoError, "write to '" + path + "' failed");
}

}  // namespace bura

#include "rmc/io.hpp"

#include <charconv>
#include <cstdio>
#include <istream>
#include <ostream>
#include <sstream>
#include <tuple>

namespace rmc {

namespace {

std::string fixed6(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.6f", v);
  return buf;
}

std::string exact(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::vector<std::string> tokens(const std::string& line) {
  std::istringstream ss(line);
  std::vector<std::string> out;
  for (std::string t; ss >> t;) out.push_back(t);
  return out;
}

template <typename T>
T parse_int(const std::string& text, int line_no) {
  T value{};
  const auto* end = text.data() + text.size();
  const auto [ptr, ec] = std::from_chars(text.data(), end, value);
  if (ec != std::errc{} || ptr != end) {
    throw ParseError("line " + std::to_string(line_no) + ": expected an integer, got '" + text + "'");
  }
  return value;
}

double parse_double(const std::string& text, int line_no) {
  std::size_t used = 0;
  double v = 0.0;
  try {
    v = std::stod(text, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used == 0 || used != text.size()) {
    throw ParseError("line " + std::to_string(line_no) + ": expected a number, got '" + text + "'");
  }
  return v;
}

// Calls fn(fields, line_no) for each content line.
template <typename Fn>
void for_each_line(std::istream& in, Fn&& fn) {
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    const auto first = line.find_first_not_of(" \t");
    if (first == std::string::npos || line[first] == '#') continue;
    fn(tokens(line), line_no);
  }
}

std::pair<int, int> parse_header(const std::vector<std::string>& f, int line_no) {
  if (f.size() != 2) throw ParseError("line " + std::to_string(line_no) + ": header must be 'd N'");
  const int d = parse_int<int>(f[0], line_no);
  const int n = parse_int<int>(f[1], line_no);
  if (d <= 0 || n <= 0) throw ParseError("line " + std::to_string(line_no) + ": dimensions must be positive");
  return {d, n};
}

std::vector<std::string> split_csv(const std::string& line) {
  std::vector<std::string> out;
  std::string field;
  std::istringstream ss(line);
  while (std::getline(ss, field, ',')) out.push_back(field);
  if (!line.empty() && line.back() == ',') out.emplace_back();
  return out;
}

bool parse_bool(const std::string& s, int line_no) {
  if (s == "true") return true;
  if (s == "false") return false;
  throw ParseError("line " + std::to_string(line_no) + ": expected true or false");
}

}  // namespace

SamplingPattern read_pattern(std::istream& in) {
  bool have_header = false;
  int d = 0, n = 0;
  std::vector<Cell> cells;
  for_each_line(in, [&](const std::vector<std::string>& f, int line_no) {
    if (!have_header) {
      std::tie(d, n) = parse_header(f, line_no);
      have_header = true;
      return;
    }
    if (f.size() != 2) throw ParseError("line " + std::to_string(line_no) + ": expected 'row col'");
    cells.push_back({parse_int<int>(f[0], line_no), parse_int<int>(f[1], line_no)});
  });
  if (!have_header) throw ParseError("missing 'd N' header");
  try {
    return SamplingPattern::from_cells(d, n, cells);
  } catch (const PreconditionError& e) {
    throw ParseError(e.what());
  }
}

void write_pattern(std::ostream& out, const SamplingPattern& pattern) {
  out << pattern.rows() << ' ' << pattern.cols() << '\n';
  for (const Cell& c : pattern.cells()) out << c.row << ' ' << c.col << '\n';
}

Observations read_observations(std::istream& in) {
  bool have_header = false;
  int d = 0, n = 0;
  std::vector<Entry> entries;
  for_each_line(in, [&](const std::vector<std::string>& f, int line_no) {
    if (!have_header) {
      std::tie(d, n) = parse_header(f, line_no);
      have_header = true;
      return;
    }
    if (f.size() != 3) throw ParseError("line " + std::to_string(line_no) + ": expected 'row col value'");
    entries.push_back({{parse_int<int>(f[0], line_no), parse_int<int>(f[1], line_no)}, parse_double(f[2], line_no)});
  });
  if (!have_header) throw ParseError("missing 'd N' header");
  try {
    return Observations(d, n, std::move(entries));
  } catch (const PreconditionError& e) {
    throw ParseError(e.what());
  }
}

void write_observations(std::ostream& out, const Observations& observations) {
  out << observations.rows() << ' ' << observations.cols() << '\n';
  for (const auto& e : observations.entries()) out << e.cell.row << ' ' << e.cell.col << ' ' << exact(e.value) << '\n';
}

void write_sweep_csv(std::ostream& out, const std::vector<SweepRow>& rows) {
  out << "r,g,l_min,portion,binding,feasible,premise_ok\n";
  for (const auto& row : rows) {
    out << row.r << ',' << row.g << ',' << row.bound.l_min << ',' << fixed6(row.portion) << ',' << row.bound.binding
        << ',' << (row.bound.feasible ? "true" : "false") << ',' << (row.bound.premise_ok ? "true" : "false") << '\n';
  }
}

std::vector<SweepCsvRow> read_sweep_csv(std::istream& in) {
  std::vector<SweepCsvRow> rows;
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line_no == 1) {
      if (line != "r,g,l_min,portion,binding,feasible,premise_ok") throw ParseError("unexpected sweep CSV header");
      continue;
    }
    if (line.empty()) continue;
    const auto f = split_csv(line);
    if (f.size() != 7) throw ParseError("line " + std::to_string(line_no) + ": expected 7 fields");
    rows.push_back({parse_int<int>(f[0], line_no), parse_int<int>(f[1], line_no),
                    parse_int<std::int64_t>(f[2], line_no), parse_double(f[3], line_no), f[4],
                    parse_bool(f[5], line_no), parse_bool(f[6], line_no)});
  }
  return rows;
}

void write_trials_csv(std::ostream& out, const std::vector<TrialOutcome>& outcomes, std::int64_t theory_l_min) {
  out << "l,pass,trials,estimate,ci_lo,ci_hi,theory_lmin\n";
  for (const auto& o : outcomes) {
    out << o.l << ',' << o.pass_count << ',' << o.trial_count << ',' << fixed6(o.point_estimate) << ','
        << fixed6(o.confidence_interval.lo) << ',' << fixed6(o.confidence_interval.hi) << ',' << theory_l_min << '\n';
  }
}

std::vector<TrialCsvRow> read_trials_csv(std::istream& in) {
  std::vector<TrialCsvRow> rows;
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line_no == 1) {
      if (line != "l,pass,trials,estimate,ci_lo,ci_hi,theory_lmin") throw ParseError("unexpected trials CSV header");
      continue;
    }
    if (line.empty()) continue;
    const auto f = split_csv(line);
    if (f.size() != 7) throw ParseError("line " + std::to_string(line_no) + ": expected 7 fields");
    rows.push_back({parse_int<int>(f[0], line_no), parse_int<std::int64_t>(f[1], line_no),
                    parse_int<std::int64_t>(f[2], line_no), parse_double(f[3], line_no), parse_double(f[4], line_no),
                    parse_double(f[5], line_no), parse_int<std::int64_t>(f[6], line_no)});
  }
  return rows;
}

}  // namespace rmc

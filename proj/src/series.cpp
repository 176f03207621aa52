#include "ars/series.hpp"

#include <cctype>
#include <cmath>
#include <iomanip>
#include <limits>
#include <locale>
#include <sstream>
#include <vector>

namespace ars {

TimeSeries::TimeSeries(Matrix values, double step, std::int64_t start_index)
    : values_(std::move(values)), step_(step), start_index_(start_index) {
  if (values_.cols() < 1) throw InvalidArgument("series dimension must be at least 1");
  if (!(step_ > 0.0) || !std::isfinite(step_)) throw InvalidArgument("series step must be positive");
}

TimeSeries TimeSeries::leading(Index cols) const {
  if (cols < 1 || cols > dim()) throw InvalidArgument("requested columns exceed series dimension");
  return TimeSeries(values_.leftCols(cols), step_, start_index_);
}

TimeSeries TimeSeries::slice(Index first, Index count) const {
  if (first < 0 || count < 0 || first + count > length()) throw InvalidArgument("slice out of range");
  return TimeSeries(values_.middleRows(first, count), step_, start_index_ + first);
}

std::string format_double(double value) {
  std::ostringstream os;
  os.imbue(std::locale::classic());
  os << std::setprecision(17) << value;
  return os.str();
}

void write_csv(std::ostream& out, const TimeSeries& series) {
  out << 't';
  for (Index c = 0; c < series.dim(); ++c) out << ",x" << c + 1;
  out << '\n';
  for (Index j = 0; j < series.length(); ++j) {
    out << format_double(series.time(j));
    for (Index c = 0; c < series.dim(); ++c) out << ',' << format_double(series.values()(j, c));
    out << '\n';
  }
}

namespace {

std::vector<std::string> split_fields(const std::string& line) {
  std::vector<std::string> fields;
  std::string field;
  std::istringstream is(line);
  while (std::getline(is, field, ',')) fields.push_back(field);
  if (!line.empty() && line.back() == ',') fields.emplace_back();
  return fields;
}

double parse_number(const std::string& text, std::size_t line) {
  std::size_t used = 0;
  double v = 0.0;
  try {
    v = std::stod(text, &used);
  } catch (const std::exception&) {
    throw ParseError("not a number: '" + text + "'", line);
  }
  while (used < text.size() && std::isspace(static_cast<unsigned char>(text[used]))) ++used;
  if (used != text.size()) throw ParseError("trailing characters in '" + text + "'", line);
  return v;
}

}  // namespace

TimeSeries read_csv(std::istream& in, double default_step) {
  std::string line;
  std::size_t line_no = 0;
  std::size_t columns = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    const auto header = split_fields(line);
    if (header.size() < 2 || header.front() != "t") throw ParseError("expected header t,x1,...", line_no);
    columns = header.size() - 1;
    break;
  }
  if (columns == 0) throw ParseError("empty input", line_no);

  std::vector<double> times;
  std::vector<double> flat;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    const auto fields = split_fields(line);
    if (fields.size() != columns + 1) {
      throw ParseError("expected " + std::to_string(columns + 1) + " fields, got " + std::to_string(fields.size()),
                       line_no);
    }
    times.push_back(parse_number(fields[0], line_no));
    for (std::size_t c = 1; c < fields.size(); ++c) flat.push_back(parse_number(fields[c], line_no));
  }

  const auto rows = static_cast<Index>(times.size());
  Matrix values(rows, static_cast<Index>(columns));
  for (Index j = 0; j < rows; ++j)
    for (Index c = 0; c < values.cols(); ++c) values(j, c) = flat[static_cast<std::size_t>(j) * columns + c];

  double step = default_step;
  if (rows >= 2) step = times[1] - times[0];
  if (!(step > 0.0)) throw ParseError("time column must be strictly increasing", 3);
  std::int64_t start = 0;
  if (rows >= 1) start = static_cast<std::int64_t>(std::llround(times[0] / step));
  return TimeSeries(std::move(values), step, start);
}

CompletedSeries::CompletedSeries(ObservedSeries obs, Matrix slack_values)
    : observed(std::move(obs)), slack(std::move(slack_values)) {
  if (slack.rows() != observed.length())
    throw InvalidArgument("slack length " + std::to_string(slack.rows()) + " does not match observed length " +
                          std::to_string(observed.length()));
}

Matrix CompletedSeries::state_matrix() const {
  Matrix x(length(), dim());
  x.leftCols(observed_dims()) = observed.values();
  x.rightCols(slack_dims()) = slack;
  return x;
}

}  // namespace ars

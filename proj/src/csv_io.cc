#include "xsym/csv_io.hh"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <iomanip>
#include <map>
#include <optional>
#include <ostream>
#include <sstream>

#include "xsym/errors.hh"

namespace xsym::io {

namespace {

std::string trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return std::string(s.substr(first, last - first + 1));
}

std::vector<std::string> split(const std::string& line) {
  std::vector<std::string> fields;
  std::size_t start = 0;
  while (true) {
    const auto comma = line.find(',', start);
    fields.push_back(trim(std::string_view(line).substr(start, comma - start)));
    if (comma == std::string::npos) break;
    start = comma + 1;
  }
  return fields;
}

// Row-oriented reader that tracks line numbers and maps header names to
// column indices.
class Table {
 public:
  explicit Table(std::istream& in) : in_(in) {
    std::vector<std::string> header;
    if (!next(header)) throw DataError("empty CSV input");
    header_line_ = line_;
    for (std::size_t i = 0; i < header.size(); ++i) columns_[header[i]] = i;
    width_ = header.size();
  }

  std::optional<std::size_t> column(const std::string& name) const {
    if (auto it = columns_.find(name); it != columns_.end()) return it->second;
    return std::nullopt;
  }

  std::size_t require(const std::string& name) const {
    if (auto c = column(name)) return *c;
    throw DataError("missing required column '" + name + "'", header_line_);
  }

  bool next(std::vector<std::string>& fields) {
    std::string line;
    while (std::getline(in_, line)) {
      ++line_;
      const auto trimmed = trim(line);
      if (trimmed.empty() || trimmed.front() == '#') continue;
      fields = split(trimmed);
      if (width_ && fields.size() != width_)
        throw DataError("expected " + std::to_string(width_) + " fields, found " +
                            std::to_string(fields.size()),
                        line_);
      return true;
    }
    return false;
  }

  double number(const std::string& field, const char* what) const {
    double value = 0.0;
    const char* begin = field.data();
    const char* end = begin + field.size();
    if (begin != end && *begin == '+') ++begin;
    auto [ptr, ec] = std::from_chars(begin, end, value);
    if (field.empty() || ec != std::errc{} || ptr != end)
      throw DataError(std::string("malformed ") + what + " '" + field + "'", line_);
    return value;
  }

  std::size_t line() const { return line_; }

 private:
  std::istream& in_;
  std::map<std::string, std::size_t> columns_;
  std::size_t width_ = 0;
  std::size_t line_ = 0;
  std::size_t header_line_ = 0;
};

std::ifstream open(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open '" + path.string() + "'");
  return in;
}

}  // namespace

AngularCsv read_angular_csv(std::istream& in) {
  Table table(in);
  const auto label_col = table.require("bin_label");
  const auto theta_col = table.require("theta_deg");
  const auto yield_col = table.require("yield");
  const auto err_col = table.column("err");

  AngularCsv out;
  std::map<std::string, std::size_t> index;
  std::size_t with_err = 0, without_err = 0;
  std::vector<std::string> f;
  while (table.next(f)) {
    fitkit::AngularPoint p;
    p.theta_deg = table.number(f[theta_col], "theta_deg");
    if (!(p.theta_deg > 0.0 && p.theta_deg < 180.0))
      throw DataError("theta_deg must lie in (0, 180)", table.line());
    p.yield = table.number(f[yield_col], "yield");
    if (err_col && !f[*err_col].empty()) {
      p.err = table.number(f[*err_col], "err");
      if (!(p.err > 0.0)) throw DataError("err must be positive", table.line());
      ++with_err;
    } else {
      p.err = 1.0;
      ++without_err;
    }
    if (with_err && without_err)
      throw DataError("err given for some points but not others", table.line());

    auto [it, inserted] = index.try_emplace(f[label_col], out.datasets.size());
    if (inserted) out.datasets.push_back({f[label_col], {}});
    out.datasets[it->second].points.push_back(p);
  }
  if (out.datasets.empty()) throw DataError("no data rows");
  out.unit_weights = with_err == 0;
  if (out.unit_weights)
    out.warnings.push_back("no err column values: using unit weights");
  return out;
}

AngularCsv read_angular_csv(const std::filesystem::path& path) {
  auto in = open(path);
  return read_angular_csv(in);
}

std::vector<thermo::SpectrumPoint> read_spectrum_csv(std::istream& in) {
  Table table(in);
  const auto eps_col = table.require("eps_mev");
  const auto counts_col = table.require("counts");
  const auto err_col = table.column("err");
  std::vector<thermo::SpectrumPoint> points;
  std::vector<std::string> f;
  while (table.next(f)) {
    thermo::SpectrumPoint p;
    p.eps = table.number(f[eps_col], "eps_mev");
    if (!(p.eps > 0.0)) throw DataError("eps_mev must be positive", table.line());
    p.counts = table.number(f[counts_col], "counts");
    p.err = (err_col && !f[*err_col].empty()) ? table.number(f[*err_col], "err") : 0.0;
    if (p.err < 0.0) throw DataError("err must be non-negative", table.line());
    points.push_back(p);
  }
  if (points.empty()) throw DataError("no data rows");
  return points;
}

std::vector<thermo::SpectrumPoint> read_spectrum_csv(const std::filesystem::path& path) {
  auto in = open(path);
  return read_spectrum_csv(in);
}

thermo::SigmaInvTable read_sigma_table_csv(std::istream& in) {
  Table table(in);
  const auto eps_col = table.require("eps_mev");
  const auto sigma_col = table.require("sigma_fm2");
  std::vector<std::pair<double, double>> rows;
  std::vector<std::string> f;
  while (table.next(f))
    rows.emplace_back(table.number(f[eps_col], "eps_mev"),
                      table.number(f[sigma_col], "sigma_fm2"));
  try {
    return thermo::SigmaInvTable(std::move(rows));
  } catch (const std::invalid_argument& e) {
    throw DataError(std::string("sigma_inv table: ") + e.what());
  }
}

thermo::SigmaInvTable read_sigma_table_csv(const std::filesystem::path& path) {
  auto in = open(path);
  return read_sigma_table_csv(in);
}

void write_angular_csv(std::ostream& out, std::span<const fitkit::AngularDataset> datasets) {
  out << "bin_label,theta_deg,yield,err\n" << std::setprecision(17);
  for (const auto& d : datasets)
    for (const auto& p : d.points)
      out << d.bin_label << ',' << p.theta_deg << ',' << p.yield << ',' << p.err << '\n';
}

void write_spectrum_csv(std::ostream& out, std::span<const thermo::SpectrumPoint> points) {
  out << "eps_mev,counts,err\n" << std::setprecision(17);
  for (const auto& p : points) out << p.eps << ',' << p.counts << ',' << p.err << '\n';
}

}  // namespace xsym::io

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>

#include "roomgreen/core.hpp"
#include "roomgreen/errors.hpp"

namespace roomgreen {

namespace {

std::string trim(const std::string& s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

double parse_number(const std::string& field, const std::string& source, int line) {
  const std::string t = trim(field);
  std::size_t used = 0;
  double value = 0.0;
  try {
    value = std::stod(t, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used == 0 || used != t.size() || !std::isfinite(value)) {
    throw InputError(source + ":" + std::to_string(line) + ": not a number: '" + t + "'");
  }
  return value;
}

}  // namespace

Admittance Admittance::constant(Complex beta) {
  if (!std::isfinite(beta.real()) || !std::isfinite(beta.imag())) {
    throw InputError("admittance must be finite");
  }
  Admittance a;
  a.value_ = beta;
  return a;
}

Admittance Admittance::from_impedance(Complex zeta) {
  if (zeta == Complex{}) throw InputError("impedance ζ = 0 has no finite admittance");
  return constant(1.0 / zeta);
}

Admittance Admittance::table(std::vector<Row> rows) {
  if (rows.size() < 2) throw InputError("admittance table needs at least two rows");
  for (std::size_t i = 0; i < rows.size(); ++i) {
    const Row& r = rows[i];
    if (!std::isfinite(r.frequency) || !std::isfinite(r.beta.real()) ||
        !std::isfinite(r.beta.imag())) {
      throw InputError("admittance table contains a non-finite value");
    }
    if (i > 0 && !(r.frequency > rows[i - 1].frequency)) {
      throw InputError("admittance table frequencies must be strictly increasing");
    }
  }
  Admittance a;
  a.rows_ = std::move(rows);
  return a;
}

Admittance Admittance::parse_table(std::istream& in, const std::string& source) {
  std::vector<Row> rows;
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const std::string t = trim(line);
    if (t.empty() || t.front() == '#') continue;
    std::vector<std::string> fields;
    std::stringstream ss(t);
    std::string field;
    while (std::getline(ss, field, ',')) fields.push_back(field);
    if (fields.size() != 3) {
      throw InputError(source + ":" + std::to_string(line_no) +
                       ": expected 'f_hz, re_beta, im_beta'");
    }
    rows.push_back({parse_number(fields[0], source, line_no),
                    {parse_number(fields[1], source, line_no),
                     parse_number(fields[2], source, line_no)}});
  }
  return table(std::move(rows));
}

Admittance Admittance::load_table(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open admittance table " + path.string());
  return parse_table(in, path.string());
}

Complex Admittance::at(double frequency) const {
  if (is_constant()) return value_;
  const double lo = rows_.front().frequency;
  const double hi = rows_.back().frequency;
  if (!(frequency >= lo && frequency <= hi)) {
    std::ostringstream os;
    os << "frequency " << frequency << " Hz outside admittance table range [" << lo << ", "
       << hi << "] Hz";
    throw InputError(os.str());
  }
  auto upper = std::upper_bound(rows_.begin(), rows_.end(), frequency,
                                [](double f, const Row& r) { return f < r.frequency; });
  if (upper == rows_.end()) return rows_.back().beta;
  const Row& b = *upper;
  const Row& a = *(upper - 1);
  const double t = (frequency - a.frequency) / (b.frequency - a.frequency);
  return {a.beta.real() + t * (b.beta.real() - a.beta.real()),
          a.beta.imag() + t * (b.beta.imag() - a.beta.imag())};
}

std::string Admittance::describe() const {
  std::ostringstream os;
  os.precision(17);
  if (is_constant()) {
    os << value_.real() << (value_.imag() < 0 ? "" : "+") << value_.imag() << "i";
  } else {
    os << "table[" << rows_.size() << " rows, " << rows_.front().frequency << "-"
       << rows_.back().frequency << " Hz]";
  }
  return os.str();
}

}  // namespace roomgreen

#include "missreg/csv.hpp"

#include <cctype>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace missreg {

ScalingParams ScalingParams::identity(Index d) {
  ScalingParams s;
  s.enabled = false;
  s.mean = Vector::Zero(d);
  s.stddev = Vector::Ones(d);
  s.y_mean = 0.0;
  s.y_std = 1.0;
  return s;
}

void ScalingParams::validate(Index d) const {
  if (mean.size() != d || stddev.size() != d)
    throw InvalidDataError("ScalingParams: dimension mismatch");
  for (Index j = 0; j < d; ++j)
    if (!(stddev[j] > 0.0) || !std::isfinite(stddev[j]) || !std::isfinite(mean[j]))
      throw InvalidDataError("ScalingParams: invalid scale for column " + std::to_string(j));
  if (!(y_std > 0.0) || !std::isfinite(y_std) || !std::isfinite(y_mean))
    throw InvalidDataError("ScalingParams: invalid target scale");
}

void ScalingParams::apply(MaskedVector& x) const {
  if (!enabled) return;
  for (Index j = 0; j < x.size(); ++j)
    if (x.mask[j]) x.values[j] = (x.values[j] - mean[j]) / stddev[j];
}

double ScalingParams::scale_target(double y) const {
  return enabled ? (y - y_mean) / y_std : y;
}

double ScalingParams::unscale_prediction(double y_scaled) const {
  return enabled ? y_scaled * y_std + y_mean : y_scaled;
}

Index RawTable::column_index(const std::string& name) const {
  for (std::size_t j = 0; j < columns.size(); ++j)
    if (columns[j] == name) return static_cast<Index>(j);
  return -1;
}

std::set<std::string> default_na_tokens() { return {"NA", "NaN", "", "null"}; }

namespace {

std::string trim(const std::string& s) {
  std::size_t a = 0, b = s.size();
  while (a < b && std::isspace(static_cast<unsigned char>(s[a]))) ++a;
  while (b > a && std::isspace(static_cast<unsigned char>(s[b - 1]))) --b;
  return s.substr(a, b - a);
}

std::vector<std::string> split_line(const std::string& line) {
  std::vector<std::string> out;
  std::string cur;
  for (char c : line) {
    if (c == ',') {
      out.push_back(trim(cur));
      cur.clear();
    } else {
      cur.push_back(c);
    }
  }
  out.push_back(trim(cur));
  return out;
}

}  // namespace

RawTable read_table(const std::string& path, const std::set<std::string>& na_tokens) {
  std::ifstream in(path);
  if (!in) throw InvalidDataError("cannot open file: " + path);

  RawTable table;
  std::string line;
  long lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (lineno == 1) {
      table.columns = split_line(line);
      if (table.columns.empty() || (table.columns.size() == 1 && table.columns[0].empty()))
        throw InvalidDataError(path + ": empty header");
      continue;
    }
    if (line.empty()) continue;
    const std::vector<std::string> cells = split_line(line);
    if (cells.size() != table.columns.size())
      throw InvalidDataError(path + ": line " + std::to_string(lineno) + " has " +
                             std::to_string(cells.size()) + " cells, expected " +
                             std::to_string(table.columns.size()));
    std::vector<std::optional<double>> row(cells.size());
    for (std::size_t j = 0; j < cells.size(); ++j) {
      if (na_tokens.count(cells[j])) continue;
      double v = 0.0;
      const char* b = cells[j].data();
      const char* e = b + cells[j].size();
      const auto [ptr, ec] = std::from_chars(b, e, v);
      if (ec != std::errc() || ptr != e || !std::isfinite(v))
        throw InvalidDataError(path + ": line " + std::to_string(lineno) + ", column '" +
                               table.columns[j] + "': cannot parse '" + cells[j] + "'");
      row[j] = v;
    }
    table.rows.push_back(std::move(row));
  }
  if (lineno == 0) throw InvalidDataError(path + ": empty file");
  return table;
}

CsvData ingest_csv(const std::string& path, const std::string& target_column,
                   const std::set<std::string>& na_tokens, bool scale) {
  const RawTable table = read_table(path, na_tokens);
  const Index target = table.column_index(target_column);
  if (target < 0)
    throw InvalidDataError(path + ": target column '" + target_column + "' not found");
  const Index d = static_cast<Index>(table.columns.size()) - 1;
  if (d == 0) throw InvalidDataError(path + ": no feature columns besides the target");

  CsvData out;
  out.target_name = target_column;
  for (Index j = 0; j < static_cast<Index>(table.columns.size()); ++j)
    if (j != target) out.feature_names.push_back(table.columns[static_cast<std::size_t>(j)]);

  for (const auto& row : table.rows) {
    if (!row[static_cast<std::size_t>(target)]) {
      ++out.rows_dropped_missing_target;
      continue;
    }
    Vector vals = Vector::Zero(d);
    BoolArray mask(d);
    Index jj = 0;
    for (Index j = 0; j < static_cast<Index>(row.size()); ++j) {
      if (j == target) continue;
      const auto& cell = row[static_cast<std::size_t>(j)];
      mask[jj] = cell.has_value();
      vals[jj] = cell.value_or(0.0);
      ++jj;
    }
    out.obs.push_back(
        Observation{MaskedVector::from_parts(std::move(vals), std::move(mask)),
                    *row[static_cast<std::size_t>(target)]});
  }
  if (out.obs.empty())
    throw InvalidDataError(path + ": no usable rows (all targets missing or file empty)");
  if (out.rows_dropped_missing_target > 0)
    out.warnings.push_back("dropped " + std::to_string(out.rows_dropped_missing_target) +
                           " rows with missing target");

  std::vector<MaskedVector> xs;
  xs.reserve(out.obs.size());
  for (const auto& ob : out.obs) xs.push_back(ob.x);
  out.miss = estimate_missingness(xs, &out.warnings);

  out.scaling = ScalingParams::identity(d);
  if (scale) {
    Vector sum = Vector::Zero(d), sumsq = Vector::Zero(d);
    Eigen::ArrayXd cnt = Eigen::ArrayXd::Zero(d);
    for (const auto& ob : out.obs)
      for (Index j = 0; j < d; ++j)
        if (ob.x.mask[j]) {
          sum[j] += ob.x.values[j];
          sumsq[j] += ob.x.values[j] * ob.x.values[j];
          cnt[j] += 1.0;
        }
    for (Index j = 0; j < d; ++j) {
      if (cnt[j] == 0.0) continue;  // estimate_missingness already warned
      out.scaling.mean[j] = sum[j] / cnt[j];
      const double var = sumsq[j] / cnt[j] - out.scaling.mean[j] * out.scaling.mean[j];
      if (var > 0.0) {
        out.scaling.stddev[j] = std::sqrt(var);
      } else {
        out.scaling.stddev[j] = 1.0;
        out.warnings.push_back("feature '" + out.feature_names[static_cast<std::size_t>(j)] +
                               "' is constant; left unscaled");
      }
    }
    double ysum = 0.0, ysumsq = 0.0;
    for (const auto& ob : out.obs) {
      ysum += ob.y;
      ysumsq += ob.y * ob.y;
    }
    const double n = static_cast<double>(out.obs.size());
    out.scaling.y_mean = ysum / n;
    const double yvar = ysumsq / n - out.scaling.y_mean * out.scaling.y_mean;
    out.scaling.y_std = yvar > 0.0 ? std::sqrt(yvar) : 1.0;
    out.scaling.enabled = true;

    for (auto& ob : out.obs) {
      out.scaling.apply(ob.x);
      ob.y = out.scaling.scale_target(ob.y);
    }
  }
  return out;
}

void write_csv(const std::string& path, const std::vector<std::string>& columns,
               const std::vector<std::vector<std::optional<double>>>& rows,
               const std::string& na_token) {
  std::ofstream outf(path);
  if (!outf) throw InvalidDataError("cannot open file for writing: " + path);
  for (std::size_t j = 0; j < columns.size(); ++j)
    outf << (j ? "," : "") << columns[j];
  outf << '\n';
  char buf[64];
  for (const auto& row : rows) {
    if (row.size() != columns.size())
      throw InvalidDataError("write_csv: ragged row");
    for (std::size_t j = 0; j < row.size(); ++j) {
      if (j) outf << ',';
      if (row[j]) {
        std::snprintf(buf, sizeof buf, "%.17g", *row[j]);
        outf << buf;
      } else {
        outf << na_token;
      }
    }
    outf << '\n';
  }
  if (!outf) throw InvalidDataError("write failed: " + path);
}

}  // namespace missreg

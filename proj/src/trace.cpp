#include "missreg/trace.hpp"

#include <json.hpp>

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <sstream>

namespace missreg {

void TraceDoc::validate() const {
  std::map<std::string, long> last_k;
  for (const TraceRow& r : rows) {
    if (r.algorithm.empty()) throw InvalidDataError("trace: empty algorithm label");
    if (r.k <= 0) throw InvalidDataError("trace: k must be positive");
    auto it = last_k.find(r.algorithm);
    if (it != last_k.end() && r.k <= it->second)
      throw InvalidDataError("trace: k not strictly increasing for '" + r.algorithm + "'");
    last_k[r.algorithm] = r.k;
    if (!std::isfinite(r.excess_at_avg) || !std::isfinite(r.excess_at_last))
      throw InvalidDataError("trace: non-finite excess risk at k=" + std::to_string(r.k));
  }
}

namespace {

std::string fmt(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

double parse_double(const std::string& s, const std::string& ctx) {
  double v = 0.0;
  const char* b = s.data();
  const auto [ptr, ec] = std::from_chars(b, b + s.size(), v);
  if (ec != std::errc() || ptr != b + s.size())
    throw InvalidDataError("trace: cannot parse number '" + s + "' in " + ctx);
  return v;
}

std::vector<std::string> split_csv(const std::string& line) {
  std::vector<std::string> out;
  std::string cur;
  for (char c : line) {
    if (c == ',') {
      out.push_back(cur);
      cur.clear();
    } else {
      cur.push_back(c);
    }
  }
  out.push_back(cur);
  return out;
}

}  // namespace

void write_trace(const std::string& path, const TraceDoc& doc) {
  doc.validate();
  std::ofstream out(path);
  if (!out) throw InvalidDataError("cannot open file for writing: " + path);
  for (const std::string& h : doc.header) out << "# " << h << '\n';
  out << "algorithm,k,excess_at_avg,excess_at_last,wall_ns\n";
  for (const TraceRow& r : doc.rows)
    out << r.algorithm << ',' << r.k << ',' << fmt(r.excess_at_avg) << ','
        << fmt(r.excess_at_last) << ',' << r.wall_ns << '\n';
  if (!out) throw InvalidDataError("write failed: " + path);
}

TraceDoc read_trace(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InvalidDataError("cannot open file: " + path);
  TraceDoc doc;
  std::string line;
  bool saw_columns = false;
  long lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    if (line[0] == '#') {
      std::string h = line.substr(1);
      if (!h.empty() && h[0] == ' ') h.erase(0, 1);
      doc.header.push_back(std::move(h));
      continue;
    }
    if (!saw_columns) {
      if (line != "algorithm,k,excess_at_avg,excess_at_last,wall_ns")
        throw InvalidDataError(path + ": unexpected column header");
      saw_columns = true;
      continue;
    }
    const auto cells = split_csv(line);
    if (cells.size() != 5)
      throw InvalidDataError(path + ": line " + std::to_string(lineno) + ": expected 5 cells");
    TraceRow r;
    r.algorithm = cells[0];
    r.k = static_cast<long>(parse_double(cells[1], path));
    r.excess_at_avg = parse_double(cells[2], path);
    r.excess_at_last = parse_double(cells[3], path);
    r.wall_ns = static_cast<std::int64_t>(parse_double(cells[4], path));
    doc.rows.push_back(std::move(r));
  }
  if (!saw_columns) throw InvalidDataError(path + ": missing column header");
  doc.validate();
  return doc;
}

double loglog_slope(std::span<const double> k, std::span<const double> v) {
  if (k.size() != v.size()) throw InvalidDataError("loglog_slope: length mismatch");
  std::vector<double> xs, ys;
  for (std::size_t i = 0; i < k.size(); ++i) {
    if (!(k[i] > 0.0)) throw InvalidDataError("loglog_slope: k must be positive");
    if (v[i] > 0.0) {
      xs.push_back(std::log(k[i]));
      ys.push_back(std::log(v[i]));
    }
  }
  const std::size_t n = xs.size();
  if (n < 2) throw InvalidDataError("loglog_slope: fewer than two positive points");
  double mx = 0.0, my = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    mx += xs[i];
    my += ys[i];
  }
  mx /= double(n);
  my /= double(n);
  double sxx = 0.0, sxy = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    sxx += (xs[i] - mx) * (xs[i] - mx);
    sxy += (xs[i] - mx) * (ys[i] - my);
  }
  if (!(sxx > 0.0)) throw InvalidDataError("loglog_slope: all k identical");
  return sxy / sxx;
}

namespace {

SummaryStats stats_of(std::vector<double> vals) {
  std::sort(vals.begin(), vals.end());
  const std::size_t n = vals.size();
  auto quantile = [&](double q) {
    const double pos = q * double(n - 1);
    const std::size_t lo = static_cast<std::size_t>(pos);
    const std::size_t hi = std::min(lo + 1, n - 1);
    const double w = pos - double(lo);
    return vals[lo] * (1.0 - w) + vals[hi] * w;
  };
  SummaryStats s;
  double sum = 0.0;
  for (double v : vals) sum += v;
  s.mean = sum / double(n);
  s.q25 = quantile(0.25);
  s.median = quantile(0.5);
  s.q75 = quantile(0.75);
  return s;
}

}  // namespace

std::vector<SummaryRow> summarize_traces(std::span<const TraceDoc> docs) {
  // keyed by (algorithm, k); preserves first-appearance order for output
  std::map<std::pair<std::string, long>, std::pair<std::vector<double>, std::vector<double>>>
      groups;
  std::vector<std::pair<std::string, long>> order;
  for (const TraceDoc& doc : docs)
    for (const TraceRow& r : doc.rows) {
      auto key = std::make_pair(r.algorithm, r.k);
      auto it = groups.find(key);
      if (it == groups.end()) {
        it = groups.emplace(key, std::make_pair(std::vector<double>{}, std::vector<double>{}))
                 .first;
        order.push_back(key);
      }
      it->second.first.push_back(r.excess_at_avg);
      it->second.second.push_back(r.excess_at_last);
    }
  std::vector<SummaryRow> out;
  out.reserve(order.size());
  for (const auto& key : order) {
    const auto& [avgs, lasts] = groups.at(key);
    SummaryRow row;
    row.algorithm = key.first;
    row.k = key.second;
    row.count = static_cast<long>(avgs.size());
    row.at_avg = stats_of(avgs);
    row.at_last = stats_of(lasts);
    out.push_back(std::move(row));
  }
  return out;
}

void write_summary(const std::string& path, std::span<const SummaryRow> rows) {
  std::ofstream out(path);
  if (!out) throw InvalidDataError("cannot open file for writing: " + path);
  for (const SummaryRow& r : rows) {
    nlohmann::json j;
    j["algorithm"] = r.algorithm;
    j["k"] = r.k;
    j["count"] = r.count;
    j["excess_at_avg"] = {{"mean", r.at_avg.mean},
                          {"q25", r.at_avg.q25},
                          {"median", r.at_avg.median},
                          {"q75", r.at_avg.q75}};
    j["excess_at_last"] = {{"mean", r.at_last.mean},
                           {"q25", r.at_last.q25},
                           {"median", r.at_last.median},
                           {"q75", r.at_last.q75}};
    out << j.dump() << '\n';
  }
  if (!out) throw InvalidDataError("write failed: " + path);
}

}  // namespace missreg

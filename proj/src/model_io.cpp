#include "missreg/model_io.hpp"

#include <json.hpp>

#include <fstream>
#include <sstream>

namespace missreg {

using nlohmann::json;

namespace {

json vec_to_json(const Vector& v) {
  json a = json::array();
  for (Index j = 0; j < v.size(); ++j) a.push_back(v[j]);
  return a;
}

Vector vec_from_json(const json& a, const char* field) {
  if (!a.is_array()) throw InvalidDataError(std::string("model: ") + field + " must be an array");
  Vector v(static_cast<Index>(a.size()));
  Index j = 0;
  for (const auto& e : a) {
    if (!e.is_number()) throw InvalidDataError(std::string("model: ") + field + " must be numeric");
    v[j++] = e.get<double>();
  }
  return v;
}

const json& need(const json& j, const char* key) {
  auto it = j.find(key);
  if (it == j.end()) throw InvalidDataError(std::string("model: missing field '") + key + "'");
  return *it;
}

}  // namespace

void ModelFile::validate() const {
  if (schema_version != 1)
    throw InvalidDataError("model: unsupported schema version " + std::to_string(schema_version));
  if (d_raw <= 0) throw InvalidDataError("model: d_raw must be positive");
  if (miss.dim() != d_raw) throw InvalidDataError("model: p length != d_raw");
  for (Index j = 0; j < d_raw; ++j)
    if (!(miss.p[j] > 0.0) || !(miss.p[j] <= 1.0))
      throw InvalidDataError("model: p entries must lie in (0,1]");
  if (poly) {
    poly->validate();
    if (poly->d_raw != d_raw) throw InvalidDataError("model: feature map d_raw mismatch");
  }
  const Index dm = d_model();
  if (beta_avg.size() != dm || beta.size() != dm)
    throw InvalidDataError("model: coefficient length != model dimension");
  if (!beta_avg.allFinite() || !beta.allFinite())
    throw InvalidDataError("model: non-finite coefficients");
  if (method != "avsgd" && method != "sgd_decay" && method != "sgd_const")
    throw InvalidDataError("model: unknown method '" + method + "'");
  if (method != "sgd_decay" && !(alpha > 0.0))
    throw InvalidDataError("model: alpha must be positive");
  if (!(lambda >= 0.0)) throw InvalidDataError("model: lambda must be >= 0");
  if (lipschitz && !(lipschitz->value > 0.0))
    throw InvalidDataError("model: Lipschitz value must be positive");
  scaling.validate(d_raw);
  if (static_cast<Index>(feature_names.size()) != d_raw)
    throw InvalidDataError("model: feature_names length != d_raw");
  if (target_name.empty()) throw InvalidDataError("model: empty target name");
}

std::string model_to_json(const ModelFile& m) {
  m.validate();
  json j;
  j["schema_version"] = m.schema_version;
  j["d_raw"] = m.d_raw;
  if (m.poly) {
    json feats = json::array();
    for (const auto& f : m.poly->features) feats.push_back({f.a, f.b});
    j["poly"] = json{{"features", feats}};
  } else {
    j["poly"] = nullptr;
  }
  j["missingness"] = {
      {"p", vec_to_json(m.miss.p)},
      {"provenance", m.miss.provenance == Provenance::Supplied ? "supplied" : "estimated"}};
  j["beta_avg"] = vec_to_json(m.beta_avg);
  j["beta"] = vec_to_json(m.beta);
  j["algorithm"] = {{"method", m.method}, {"alpha", m.alpha}};
  j["lambda"] = m.lambda;
  if (m.lipschitz) {
    j["lipschitz"] = {
        {"value", m.lipschitz->value},
        {"method", m.lipschitz->method == LipschitzMethod::Oracle ? "oracle" : "from_na"}};
  } else {
    j["lipschitz"] = nullptr;
  }
  j["seed"] = m.seed;
  j["scaling"] = {{"enabled", m.scaling.enabled},
                  {"mean", vec_to_json(m.scaling.mean)},
                  {"stddev", vec_to_json(m.scaling.stddev)},
                  {"y_mean", m.scaling.y_mean},
                  {"y_std", m.scaling.y_std}};
  j["feature_names"] = m.feature_names;
  j["target_name"] = m.target_name;
  return j.dump(2) + "\n";
}

ModelFile model_from_json(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    throw InvalidDataError(std::string("model: invalid JSON: ") + e.what());
  }
  ModelFile m;
  try {
    m.schema_version = need(j, "schema_version").get<int>();
    m.d_raw = need(j, "d_raw").get<Index>();
    const json& poly = need(j, "poly");
    if (!poly.is_null()) {
      FeatureMap fm;
      fm.d_raw = m.d_raw;
      for (const auto& f : need(poly, "features")) {
        if (!f.is_array() || f.size() != 2)
          throw InvalidDataError("model: each poly feature must be an [a,b] pair");
        fm.features.push_back(
            FeatureMap::Feature{f[0].get<Index>(), f[1].get<Index>()});
      }
      m.poly = std::move(fm);
    }
    const json& miss = need(j, "missingness");
    const std::string prov = need(miss, "provenance").get<std::string>();
    if (prov != "supplied" && prov != "estimated")
      throw InvalidDataError("model: unknown provenance '" + prov + "'");
    m.miss.p = vec_from_json(need(miss, "p"), "missingness.p");
    m.miss.provenance = prov == "supplied" ? Provenance::Supplied : Provenance::Estimated;
    m.beta_avg = vec_from_json(need(j, "beta_avg"), "beta_avg");
    m.beta = vec_from_json(need(j, "beta"), "beta");
    const json& algo = need(j, "algorithm");
    m.method = need(algo, "method").get<std::string>();
    m.alpha = need(algo, "alpha").get<double>();
    m.lambda = need(j, "lambda").get<double>();
    const json& lip = need(j, "lipschitz");
    if (!lip.is_null()) {
      LipschitzEstimate est;
      est.value = need(lip, "value").get<double>();
      const std::string lm = need(lip, "method").get<std::string>();
      if (lm != "oracle" && lm != "from_na")
        throw InvalidDataError("model: unknown Lipschitz method '" + lm + "'");
      est.method = lm == "oracle" ? LipschitzMethod::Oracle : LipschitzMethod::FromNA;
      m.lipschitz = est;
    }
    m.seed = need(j, "seed").get<std::uint64_t>();
    const json& sc = need(j, "scaling");
    m.scaling.enabled = need(sc, "enabled").get<bool>();
    m.scaling.mean = vec_from_json(need(sc, "mean"), "scaling.mean");
    m.scaling.stddev = vec_from_json(need(sc, "stddev"), "scaling.stddev");
    m.scaling.y_mean = need(sc, "y_mean").get<double>();
    m.scaling.y_std = need(sc, "y_std").get<double>();
    m.feature_names = need(j, "feature_names").get<std::vector<std::string>>();
    m.target_name = need(j, "target_name").get<std::string>();
  } catch (const json::exception& e) {
    throw InvalidDataError(std::string("model: malformed document: ") + e.what());
  }
  m.validate();
  return m;
}

void save_model(const std::string& path, const ModelFile& m) {
  std::ofstream out(path);
  if (!out) throw InvalidDataError("cannot open file for writing: " + path);
  out << model_to_json(m);
  if (!out) throw InvalidDataError("write failed: " + path);
}

ModelFile load_model(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InvalidDataError("cannot open file: " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return model_from_json(ss.str());
}

}  // namespace missreg

#include <doctest.h>

#include "missreg/model_io.hpp"

#include <json.hpp>

#include <cstdio>
#include <filesystem>
#include <limits>

using namespace missreg;

namespace {

ModelFile base_model() {
  ModelFile m;
  m.d_raw = 2;
  Vector p(2);
  p << 0.8, 1.0;
  m.miss = MissingnessModel::supplied(p);
  m.beta_avg = Vector(2);
  m.beta_avg << 0.5, -0.25;
  m.beta = Vector(2);
  m.beta << 0.625, -0.375;
  m.method = "avsgd";
  m.alpha = 0.0125;
  m.lambda = 0.0;
  m.seed = 7;
  m.scaling = ScalingParams::identity(2);
  m.feature_names = {"a", "b"};
  m.target_name = "y";
  return m;
}

ModelFile poly_model() {
  ModelFile m = base_model();
  m.poly = FeatureMap::degree2(2);
  m.beta_avg = Vector::Constant(5, 0.1);
  m.beta = Vector::Constant(5, 0.2);
  m.lambda = 0.5;
  m.lipschitz = LipschitzEstimate{123.5, LipschitzMethod::FromNA};
  m.scaling.enabled = true;
  m.scaling.mean << 1.0, 2.0;
  m.scaling.stddev << 0.5, 4.0;
  m.scaling.y_mean = -1.0;
  m.scaling.y_std = 3.0;
  m.miss.provenance = Provenance::Estimated;
  return m;
}

}  // namespace

TEST_CASE("serialization is canonical: serialize, parse, serialize is a fixpoint") {
  for (const ModelFile& m : {base_model(), poly_model()}) {
    const std::string text = model_to_json(m);
    const ModelFile parsed = model_from_json(text);
    CHECK(model_to_json(parsed) == text);
  }
}

TEST_CASE("round trip preserves every field") {
  const ModelFile m = poly_model();
  const ModelFile r = model_from_json(model_to_json(m));

  CHECK(r.schema_version == 1);
  CHECK(r.d_raw == 2);
  REQUIRE(r.poly.has_value());
  CHECK(r.poly->d_exp() == 5);
  CHECK(r.poly->features[2].a == 0);
  CHECK(r.poly->features[2].b == 1);
  CHECK(r.miss.provenance == Provenance::Estimated);
  CHECK((r.miss.p - m.miss.p).norm() == 0.0);
  CHECK((r.beta_avg - m.beta_avg).norm() == 0.0);
  CHECK((r.beta - m.beta).norm() == 0.0);
  CHECK(r.method == "avsgd");
  CHECK(r.alpha == m.alpha);
  CHECK(r.lambda == 0.5);
  REQUIRE(r.lipschitz.has_value());
  CHECK(r.lipschitz->value == 123.5);
  CHECK(r.lipschitz->method == LipschitzMethod::FromNA);
  CHECK(r.seed == 7);
  CHECK(r.scaling.enabled);
  CHECK(r.scaling.mean[1] == 2.0);
  CHECK(r.scaling.stddev[1] == 4.0);
  CHECK(r.scaling.y_mean == -1.0);
  CHECK(r.scaling.y_std == 3.0);
  CHECK(r.feature_names == m.feature_names);
  CHECK(r.target_name == "y");

  const ModelFile plain = model_from_json(model_to_json(base_model()));
  CHECK_FALSE(plain.poly.has_value());
  CHECK_FALSE(plain.lipschitz.has_value());
  CHECK(plain.d_model() == 2);
  CHECK(poly_model().d_model() == 5);
}

TEST_CASE("save_model and load_model work through the filesystem") {
  const std::string path =
      (std::filesystem::temp_directory_path() / "model_io_test.json").string();
  const ModelFile m = base_model();
  save_model(path, m);
  const ModelFile r = load_model(path);
  CHECK((r.beta_avg - m.beta_avg).norm() == 0.0);
  CHECK(r.target_name == m.target_name);
  std::remove(path.c_str());

  CHECK_THROWS_AS(load_model("/nonexistent/model.json"), InvalidDataError);
}

TEST_CASE("validate rejects inconsistent models") {
  ModelFile m = base_model();
  m.schema_version = 2;
  CHECK_THROWS_AS(m.validate(), InvalidDataError);

  m = base_model();
  m.beta = Vector::Zero(3);
  CHECK_THROWS_AS(m.validate(), InvalidDataError);

  m = base_model();
  m.beta[0] = std::numeric_limits<double>::quiet_NaN();
  CHECK_THROWS_AS(m.validate(), InvalidDataError);

  m = base_model();
  m.method = "newton";
  CHECK_THROWS_AS(m.validate(), InvalidDataError);

  m = base_model();
  m.alpha = 0.0;
  CHECK_THROWS_AS(m.validate(), InvalidDataError);
  m.method = "sgd_decay";  // decaying-step fits carry no constant alpha
  CHECK_NOTHROW(m.validate());

  m = base_model();
  m.lambda = -0.1;
  CHECK_THROWS_AS(m.validate(), InvalidDataError);

  m = base_model();
  m.miss.p[0] = 1.5;
  CHECK_THROWS_AS(m.validate(), InvalidDataError);

  m = base_model();
  m.feature_names = {"a"};
  CHECK_THROWS_AS(m.validate(), InvalidDataError);

  m = base_model();
  m.target_name.clear();
  CHECK_THROWS_AS(m.validate(), InvalidDataError);

  m = poly_model();
  m.poly->d_raw = 3;
  CHECK_THROWS_AS(m.validate(), InvalidDataError);

  m = poly_model();
  m.lipschitz->value = 0.0;
  CHECK_THROWS_AS(m.validate(), InvalidDataError);
}

TEST_CASE("parser surfaces malformed documents as data errors") {
  CHECK_THROWS_AS(model_from_json("not json at all"), InvalidDataError);
  CHECK_THROWS_AS(model_from_json("{}"), InvalidDataError);

  // field-level damage on an otherwise valid document
  const std::string good = model_to_json(base_model());

  auto corrupt = [&](const std::string& from, const std::string& to) {
    std::string text = good;
    const auto pos = text.find(from);
    REQUIRE(pos != std::string::npos);
    text.replace(pos, from.size(), to);
    return text;
  };

  CHECK_THROWS_AS(model_from_json(corrupt("\"avsgd\"", "\"magic\"")), InvalidDataError);
  CHECK_THROWS_AS(model_from_json(corrupt("\"supplied\"", "\"guessed\"")), InvalidDataError);
  CHECK_THROWS_AS(model_from_json(corrupt("\"beta\"", "\"beta_oops\"")), InvalidDataError);
  CHECK_THROWS_AS(model_from_json(corrupt("\"schema_version\": 1", "\"schema_version\": \"x\"")),
                  InvalidDataError);

  // a poly feature that is not an [a,b] pair
  nlohmann::json j = nlohmann::json::parse(model_to_json(poly_model()));
  j["poly"]["features"][0] = nlohmann::json::array({0});
  CHECK_THROWS_AS(model_from_json(j.dump()), InvalidDataError);
}

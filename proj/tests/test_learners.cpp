// Copyright 2026 The elastica-learn Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.


#include <filesystem>
#include <sstream>

#include <gtest/gtest.h>

#include "elastica/data_io.hpp"
#include "elastica/learners.hpp"
#include "elastica/predictor_io.hpp"
#include "elastica/synthetic.hpp"

namespace {

using namespace elastica;

SolverConfig lr_config(double lambda = 1e-3) {
  SolverConfig cfg = SolverConfig::make(Mode::lr, Method::direct);
  cfg.elastica.lambda = lambda;
  return cfg;
}

Dataset iris() {
  const Manifest m = load_manifest(std::filesystem::path(ELASTICA_DATA_DIR) / "multiclass.json");
  for (const auto& e : m.datasets) {
    if (e.name == "iris") return load_dataset(e.path, parse_format(e.format), true, e.dim);
  }
  throw std::runtime_error("iris missing from manifest");
}

double accuracy_on(const Predictor& p, const Dataset& ds) {
  const Vector labels = predict(p, ds.features);
  return static_cast<double>((labels.array() == ds.targets.array()).count()) /
         static_cast<double>(ds.size());
}

TEST(Train, BinaryCodesLargerLabelPositive) {
  Dataset ds = make_two_moons(120, 0.1, 1);
  ds.targets = ds.targets.unaryExpr([](double t) { return t > 0 ? 7.0 : 3.0; });
  ds.label_map = std::vector<double>{3.0, 7.0};
  const Predictor p = train(ds, 16.0, lr_config());
  EXPECT_EQ(p.kind, Task::binary);
  ASSERT_EQ(p.models.size(), 1u);
  EXPECT_EQ(p.class_labels, (std::vector<double>{3.0, 7.0}));
  EXPECT_GE(accuracy_on(p, ds), 0.95);
  const Vector x = ds.features.row(0).transpose();
  EXPECT_EQ(predict_label(p, x), predict_value(p, x) >= 0.0 ? 7.0 : 3.0);
}

TEST(Train, LabelValuesDoNotChangeWeights) {
  Dataset a = make_two_moons(80, 0.1, 2);
  a.label_map = std::vector<double>{-1.0, 1.0};
  Dataset b = a;
  b.targets = a.targets.unaryExpr([](double t) { return t > 0 ? 2.0 : 0.0; });
  b.label_map = std::vector<double>{0.0, 2.0};
  const Predictor pa = train(a, 8.0, lr_config());
  const Predictor pb = train(b, 8.0, lr_config());
  EXPECT_EQ(pa.models[0].weights(), pb.models[0].weights());
}

TEST(Train, TwoClassMulticlassRequestUsesBinaryPath) {
  Dataset ds = make_two_moons(60, 0.1, 3);
  ds.label_map = std::vector<double>{-1.0, 1.0};
  TrainOptions opts;
  opts.task = Task::multiclass;
  const Predictor p = train(ds, 8.0, lr_config(), opts);
  EXPECT_EQ(p.kind, Task::binary);
  EXPECT_EQ(p.models.size(), 1u);
  EXPECT_EQ(p.models[0].weights(), train(ds, 8.0, lr_config()).models[0].weights());
}

TEST(Train, IrisOneVsAll) {
  const Dataset ds = iris();
  const Predictor p = train(ds, 4.0, lr_config());
  EXPECT_EQ(p.kind, Task::multiclass);
  ASSERT_EQ(p.models.size(), 3u);
  EXPECT_EQ(p.class_labels.size(), 3u);
  // members share one basis
  EXPECT_EQ(p.models[0].basis_ptr(), p.models[2].basis_ptr());
  EXPECT_GE(accuracy_on(p, ds), 0.9);
  // member m is the binary fit of class m against the rest
  SolverConfig cfg = lr_config();
  const Matrix x = apply_scaling(fit_scaling(ds), ds.features);
  const auto basis = std::make_shared<const RbfBasis>(x, 4.0);
  for (std::size_t m = 0; m < 3; ++m) {
    const Vector y = detail::one_vs_rest(ds.targets, p.class_labels[m]);
    EXPECT_EQ(fit(x, y, basis, cfg).model.weights(), p.models[m].weights());
  }
}

TEST(Train, ArgmaxTiesGoToFirstMember) {
  EXPECT_EQ(argmax_first((Vector(3) << 1.0, 1.0, 0.5).finished()), 0u);
  EXPECT_EQ(argmax_first((Vector(3) << -1.0, 2.0, 2.0).finished()), 1u);
}

TEST(Train, ConstantRegressionTarget) {
  Dataset ds = make_two_moons(50, 0.1, 4);
  ds.targets = Vector::Constant(50, 0.4);
  ds.label_map.reset();
  SolverConfig cfg = lr_config(0.0);
  cfg.eta = 1e-6;
  const Predictor p = train(ds, 8.0, cfg);
  EXPECT_EQ(p.kind, Task::regression);
  EXPECT_TRUE(p.class_labels.empty());
  const Vector v = predict(p, ds.features);
  // ridge shrinkage keeps the fit slightly off the constant
  EXPECT_LT((v.array() - 0.4).abs().maxCoeff(), 1e-2);
  EXPECT_THROW(predict_label(p, ds.features.row(0).transpose()), Error);
}

TEST(Train, SingleClassIsRejected) {
  Dataset ds = make_two_moons(20, 0.1, 5);
  ds.targets.setOnes();
  ds.label_map = std::vector<double>{1.0};
  EXPECT_THROW(train(ds, 1.0, lr_config()), Error);
}

TEST(Train, ScalingAppliedAtPrediction) {
  Dataset ds = make_two_moons(80, 0.1, 6);
  ds.label_map = std::vector<double>{-1.0, 1.0};
  Dataset shifted = ds;
  shifted.features = (ds.features.array() * 10.0 + 3.0).matrix();
  const Predictor a = train(ds, 8.0, lr_config());
  const Predictor b = train(shifted, 8.0, lr_config());
  for (Eigen::Index i = 0; i < 10; ++i) {
    EXPECT_NEAR(predict_value(a, ds.features.row(i).transpose()),
                predict_value(b, shifted.features.row(i).transpose()), 1e-9);
  }
  EXPECT_THROW(predict_value(a, Vector::Zero(3)), Error);
}

TEST(PredictorIo, RoundTripIsExact) {
  const Dataset ds = iris();
  Predictor p = train(ds, 4.0, lr_config());
  p.metadata = {{"note", "x"}};
  std::stringstream buf;
  write_predictor(buf, p);
  const Predictor q = read_predictor(buf);
  EXPECT_EQ(q.kind, p.kind);
  EXPECT_EQ(q.class_labels, p.class_labels);
  EXPECT_EQ(q.scaling.min, p.scaling.min);
  EXPECT_EQ(q.scaling.max, p.scaling.max);
  EXPECT_EQ(q.width(), p.width());
  EXPECT_EQ(q.metadata, p.metadata);
  ASSERT_EQ(q.models.size(), p.models.size());
  for (std::size_t m = 0; m < p.models.size(); ++m) {
    EXPECT_EQ(q.models[m].weights(), p.models[m].weights());
    EXPECT_EQ(q.models[m].basis().centers(), p.models[m].basis().centers());
  }
  EXPECT_EQ(predict(q, ds.features), predict(p, ds.features));
}

TEST(PredictorIo, HeaderLayout) {
  Dataset ds = make_two_moons(10, 0.1, 7);
  ds.label_map = std::vector<double>{-1.0, 1.0};
  const Predictor p = train(ds, 2.0, lr_config());
  std::stringstream buf;
  write_predictor(buf, p);
  const std::string bytes = buf.str();
  EXPECT_EQ(bytes.substr(0, 8), "ELSTPRED");
  // fixed header, 2 x d scaling, 2 labels, n x d centers, n weights, metadata length
  EXPECT_EQ(bytes.size(), 56u + 8u * (2 * 2 + 2 + 10 * 2 + 10) + 8u + p.metadata.dump().size());
}

TEST(PredictorIo, RejectsBadMagicAndTruncation) {
  std::istringstream bad("NOTAMODEL and some more bytes");
  try {
    read_predictor(bad);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::format_error);
    EXPECT_EQ(std::string(e.what()), "unrecognized model file");
  }
  Dataset ds = make_two_moons(10, 0.1, 8);
  ds.label_map = std::vector<double>{-1.0, 1.0};
  std::stringstream buf;
  write_predictor(buf, train(ds, 2.0, lr_config()));
  const std::string bytes = buf.str();
  for (std::size_t cut : {9ul, 30ul, 100ul, bytes.size() - 1}) {
    std::istringstream truncated(bytes.substr(0, cut));
    try {
      read_predictor(truncated);
      ADD_FAILURE() << cut;
    } catch (const Error& e) {
      EXPECT_EQ(e.code(), ErrorCode::format_error) << cut;
    }
  }
  EXPECT_THROW(load_predictor("/nonexistent/model.elst"), Error);
}

}  // namespace

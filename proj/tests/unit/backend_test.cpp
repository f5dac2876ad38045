#include <random>
#include <sstream>
#include <thread>

#include <gtest/gtest.h>

#include "adaptta/errors.hpp"
#include "adaptta/latency.hpp"
#include "adaptta/policy.hpp"
#include "adaptta/toy_classifier.hpp"
#include "adaptta/trace.hpp"
#include "support/synthetic.hpp"

namespace adaptta {
namespace {

Image random_image(std::mt19937& gen, int side) {
  std::vector<std::uint8_t> data(static_cast<std::size_t>(side) * side * 3);
  for (auto& b : data) b = static_cast<std::uint8_t>(gen() & 0xff);
  return Image(side, side, std::move(data));
}

TEST(ProbVector, Invariants) {
  EXPECT_NO_THROW(ProbVector({0.25, 0.75}));
  EXPECT_NO_THROW(ProbVector({0.5, 0.5 + 5e-7}));
  EXPECT_THROW(ProbVector({1.0}), ProbabilityError);
  EXPECT_THROW(ProbVector({0.25, 0.25}), ProbabilityError);
  EXPECT_THROW(ProbVector({-0.1, 1.1}), ProbabilityError);
  EXPECT_THROW(ProbVector({std::nan(""), 1.0}), ProbabilityError);
}

TEST(ToyClassifier, ZeroImageIsUniform) {
  const ToyClassifier toy(42, 7, 224);
  const auto p = predict(toy, Image::filled(224, 224, 0, 0, 0));
  ASSERT_EQ(p.size(), 7u);
  for (std::size_t i = 0; i < p.size(); ++i) EXPECT_DOUBLE_EQ(p[i], 1.0 / 7.0);
}

TEST(ToyClassifier, DeterministicPerSeed) {
  std::mt19937 gen(1);
  const Image img = random_image(gen, 224);
  const ToyClassifier a(42, 10, 224), b(42, 10, 224);
  EXPECT_EQ(predict(a, img), predict(a, img));
  EXPECT_EQ(predict(a, img), predict(b, img));
}

TEST(ToyClassifier, SeedsDifferAsTheirLinearMapsDo) {
  std::mt19937 gen(2);
  const Image img = random_image(gen, 32);
  const ToyClassifier one(1, 5, 32), two(2, 5, 32);
  // Direct evaluation: softmax of each seed's logits.
  const auto expect_one = testing::normalized_softmax(one.logits(img));
  const auto expect_two = testing::normalized_softmax(two.logits(img));
  const auto got_one = predict(one, img), got_two = predict(two, img);
  for (std::size_t i = 0; i < 5; ++i) {
    EXPECT_NEAR(got_one[i], expect_one[i], 1e-15);
    EXPECT_NEAR(got_two[i], expect_two[i], 1e-15);
  }
  EXPECT_NE(got_one, got_two);
}

TEST(ToyClassifier, LogitsAreLinearInFeatures) {
  // No bias term: halving every feature halves every logit.
  const ToyClassifier toy(9, 4, 16);
  const auto full = toy.logits(Image::filled(16, 16, 200, 100, 40));
  const auto half = toy.logits(Image::filled(16, 16, 100, 50, 20));
  for (std::size_t i = 0; i < full.size(); ++i) EXPECT_NEAR(half[i], 0.5 * full[i], 1e-12);
}

TEST(ToyClassifier, RejectsBadInputs) {
  EXPECT_THROW(ToyClassifier(1, 1, 224), ConfigError);
  const ToyClassifier toy(1, 3, 224);
  EXPECT_THROW(predict(toy, Image::filled(100, 100, 0, 0, 0)), GeometryError);
  EXPECT_THROW(toy.predict(ViewRef{"x", 0, nullptr}), GeometryError);
}

TEST(PredictBatch, EqualsElementwisePredict) {
  std::mt19937 gen(3);
  const ToyClassifier toy(5, 10, 224);
  const Image source = random_image(gen, 256);
  std::vector<Image> views;
  const auto policy = make_policy("10C");
  for (const auto& v : policy.views()) views.push_back(crop(source, v));
  const auto batch = predict_batch(toy, views);
  ASSERT_EQ(batch.size(), 10u);
  for (std::size_t i = 0; i < views.size(); ++i) EXPECT_EQ(batch[i], predict(toy, views[i]));

  const std::vector<Image> one{views[0]};
  EXPECT_EQ(predict_batch(toy, one).front(), predict(toy, views[0]));
  const std::vector<Image> same(5, views[3]);
  const auto five = predict_batch(toy, same);
  for (const auto& p : five) EXPECT_EQ(p, five.front());
}

TEST(PredictBatch, FirstErrorAbortsBatch) {
  const ToyClassifier toy(5, 3, 8);
  const std::vector<Image> imgs{Image::filled(8, 8, 1, 1, 1), Image::filled(4, 4, 1, 1, 1)};
  EXPECT_THROW(predict_batch(toy, imgs), GeometryError);
}

TEST(ToyClassifier, ConcurrentPredictIsStable) {
  std::mt19937 gen(8);
  const ToyClassifier toy(77, 10, 64);
  const Image img = random_image(gen, 64);
  const auto expected = predict(toy, img);
  std::vector<std::thread> threads;
  std::vector<int> ok(8, 0);
  for (int t = 0; t < 8; ++t) {
    threads.emplace_back([&, t] {
      bool same = true;
      for (int i = 0; i < 50; ++i) same &= predict(toy, img) == expected;
      ok[t] = same;
    });
  }
  for (auto& th : threads) th.join();
  for (int v : ok) EXPECT_TRUE(v);
}

std::string two_sample_trace() {
  std::ostringstream s;
  s << R"({"classes": 3, "policy": "5C", "num_views": 5})" << "\n";
  for (const char* id : {"img7", "img8"}) {
    for (int v = 0; v < 5; ++v) {
      s << R"({"sample": ")" << id << R"(", "view": )" << v << R"(, "label": 1, "probs": [0.1, 0.)" << (v + 2)
        << ", " << (0.9 - 0.1 * (v + 2)) << "]}\n";
    }
  }
  return s.str();
}

TEST(Trace, LoadsAndAnswersLookups) {
  std::istringstream in(two_sample_trace());
  const TraceBackend trace = parse_trace(in);
  EXPECT_EQ(trace.samples().size(), 2u);
  EXPECT_EQ(trace.num_views(), 5u);
  EXPECT_EQ(trace.num_classes(), 3u);
  EXPECT_EQ(trace.samples()[0].id, "img7");
  EXPECT_EQ(trace.samples()[1].label, 1);
  const auto p = trace.predict(ViewRef{"img7", 2, nullptr});
  EXPECT_DOUBLE_EQ(p[1], 0.4);
  EXPECT_FALSE(trace.consumes_pixels());
}

TEST(Trace, ErrorsOutsideTheGrid) {
  std::istringstream in(two_sample_trace());
  const TraceBackend trace = parse_trace(in);
  try {
    trace.predict(ViewRef{"img9", 0, nullptr});
    FAIL();
  } catch (const TraceError& e) {
    EXPECT_EQ(e.code(), TraceErrc::kUnknownView);
  }
  EXPECT_THROW(trace.predict(ViewRef{"img7", 5, nullptr}), TraceError);
}

TraceErrc load_error(const std::string& text) {
  std::istringstream in(text);
  try {
    parse_trace(in);
  } catch (const TraceError& e) {
    return e.code();
  }
  ADD_FAILURE() << "trace loaded unexpectedly";
  return TraceErrc::kSchema;
}

TEST(Trace, LoaderErrors) {
  const std::string header = R"({"classes": 2, "policy": "5C", "num_views": 5})" "\n";
  auto row = [](int v, const std::string& probs) {
    return R"({"sample": "a", "view": )" + std::to_string(v) + R"(, "label": 0, "probs": )" + probs + "}\n";
  };
  std::string full;
  for (int v = 0; v < 5; ++v) full += row(v, "[0.5, 0.5]");

  EXPECT_EQ(load_error(header + row(0, "[0.25, 0.25]")), TraceErrc::kInvalidProbabilities);
  std::string missing;
  for (int v : {0, 1, 2, 4}) missing += row(v, "[0.5, 0.5]");
  EXPECT_EQ(load_error(header + missing), TraceErrc::kIncompleteCoverage);
  EXPECT_EQ(load_error(header + full + row(2, "[0.5, 0.5]")), TraceErrc::kDuplicateView);
  EXPECT_EQ(load_error(header + row(0, "[0.2, 0.3, 0.5]")), TraceErrc::kInconsistentClasses);
  EXPECT_EQ(load_error(header + "not json\n"), TraceErrc::kSchema);
  EXPECT_EQ(load_error(R"({"classes": 2, "policy": "5C", "num_views": 4})" "\n"), TraceErrc::kSchema);
  EXPECT_EQ(load_error(header + R"({"sample": "a", "view": 0, "probs": [0.5, 0.5]})" "\n"), TraceErrc::kSchema);
  EXPECT_EQ(load_error(header + row(7, "[0.5, 0.5]")), TraceErrc::kSchema);
  EXPECT_EQ(load_error(""), TraceErrc::kSchema);
}

TEST(Trace, WriteThenLoadIsExact) {
  std::mt19937_64 gen(21);
  const auto records = testing::random_records(gen, 6, 10, 10);
  const TraceHeader header{10, "10C", 10};
  std::stringstream buf;
  write_trace(buf, header, records);
  const TraceBackend trace = parse_trace(buf);
  for (const auto& r : records) EXPECT_EQ(trace.row(r.sample_id, r.view_index), r.probs);
}

TEST(Trace, MissingFileIsDataError) {
  EXPECT_THROW(load_trace("/nonexistent/trace.jsonl"), DataError);
}

TEST(LatencyModel, DefaultsFollowBatchShape) {
  const LatencyModel m(53.1);
  EXPECT_DOUBLE_EQ(m.batch_ms(1), 53.1);
  EXPECT_DOUBLE_EQ(m.batch_ms(5), 5.5 * 53.1);
  EXPECT_DOUBLE_EQ(m.batch_ms(10), 11.2 * 53.1);
  EXPECT_DOUBLE_EQ(m.per_crop_ms(), 0.8);
  EXPECT_DOUBLE_EQ(m.per_flip_ms(), 0.9);
}

TEST(LatencyModel, MeasuredCurveAndInterpolation) {
  const auto m = LatencyModel::mobilenet_v1();
  EXPECT_DOUBLE_EQ(m.batch_ms(5), 290.6);
  EXPECT_DOUBLE_EQ(m.batch_ms(10), 569.9);
  EXPECT_DOUBLE_EQ(m.batch_ms(3), 53.1 + 0.5 * (290.6 - 53.1));
  EXPECT_NEAR(m.batch_ms(12), 569.9 + 2 * (569.9 - 290.6) / 5, 1e-9);
  const LatencyModel single(10.0, 0, 0, {});
  EXPECT_DOUBLE_EQ(single.batch_ms(4), 40.0);
}

TEST(LatencyModel, Validation) {
  EXPECT_THROW(LatencyModel(-1.0), ConfigError);
  EXPECT_THROW(LatencyModel(0.0), ConfigError);
  EXPECT_THROW(LatencyModel(10.0, -0.1, 0.0), ConfigError);
  EXPECT_THROW(LatencyModel(10.0, 0, 0, {{1, 11.0}}), ConfigError);
  EXPECT_THROW(LatencyModel(10.0, 0, 0, {{0, 1.0}}), ConfigError);
}

}  // namespace
}  // namespace adaptta

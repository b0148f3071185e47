#include <gtest/gtest.h>

#include <sstream>

#include "test_support.hpp"

using namespace malvis;

namespace {

DatasetManifest make(const std::vector<std::pair<std::string, std::size_t>>& classes) {
  DatasetManifest m;
  for (const auto& [label, n] : classes)
    for (std::size_t i = 0; i < n; ++i) {
      const std::string id = label + "-" + std::to_string(i);
      m.entries.push_back({id, label + "/" + id + ".png", label, std::nullopt});
    }
  return m;
}

std::map<std::string, SplitCounts> tally(const DatasetManifest& m) {
  std::map<std::string, SplitCounts> out;
  for (const auto& e : m.entries) {
    auto& c = out[e.class_label];
    switch (e.split.value()) {
      case Split::train: ++c.train; break;
      case Split::val: ++c.val; break;
      case Split::test: ++c.test; break;
    }
  }
  return out;
}

const WarningSink quiet = [](const std::string&) {};

}  // namespace

TEST(Manifest, JsonLinesRoundTrip) {
  auto m = make({{"a", 2}, {"b b", 1}});
  m.entries[0].split = Split::test;
  std::stringstream ss;
  write_manifest(m, ss);
  EXPECT_EQ(ss.str().substr(0, ss.str().find('\n')),
            R"({"id":"a-0","path":"a/a-0.png","classLabel":"a","split":"test"})");
  EXPECT_EQ(parse_manifest(ss), m);
}

TEST(Manifest, Validation) {
  std::stringstream dup(R"({"id":"x","path":"p","classLabel":"c"}
{"id":"x","path":"q","classLabel":"c"}
)");
  EXPECT_THROW(parse_manifest(dup), Error);
  std::stringstream empty_label(R"({"id":"x","path":"p","classLabel":""})");
  EXPECT_THROW(parse_manifest(empty_label), Error);
  std::stringstream bad_split(R"({"id":"x","path":"p","classLabel":"c","split":"holdout"})");
  EXPECT_THROW(parse_manifest(bad_split), Error);
  std::stringstream garbage("{not json");
  EXPECT_THROW(parse_manifest(garbage), Error);
}

TEST(Split, SeventyThirtyWithValidation) {
  const auto out = split_manifest(make({{"one", 100}}), 0.7, 0.1, 42, quiet);
  const auto c = tally(out).at("one");
  EXPECT_EQ(c.train, 63u);
  EXPECT_EQ(c.val, 7u);
  EXPECT_EQ(c.test, 30u);
}

TEST(Split, TwoBalancedClasses) {
  const auto counts = tally(split_manifest(make({{"a", 50}, {"b", 50}}), 0.7, 0.1, 42, quiet));
  for (const auto& label : {"a", "b"}) {
    EXPECT_EQ(counts.at(label).test, 15u);
    EXPECT_EQ(counts.at(label).val, 4u);
    EXPECT_EQ(counts.at(label).train, 31u);
  }
}

TEST(Split, Deterministic) {
  const auto m = make({{"a", 37}, {"b", 12}, {"c", 5}});
  EXPECT_EQ(split_manifest(m, 0.7, 0.1, 7, quiet), split_manifest(m, 0.7, 0.1, 7, quiet));
  EXPECT_NE(split_manifest(m, 0.7, 0.1, 7, quiet), split_manifest(m, 0.7, 0.1, 8, quiet));
}

TEST(Split, PreservesOrderAndPartitions) {
  const auto m = make({{"a", 23}, {"b", 42}, {"c", 3}});
  const auto out = split_manifest(m, 0.7, 0.1, 1, quiet);
  ASSERT_EQ(out.entries.size(), m.entries.size());
  for (std::size_t i = 0; i < m.entries.size(); ++i) {
    EXPECT_EQ(out.entries[i].id, m.entries[i].id);
    EXPECT_TRUE(out.entries[i].split.has_value());
  }
  for (const auto& [label, c] : tally(out)) {
    const double n = static_cast<double>(c.train + c.val + c.test);
    EXPECT_LE(std::fabs(static_cast<double>(c.test) / n - 0.3), 1.0 / n) << label;
  }
}

TEST(Split, TinyClassGoesToTrainWithWarning) {
  std::vector<std::string> warnings;
  const auto out =
      split_manifest(make({{"rare", 1}, {"common", 10}}), 0.7, 0.1, 42, [&](const std::string& w) { warnings.push_back(w); });
  ASSERT_EQ(warnings.size(), 1u);
  EXPECT_NE(warnings[0].find("rare"), std::string::npos);
  EXPECT_EQ(tally(out).at("rare").train, 1u);
}

TEST(Split, FractionPreconditions) {
  const auto m = make({{"a", 10}});
  EXPECT_THROW(split_manifest(m, 0.0, 0.1, 1, quiet), UsageError);
  EXPECT_THROW(split_manifest(m, 1.0, 0.1, 1, quiet), UsageError);
  EXPECT_THROW(split_manifest(m, 0.7, 1.0, 1, quiet), UsageError);
}

TEST(Split, CountsRule) {
  const auto c = split_counts(100, 0.7, 0.1);
  EXPECT_EQ(c.train, 63u);
  EXPECT_EQ(c.val, 7u);
  EXPECT_EQ(c.test, 30u);
  for (std::size_t n = 2; n < 300; ++n) {
    const auto s = split_counts(n, 0.7, 0.1);
    EXPECT_EQ(s.train + s.val + s.test, n);
  }
}

TEST(LabelsCsv, ParsesQuotedFields) {
  std::stringstream ss("id,label\na,x\n\"b,1\",\"y \"\"z\"\"\"\n");
  const auto rows = parse_labels_csv(ss);
  ASSERT_EQ(rows.size(), 2u);
  EXPECT_EQ(rows[1].id, "b,1");
  EXPECT_EQ(rows[1].label, "y \"z\"");
  std::stringstream bad("name,label\na,b\n");
  EXPECT_THROW(parse_labels_csv(bad), Error);
}

TEST(TensorIndex, RoundTrip) {
  std::vector<TensorIndexEntry> entries{{"s2", "f2.npy", "g2.npy", "fam", 1}, {"s1", "f1.npy", "g1.npy", "", {}}};
  std::stringstream ss(tensor_index_json(entries));
  const auto back = parse_tensor_index(ss);
  ASSERT_EQ(back.size(), 2u);
  EXPECT_EQ(back[0].id, "s2");
  EXPECT_EQ(back[0].target_class, 1);
  EXPECT_EQ(back[1].class_label, "");
  EXPECT_FALSE(back[1].target_class.has_value());
}

#include <cmath>
#include <cstdio>
#include <sstream>
#include <string>

#include "doctest.h"
#include "vof/data/csv.hpp"
#include "vof/data/dataset.hpp"
#include "vof/data/synth.hpp"

using namespace vof;
using namespace vof::data;

namespace {

// Hand-built hourly set with controllable wind/load and features that encode
// the record index, so nearest-neighbor outcomes are easy to predict.
SampleSet toy_set(std::size_t hours, double wind_cap = 40.0) {
  SampleSet set;
  set.wind_cap = wind_cap;
  for (std::size_t i = 0; i < hours; ++i) {
    Record r;
    r.timestamp = 1700000000 + static_cast<std::int64_t>(i) * 3600;
    r.ws10 = static_cast<double>(i);
    r.wd10 = 180.0;
    r.ws100 = static_cast<double>(i) * 1.5;
    r.wd100 = 90.0;
    r.wind_kw = 5.0 + static_cast<double>(i % 7);
    r.load_kw = 50.0 + static_cast<double>(i % 5);
    set.records.push_back(r);
  }
  return set;
}

}  // namespace

TEST_CASE("day grouping accepts whole days and rejects ragged sets") {
  SampleSet set = toy_set(48);
  CHECK(set.days(24) == 2);
  CHECK(set.days(1) == 48);
  CHECK_THROWS_AS(set.days(7), GridMismatch);
  CHECK_THROWS_AS(set.days(0), GridMismatch);
}

TEST_CASE("validation enforces the power range, positive load, and hourly grid") {
  SampleSet good = toy_set(10);
  CHECK_NOTHROW(validate(good));

  SampleSet high = toy_set(10);
  high.records[3].wind_kw = 41.0;
  CHECK_THROWS_AS(validate(high), ParseError);

  SampleSet negative = toy_set(10);
  negative.records[0].wind_kw = -0.1;
  CHECK_THROWS_AS(validate(negative), ParseError);

  SampleSet flat = toy_set(10);
  flat.records[5].load_kw = 0.0;
  CHECK_THROWS_AS(validate(flat), ParseError);

  SampleSet gap = toy_set(10);
  gap.records[7].timestamp += 3600;
  CHECK_THROWS_AS(validate(gap), TimestampOrder);
}

TEST_CASE("scaler fitting matches hand-computed moments and floors the spread") {
  SampleSet set = toy_set(4);
  set.records[0].ws10 = 1.0;
  set.records[1].ws10 = 3.0;
  set.records[2].ws10 = 5.0;
  set.records[3].ws10 = 7.0;
  FeatureScaler s = fit_scaler(set);
  CHECK(s.mean[0] == doctest::Approx(4.0));
  CHECK(s.sd[0] == doctest::Approx(std::sqrt(5.0)));
  // wd10 is constant 180, so its sd hits the floor instead of zero.
  CHECK(s.mean[1] == doctest::Approx(180.0));
  CHECK(s.sd[1] == doctest::Approx(1e-8));
  CHECK(s.apply(0, 4.0) == doctest::Approx(0.0));
  CHECK(s.apply(0, 4.0 + std::sqrt(5.0)) == doctest::Approx(1.0));

  SampleSet empty;
  CHECK_THROWS_AS(fit_scaler(empty), EmptyTrainSet);
}

TEST_CASE("split cuts chronologically on day boundaries and shares the scaler") {
  SampleSet set = toy_set(5 * 24);
  auto [train, test] = split(set, 0.8, 24);
  CHECK(train.size() == 4 * 24);
  CHECK(test.size() == 24);
  CHECK(train.records.front() == set.records.front());
  CHECK(test.records.back() == set.records.back());
  CHECK(train.records.back().timestamp + 3600 ==
        test.records.front().timestamp);
  CHECK_FALSE(train.scaler.empty());
  CHECK(train.scaler == test.scaler);
  // The constants really come from the training part alone.
  CHECK(train.scaler == fit_scaler(train));

  auto [a, b] = split(toy_set(2), 0.5, 1);
  CHECK(a.size() == 1);
  CHECK(b.size() == 1);

  CHECK_THROWS_AS(split(set, 1.0, 24), TooSmall);
  CHECK_THROWS_AS(split(set, 0.0, 24), TooSmall);
  CHECK_THROWS_AS(split(set, -0.2, 24), TooSmall);
  CHECK_THROWS_AS(split(toy_set(24), 0.5, 24), TooSmall);
  CHECK_THROWS_AS(split(set, 0.1, 24), TooSmall);  // floor gives zero days
}

TEST_CASE("wind scaling touches only realized power and the capacity") {
  SampleSet set = toy_set(6);
  const SampleSet before = set;
  scale_wind(set, 0.5);
  CHECK(set.wind_cap == doctest::Approx(20.0));
  CHECK(set.wind_multiplier == doctest::Approx(0.5));
  for (std::size_t i = 0; i < set.size(); ++i) {
    CHECK(set.records[i].wind_kw ==
          doctest::Approx(0.5 * before.records[i].wind_kw));
    CHECK(set.records[i].load_kw == before.records[i].load_kw);
    CHECK(set.records[i].ws100 == before.records[i].ws100);
  }
  scale_wind(set, 2.0);
  CHECK(set.wind_multiplier == doctest::Approx(1.0));
  CHECK_THROWS_AS(scale_wind(set, 0.0), TooSmall);
  CHECK_THROWS_AS(scale_wind(set, -1.0), TooSmall);
}

TEST_CASE("nearest-neighbor scenarios draw from the k closest hours") {
  SampleSet train = toy_set(20);
  Rng rng(5);

  // Query sitting exactly on record 7: with k = 1 every draw is its power.
  const auto q = train.records[7].features();
  std::vector<double> draws = knn_scenarios(train, q, 1, 50, rng);
  for (double d : draws) CHECK(d == doctest::Approx(train.records[7].wind_kw));

  // With k = 3 the draws only ever come from records 6, 7, 8 (features are
  // monotone in the index, so those are the closest three).
  draws = knn_scenarios(train, q, 3, 200, rng);
  bool saw_other = false;
  for (double d : draws) {
    const bool expected = d == doctest::Approx(train.records[6].wind_kw) ||
                          d == doctest::Approx(train.records[7].wind_kw) ||
                          d == doctest::Approx(train.records[8].wind_kw);
    if (!expected) saw_other = true;
  }
  CHECK_FALSE(saw_other);

  // Same seed, same draws.
  Rng r1(9), r2(9);
  CHECK(knn_scenarios(train, q, 5, 40, r1) == knn_scenarios(train, q, 5, 40, r2));

  SampleSet empty;
  Rng r3(1);
  CHECK_THROWS_AS(knn_scenarios(empty, q, 1, 5, r3), EmptyTrainSet);
  CHECK_THROWS_AS(knn_scenarios(train, q, 0, 5, r3), TooSmall);
  CHECK_THROWS_AS(knn_scenarios(train, q, 21, 5, r3), TooSmall);
}

TEST_CASE("nearest-neighbor ties resolve to the earliest record") {
  SampleSet train = toy_set(4);
  // Records 1 and 2 get identical features but different powers.
  train.records[2].ws10 = train.records[1].ws10;
  train.records[2].ws100 = train.records[1].ws100;
  train.records[1].wind_kw = 11.0;
  train.records[2].wind_kw = 22.0;
  Rng rng(3);
  const auto q = train.records[1].features();
  for (double d : knn_scenarios(train, q, 1, 30, rng)) {
    CHECK(d == doctest::Approx(11.0));
  }
}

TEST_CASE("csv writing then loading reproduces the records exactly") {
  SampleSet set = synth_generate(42, 3);
  std::stringstream buf;
  write_csv(set, buf);
  SampleSet back = load_csv(buf, set.wind_cap);
  CHECK(back.records == set.records);
  CHECK(back.wind_cap == set.wind_cap);
}

TEST_CASE("csv loader reports schema and field problems with line numbers") {
  const std::string header = "timestamp,ws10,wd10,ws100,wd100,wind_kw,load_kw";

  std::stringstream wrong_header("time,ws10\n");
  CHECK_THROWS_AS(load_csv(wrong_header, 40.0), SchemaMismatch);

  std::stringstream empty("");
  CHECK_THROWS_AS(load_csv(empty, 40.0), SchemaMismatch);

  std::stringstream short_row(header +
                              "\n2024-01-01T00:00:00Z,1,2,3,4,5\n");
  CHECK_THROWS_WITH_AS(load_csv(short_row, 40.0),
                       doctest::Contains("line 2"), ParseError);

  std::stringstream bad_stamp(header + "\n2024-13-01T00:00:00Z,1,2,3,4,5,50\n");
  CHECK_THROWS_AS(load_csv(bad_stamp, 40.0), ParseError);

  std::stringstream bad_number(header +
                               "\n2024-01-01T00:00:00Z,1,2,x,4,5,50\n");
  CHECK_THROWS_WITH_AS(load_csv(bad_number, 40.0),
                       doctest::Contains("ws100"), ParseError);

  std::stringstream out_of_range(header +
                                 "\n2024-01-01T00:00:00Z,1,2,3,4,41,50\n");
  CHECK_THROWS_AS(load_csv(out_of_range, 40.0), ParseError);

  std::stringstream bad_load(header +
                             "\n2024-01-01T00:00:00Z,1,2,3,4,5,0\n");
  CHECK_THROWS_AS(load_csv(bad_load, 40.0), ParseError);

  std::stringstream gap(header +
                        "\n2024-01-01T00:00:00Z,1,2,3,4,5,50"
                        "\n2024-01-01T02:00:00Z,1,2,3,4,5,50\n");
  CHECK_THROWS_AS(load_csv(gap, 40.0), TimestampOrder);

  // Windows line endings parse the same as plain newlines.
  std::stringstream crlf(header +
                         "\r\n2024-01-01T00:00:00Z,1,2,3,4,5,50\r\n");
  CHECK(load_csv(crlf, 40.0).size() == 1);
}

TEST_CASE("csv file round trip works through the filesystem") {
  SampleSet set = synth_generate(7, 2);
  const std::string path = "/tmp/vof_test_roundtrip.csv";
  write_csv_file(set, path);
  SampleSet back = load_csv_file(path, set.wind_cap);
  CHECK(back.records == set.records);
  std::remove(path.c_str());
  CHECK_THROWS_AS(load_csv_file("/tmp/vof_missing_file.csv", 40.0), ParseError);
}

TEST_CASE("synthetic history is reproducible and within its design envelope") {
  SampleSet a = synth_generate(123, 365);
  SampleSet b = synth_generate(123, 365);
  CHECK(a.records == b.records);
  CHECK(a.size() == 8760);
  CHECK(a.records.front().timestamp == 19723LL * 86400LL);  // 2024-01-01

  SampleSet other = synth_generate(124, 365);
  CHECK(other.records != a.records);

  double load_min = 1e300, load_max = -1e300, load_sum = 0.0;
  for (const Record& r : a.records) {
    load_min = std::min(load_min, r.load_kw);
    load_max = std::max(load_max, r.load_kw);
    load_sum += r.load_kw;
    CHECK(r.wind_kw >= 0.0);
    CHECK(r.wind_kw <= a.wind_cap);
  }
  const double load_mean = load_sum / static_cast<double>(a.size());
  // Design targets 50 / 56 / 70 kW, each within 2%.
  CHECK(load_min > 49.0);
  CHECK(load_min < 51.0);
  CHECK(load_max > 68.6);
  CHECK(load_max < 71.4);
  CHECK(load_mean > 54.88);
  CHECK(load_mean < 57.12);
}

TEST_CASE("synthetic weather features carry real signal about wind power") {
  SampleSet set = synth_generate(9, 120);
  double sx = 0, sy = 0, sxx = 0, syy = 0, sxy = 0;
  const double n = static_cast<double>(set.size());
  for (const Record& r : set.records) {
    sx += r.ws100;
    sy += r.wind_kw;
    sxx += r.ws100 * r.ws100;
    syy += r.wind_kw * r.wind_kw;
    sxy += r.ws100 * r.wind_kw;
  }
  const double cov = sxy / n - (sx / n) * (sy / n);
  const double vx = sxx / n - (sx / n) * (sx / n);
  const double vy = syy / n - (sy / n) * (sy / n);
  const double corr = cov / std::sqrt(vx * vy);
  CHECK(corr > 0.6);
  // But the features never pin the power down exactly; forecasting stays a
  // statistical problem rather than a lookup.
  CHECK(corr < 0.999);
  CHECK_THROWS_AS(synth_generate(1, 0), TooSmall);
}

#include <doctest.h>

#include <map>
#include <random>
#include <sstream>

#include "deixis/eval.hpp"

using namespace deixis;

namespace {

PointingEvent stable_event(double t, std::optional<int> cell) {
  PointingEvent ev;
  ev.t = t;
  ev.cell = cell;
  ev.stable = true;
  return ev;
}

}  // namespace

TEST_CASE("match_trials") {
  SUBCASE("one stable event inside the interval") {
    const auto records = match_trials({stable_event(3.0, 3)}, {{3, 2.5, 4.5}});
    REQUIRE(records.size() == 1);
    CHECK(records[0].intended_cell == 3);
    CHECK(records[0].detection == Detection::Cell);
    CHECK(records[0].detected_cell == 3);
    CHECK(records[0].correct());
  }

  SUBCASE("no stable event gives none") {
    const auto records = match_trials({}, {{2, 0.0, 1.0}});
    REQUIRE(records.size() == 1);
    CHECK(records[0].detection == Detection::None);
    CHECK_FALSE(records[0].correct());
  }

  SUBCASE("the last stable event wins") {
    const auto records = match_trials(
        {stable_event(0.2, 2), stable_event(0.8, 3)}, {{3, 0.0, 1.0}});
    REQUIRE(records.size() == 1);
    CHECK(records[0].detected_cell == 3);
  }

  SUBCASE("monitoring events are ignored") {
    PointingEvent mon;
    mon.t = 0.5;
    mon.cell = 4;
    mon.stable = false;
    const auto records = match_trials({mon}, {{4, 0.0, 1.0}});
    CHECK(records[0].detection == Detection::None);
  }

  SUBCASE("out-of-board stable events are distinguished from none") {
    const auto records =
        match_trials({stable_event(0.5, std::nullopt)}, {{4, 0.0, 1.0}});
    CHECK(records[0].detection == Detection::OutOfBoard);
    CHECK_FALSE(records[0].correct());
  }

  SUBCASE("overlapping truth intervals are rejected") {
    CHECK_THROWS_AS(match_trials({}, {{1, 0.0, 2.0}, {2, 1.5, 3.0}}),
                    OverlappingIntervals);
  }
}

TEST_CASE("accuracy") {
  SUBCASE("five correct of eight is 62.50") {
    std::vector<TrialRecord> records;
    for (int i = 0; i < 5; ++i) records.push_back({1, Detection::Cell, 1});
    records.push_back({1, Detection::Cell, 2});
    records.push_back({2, Detection::None, 0});
    records.push_back({3, Detection::OutOfBoard, 0});
    CHECK(accuracy(records) == doctest::Approx(62.50).epsilon(1e-12));
  }

  SUBCASE("all correct is 100.0") {
    std::vector<TrialRecord> records(12, TrialRecord{5, Detection::Cell, 5});
    CHECK(accuracy(records) == 100.0);
  }

  SUBCASE("empty input throws") {
    CHECK_THROWS_AS(accuracy({}), EmptyInput);
  }

  SUBCASE("study-scale percentages render with two decimals") {
    std::vector<TrialRecord> records;
    for (int i = 0; i < 10000; ++i)
      records.push_back({1, Detection::Cell, i < 8959 ? 1 : 2});
    const auto rep = render_report(build_confusion(records, 2), records);
    CHECK(rep.accuracy_pct == doctest::Approx(89.59));
    CHECK(rep.text.find("89.59") != std::string::npos);
  }
}

TEST_CASE("confusion matrix") {
  std::mt19937 rng(9);
  std::uniform_int_distribution<int> cell(1, 6);
  std::uniform_int_distribution<int> kind(0, 9);

  std::vector<TrialRecord> records;
  for (int i = 0; i < 600; ++i) {
    TrialRecord r;
    r.intended_cell = cell(rng);
    const int k = kind(rng);
    if (k < 7) {
      r.detection = Detection::Cell;
      r.detected_cell = kind(rng) < 8 ? r.intended_cell : cell(rng);
    } else if (k < 9) {
      r.detection = Detection::OutOfBoard;
    } else {
      r.detection = Detection::None;
    }
    records.push_back(r);
  }

  const ConfusionMatrix m = build_confusion(records, 6);

  SUBCASE("row sums equal the trials per intended cell") {
    std::vector<long> expected(7, 0);
    for (const TrialRecord& r : records) ++expected[r.intended_cell];
    for (int row = 1; row <= 6; ++row)
      CHECK(m.row_total(row) == expected[row]);
  }

  SUBCASE("row percentages sum to 100") {
    const Report rep = render_report(m, records);
    // recompute from the csv
    std::istringstream csv(rep.csv);
    std::string line;
    std::getline(csv, line);  // header
    std::map<int, double> row_sum;
    while (std::getline(csv, line)) {
      const size_t c1 = line.find(',');
      const size_t c3 = line.rfind(',');
      row_sum[std::stoi(line.substr(0, c1))] +=
          std::stod(line.substr(c3 + 1));
    }
    for (const auto& [row, sum] : row_sum)
      CHECK(sum == doctest::Approx(100.0).epsilon(1e-4));
  }

  SUBCASE("accuracy equals the count-weighted diagonal of the matrix") {
    long diagonal = 0, total = 0;
    for (int row = 1; row <= 6; ++row) {
      diagonal += m.at(row, row - 1);
      total += m.row_total(row);
    }
    CHECK(accuracy(records) ==
          doctest::Approx(100.0 * diagonal / total).epsilon(1e-12));
  }

  SUBCASE("rendering is deterministic") {
    const Report a = render_report(m, records);
    const Report b = render_report(m, records);
    CHECK(a.text == b.text);
    CHECK(a.csv == b.csv);
  }

  SUBCASE("identity records give 100 on the diagonal") {
    std::vector<TrialRecord> diag;
    for (int c = 1; c <= 6; ++c)
      for (int i = 0; i < 10; ++i) diag.push_back({c, Detection::Cell, c});
    const ConfusionMatrix dm = build_confusion(diag, 6);
    const Report rep = render_report(dm, diag);
    CHECK(rep.accuracy_pct == 100.0);
    for (int row = 1; row <= 6; ++row) {
      CHECK(dm.at(row, row - 1) == 10);
      CHECK(dm.row_total(row) == 10);
    }
  }
}

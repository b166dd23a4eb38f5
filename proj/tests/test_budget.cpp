#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <random>

#include "wepsim/budget.hpp"
#include "wepsim/constants.hpp"
#include "wepsim/errors.hpp"
#include "wepsim/species_table.hpp"
#include "test_util.hpp"

using namespace wepsim;
namespace c = constants;

namespace {

std::vector<BudgetEntry> table1_entries() {
  return {
      {"Experimental data", 49426.6e-10, 1.8e-10, EntryKind::raw_measurement},
      {"Effective wave vector", 49435.5e-10, 0.5e-10, EntryKind::correction_term},
      {"Detector difference", 1.0e-10, 2.5e-10, EntryKind::correction_term},
      {"Coriolis effect", 0.0, 2.0e-10, EntryKind::correction_term},
      {"Wave-front aberration", 0.0, 5.0e-10, EntryKind::correction_term},
      {"ac Stark shift", 0.0, 0.6e-10, EntryKind::correction_term},
      {"Quadratic Zeeman shift", 0.0, 2.0e-10, EntryKind::correction_term},
      {"Gravity gradient", -5.5e-10, 1.2e-10, EntryKind::correction_term},
      {"Others", 0.0, 1.0e-10, EntryKind::correction_term},
  };
}

}  // namespace

TEST_CASE("combine_budget: published error budget totals") {
  const auto estimate = combine_budget(table1_entries());
  // Raw minus corrections: 49426.6 - 49435.5 - 1.0 + 5.5 = -4.4.
  CHECK(estimate.value == doctest::Approx(-4.4e-10).epsilon(1e-9));
  // Root-sum-square of all nine uncertainties: sqrt(45.54) = 6.7483.
  CHECK(estimate.uncertainty * 1e10 == doctest::Approx(6.7483).epsilon(2e-4));
  CHECK(format_eta_e10(estimate.value) == "-4.4");
  CHECK(format_eta_e10(estimate.uncertainty) == "6.7");
}

TEST_CASE("combine_budget: raw only and single correction") {
  const std::vector<BudgetEntry> raw_only = {
      {"Experimental data", 49426.6e-10, 1.8e-10, EntryKind::raw_measurement}};
  const auto estimate = combine_budget(raw_only);
  CHECK(estimate.value == 49426.6e-10);
  CHECK(estimate.uncertainty == 1.8e-10);

  // The single-correction path gives the published corrected value.
  const std::vector<BudgetEntry> pairwise = {
      {"Experimental data", 49426.6e-10, 0.0, EntryKind::raw_measurement},
      {"Effective wave vector", 49435.5e-10, 0.0, EntryKind::correction_term}};
  const auto corrected = combine_budget(pairwise);
  CHECK(std::abs(corrected.value - (-8.9e-10)) < 1e-20);
  CHECK(format_eta_e10(corrected.value) == "-8.9");
}

TEST_CASE("combine_budget: missing and duplicate raw rows") {
  auto entries = table1_entries();
  entries.erase(entries.begin());
  CHECK_THROWS_AS(combine_budget(entries), MissingRawError);

  entries = table1_entries();
  entries.push_back(
      {"Second raw", 1e-10, 1e-10, EntryKind::raw_measurement});
  CHECK_THROWS_AS(combine_budget(entries), DuplicateRawError);
}

TEST_CASE("combine_budget: permutation invariance of corrections") {
  const auto reference = combine_budget(table1_entries());
  auto entries = table1_entries();
  std::mt19937 rng(7);
  for (int trial = 0; trial < 20; ++trial) {
    std::shuffle(entries.begin() + 1, entries.end(), rng);
    const auto shuffled = combine_budget(entries);
    CHECK(shuffled.value == reference.value);
    CHECK(shuffled.uncertainty == reference.uncertainty);
  }
}

TEST_CASE("combine_budget: zero entry is a no-op, removal shrinks uncertainty") {
  auto entries = table1_entries();
  const auto reference = combine_budget(entries);
  entries.push_back({"Nothing", 0.0, 0.0, EntryKind::correction_term});
  const auto with_zero = combine_budget(entries);
  CHECK(with_zero.value == reference.value);
  CHECK(with_zero.uncertainty == reference.uncertainty);

  for (size_t drop = 1; drop < table1_entries().size(); ++drop) {
    auto reduced = table1_entries();
    const double dropped_unc = reduced[drop].uncertainty;
    reduced.erase(reduced.begin() + static_cast<long>(drop));
    const auto est = combine_budget(reduced);
    if (dropped_unc > 0.0)
      CHECK(est.uncertainty < reference.uncertainty);
    else
      CHECK(est.uncertainty == reference.uncertainty);
  }
}

TEST_CASE("static_entry: verbatim storage and negative uncertainty rejection") {
  const auto wavefront = static_entry("Wave-front aberration", 0.0, 5.0e-10);
  CHECK(wavefront.correction == 0.0);
  CHECK(wavefront.uncertainty == 5.0e-10);
  CHECK(wavefront.kind == EntryKind::correction_term);
  const auto others = static_entry("Others", 0.0, 1.0e-10);
  CHECK(others.uncertainty == 1.0e-10);
  CHECK_THROWS_AS(static_entry("bad", 0.0, -1e-10), DataError);
}

TEST_CASE("wave_vector_correction: derived from the hyperfine splittings") {
  const auto table = SpeciesTable::builtin();
  const auto a = table.resolve({"87Rb", 1, 0});
  const auto b = table.resolve({"85Rb", 2, 0});
  EnvironmentModel env;
  env.local_g = 9.8;
  env.local_g_uncertainty = 1.0e-4;

  const auto entry = wave_vector_correction(a, b, env);

  // Independent arithmetic from the published constants: the Raman pairs
  // share the lower frequency legs, so the sum-frequency difference is the
  // hyperfine-splitting difference.
  const double expected =
      (c::rb87_hyperfine_hz - c::rb85_hyperfine_hz) /
      (2.0 * c::rb87_d2_frequency_hz +
       0.5 * (c::rb87_hyperfine_hz + c::rb85_hyperfine_hz));
  CHECK(entry.correction == doctest::Approx(expected).epsilon(1e-12));
  CHECK(entry.correction == doctest::Approx(4.94e-6).epsilon(1e-3));
  // Published Table-1 value, within 1%.
  CHECK(entry.correction == doctest::Approx(49435.5e-10).epsilon(0.01));
  // Uncertainty driven by the local-g uncertainty.
  CHECK(entry.uncertainty ==
        doctest::Approx(entry.correction * 1.0e-4 / 9.8).epsilon(1e-12));
  CHECK(format_eta_e10(entry.uncertainty) == "0.5");

  // Swapping the pair flips the sign.
  const auto swapped = wave_vector_correction(b, a, env);
  CHECK(swapped.correction == -entry.correction);

  auto equal_k = a;
  equal_k.effective_wave_vector = b.effective_wave_vector;
  CHECK(wave_vector_correction(equal_k, b, env).correction == 0.0);
}

TEST_CASE("gravity_gradient_correction: zero cases and tuned defaults") {
  EnvironmentModel env;
  env.local_g = 9.8;
  env.gravity_gradient = 0.0;
  CHECK(gravity_gradient_correction(env, {1e-3, 1e-3}, 0.203, 1.2e-10)
            .correction == 0.0);

  env.gravity_gradient = 3.1e-6;
  CHECK(gravity_gradient_correction(env, {0.0, 0.0}, 0.203, 1.2e-10)
            .correction == 0.0);

  // Shipped calibration inputs reproduce the published -5.5e-10 row.
  const TrajectoryOffsets shipped{1.0e-3, 3.638964e-3};
  const auto entry = gravity_gradient_correction(env, shipped, 0.203, 1.2e-10);
  CHECK(entry.correction * 1e10 == doctest::Approx(-5.5).epsilon(1e-4));
  CHECK(entry.uncertainty == 1.2e-10);
  CHECK(format_eta_e10(entry.correction) == "-5.5");
}

TEST_CASE("budget file: shipped table parses to the published rows") {
  const auto entries = load_budget("data/budget_table1.txt");
  REQUIRE(entries.size() == 9);
  CHECK(entries[0].kind == EntryKind::raw_measurement);
  CHECK(entries[0].correction == 49426.6e-10);
  CHECK(entries[0].uncertainty == 1.8e-10);
  CHECK(entries[1].name == "Effective wave vector");
  CHECK(entries[1].correction == 49435.5e-10);
  const auto estimate = combine_budget(entries);
  CHECK(format_eta_e10(estimate.value) == "-4.4");
  CHECK(format_eta_e10(estimate.uncertainty) == "6.7");
}

TEST_CASE("budget file: serialize/parse round-trip is bit exact") {
  const auto entries = load_budget("data/budget_table1.txt");
  const auto text = serialize_budget(entries);
  const auto reloaded = parse_budget(text);
  REQUIRE(reloaded.size() == entries.size());
  for (size_t i = 0; i < entries.size(); ++i) {
    CHECK(reloaded[i].name == entries[i].name);
    CHECK(reloaded[i].kind == entries[i].kind);
    // Bit-for-bit: shortest-round-trip serialization.
    CHECK(reloaded[i].correction == entries[i].correction);
    CHECK(reloaded[i].uncertainty == entries[i].uncertainty);
  }
  const auto e1 = combine_budget(entries);
  const auto e2 = combine_budget(reloaded);
  CHECK(e1.value == e2.value);
  CHECK(e1.uncertainty == e2.uncertainty);
}

TEST_CASE("budget file: parse errors carry line locations") {
  CHECK_THROWS_WITH_AS(parse_budget("Experimental data | 1.0 | 1.0\n", "t"),
                       doctest::Contains("line 1"), DataError);
  CHECK_THROWS_WITH_AS(
      parse_budget("a | x | 1.0 | raw_measurement\n", "t"),
      doctest::Contains("line 1"), DataError);
  CHECK_THROWS_WITH_AS(
      parse_budget("a | 1.0 | 1.0 | nonsense\n", "t"),
      doctest::Contains("unknown entry kind"), DataError);
  CHECK_THROWS_WITH_AS(
      parse_budget("a | 1.0 | -1.0 | correction_term\n", "t"),
      doctest::Contains("uncertainty"), DataError);
  CHECK_THROWS_AS(parse_budget("# only comments\n", "t"), DataError);
}

TEST_CASE("budget report: table mirrors the published layout") {
  const auto report = format_budget_report(combine_budget(table1_entries()));
  CHECK(report.find("Experimental data") != std::string::npos);
  CHECK(report.find("49426.6") != std::string::npos);
  CHECK(report.find("49435.5") != std::string::npos);
  CHECK(report.find("-5.5") != std::string::npos);
  CHECK(report.find("Total") != std::string::npos);
  CHECK(report.find("-4.4") != std::string::npos);
  CHECK(report.find("6.7") != std::string::npos);
}

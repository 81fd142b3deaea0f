#include <doctest.h>

#include <algorithm>

#include "sigmak/suites.hpp"

using namespace sigmak;

namespace {

SuiteOptions quick(std::uint64_t seed) {
  SuiteOptions o;
  o.seed = seed;
  o.identity_samples = 1500;
  o.gradient_samples = 120;
  o.ricci_samples = 400;
  o.convention_samples = 300;
  o.perturbation_samples = 300;
  return o;
}

}  // namespace

TEST_CASE("verify suites pass and keep their structure across seeds") {
  std::vector<std::string> names;
  for (std::uint64_t seed = 1; seed <= 10; ++seed) {
    const auto records = verify_all(quick(seed));
    std::vector<std::string> these;
    for (const auto& r : records) {
      CAPTURE(seed);
      CAPTURE(r.name);
      CAPTURE(r.measured);
      CHECK(r.passed);
      these.push_back(r.name);
    }
    if (names.empty()) {
      names = these;
    }
    CHECK(these == names);
  }
  CHECK(names.size() >= 12);
}

TEST_CASE("verify suites are reproducible") {
  const auto a = verify_all(quick(7));
  const auto b = verify_all(quick(7));
  REQUIRE(a.size() == b.size());
  for (std::size_t i = 0; i < a.size(); ++i) {
    CHECK(a[i].measured == b[i].measured);
  }
}

TEST_CASE("corrupted sigma_k is caught and the identity named") {
  SuiteOptions o = quick(3);
  o.corrupt_sigma = true;
  const auto records = identity_checks(o);
  const auto failed = std::count_if(records.begin(), records.end(),
                                    [](const CheckRecord& r) { return !r.passed; });
  CHECK(failed >= 1);
  CHECK_FALSE(records[0].passed);
  CHECK(records[0].name.find("identity (i)") == 0);
}

TEST_CASE("identity suite honours an (n, k) restriction") {
  SuiteOptions o = quick(5);
  o.n = 4;
  o.k = 4;
  for (const auto& r : identity_checks(o)) {
    CHECK(r.passed);
  }
  o.n = 3;
  o.k = 5;
  CHECK_FALSE(identity_checks(o).front().passed);
}

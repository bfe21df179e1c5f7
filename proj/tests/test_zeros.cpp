#include "riemannlab/zeros.hpp"

#include <catch2/catch_amalgamated.hpp>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <string>

using Catch::Matchers::WithinAbs;
using riemannlab::StretchSpec;
using riemannlab::ZeroSet;

namespace {

// Writes a throwaway zero table and returns its path.
std::string write_table(const std::string& name, const std::string& body) {
  const std::string path = "zeros_test_" + name + ".txt";
  std::ofstream out(path);
  out << body;
  return path;
}

ZeroSet reference_zeros(std::size_t limit) {
  return riemannlab::load_zeros(RLAB_ZEROS_FILE, limit);
}

}  // namespace

TEST_CASE("load_zeros reads the bundled table") {
  const ZeroSet zs = reference_zeros(1024);
  REQUIRE(zs.size() == 1024);
  CHECK(zs.source == riemannlab::ZeroSource::File);
  CHECK_THAT(zs.zeros.front().alpha, WithinAbs(14.134725, 1e-5));
  CHECK(zs.zeros.front().a == 0.5);
  for (std::size_t i = 1; i < zs.size(); ++i) {
    CHECK(zs.zeros[i].alpha > zs.zeros[i - 1].alpha);
  }
}

TEST_CASE("load_zeros honors the limit and skips comments and blanks") {
  const std::string path = write_table(
      "ok", "# header\n\n14.1347251\n21.0220396  # trailing comment\n"
            "25.0108576\n30.4248761\n");
  const ZeroSet zs = riemannlab::load_zeros(path, 3);
  REQUIRE(zs.size() == 3);
  CHECK_THAT(zs.zeros[2].alpha, WithinAbs(25.0108576, 1e-9));
  std::remove(path.c_str());
}

TEST_CASE("load_zeros reports parse and ordering failures by line") {
  const std::string bad = write_table("bad", "14.1\nabc\n");
  CHECK_THROWS_WITH(riemannlab::load_zeros(bad, 10),
                    Catch::Matchers::ContainsSubstring("line 2"));
  std::remove(bad.c_str());

  const std::string unsorted = write_table("unsorted", "21.0\n14.1\n");
  CHECK_THROWS_WITH(riemannlab::load_zeros(unsorted, 10),
                    Catch::Matchers::ContainsSubstring("order violation"));
  std::remove(unsorted.c_str());

  CHECK_THROWS_AS(riemannlab::load_zeros("does_not_exist.txt", 1),
                  std::runtime_error);
}

TEST_CASE("load_zeros returns an empty set for an empty file") {
  const std::string path = write_table("empty", "");
  CHECK(riemannlab::load_zeros(path, 10).empty());
  std::remove(path.c_str());
}

TEST_CASE("synthesize_stretch assigns block a-values and keeps alphas") {
  StretchSpec spec;
  spec.base = reference_zeros(20);
  spec.blocks = {{10, 0.5}, {5, 0.7}};
  const ZeroSet zs = riemannlab::synthesize_stretch(spec);
  REQUIRE(zs.size() == 15);
  CHECK(zs.source == riemannlab::ZeroSource::Synthetic);
  for (std::size_t i = 0; i < 10; ++i) {
    CHECK(zs.zeros[i].a == 0.5);
  }
  for (std::size_t i = 10; i < 15; ++i) {
    CHECK(zs.zeros[i].a == 0.7);
  }
  for (std::size_t i = 0; i < 15; ++i) {
    CHECK(zs.zeros[i].alpha == spec.base.zeros[i].alpha);
  }
}

TEST_CASE("synthesize_stretch with one half block reproduces the base") {
  StretchSpec spec;
  spec.base = reference_zeros(30);
  spec.blocks = {{30, 0.5}};
  const ZeroSet zs = riemannlab::synthesize_stretch(spec);
  REQUIRE(zs.size() == 30);
  for (std::size_t i = 0; i < zs.size(); ++i) {
    CHECK(zs.zeros[i].a == spec.base.zeros[i].a);
    CHECK(zs.zeros[i].alpha == spec.base.zeros[i].alpha);
  }
}

TEST_CASE("synthesize_stretch rejects invalid specifications") {
  StretchSpec spec;
  spec.base = reference_zeros(5);

  spec.blocks = {{5, 1.0}};
  CHECK_THROWS_AS(riemannlab::synthesize_stretch(spec),
                  std::invalid_argument);

  spec.blocks = {{6, 0.5}};
  CHECK_THROWS_AS(riemannlab::synthesize_stretch(spec),
                  std::invalid_argument);

  spec.blocks = {{0, 0.5}};
  CHECK_THROWS_AS(riemannlab::synthesize_stretch(spec),
                  std::invalid_argument);
}

TEST_CASE("average_zero_count evaluates the smooth counting law") {
  CHECK_THAT(riemannlab::average_zero_count(2.0 * std::numbers::pi),
             WithinAbs(-1.0, 1e-14));
  CHECK_THAT(riemannlab::average_zero_count(100.0), WithinAbs(28.127, 5e-3));
  CHECK_THAT(riemannlab::average_zero_count(1000.0), WithinAbs(647.74, 5e-2));
  CHECK_THROWS_AS(riemannlab::average_zero_count(0.0), std::domain_error);
}

TEST_CASE("empirical_zero_count follows the inclusive convention") {
  const ZeroSet zs = reference_zeros(64);
  CHECK(riemannlab::empirical_zero_count(zs, 10.0) == 0);
  CHECK(riemannlab::empirical_zero_count(zs, 100.0) == 29);
  // Exactly at a listed alpha the zero is counted.
  CHECK(riemannlab::empirical_zero_count(zs, zs.zeros[4].alpha) == 5);
}

TEST_CASE("smooth counting law tracks the empirical staircase") {
  const ZeroSet zs = reference_zeros(1024);
  const double top = zs.zeros.back().alpha;
  for (double T = 50.0; T <= top; T *= 1.31) {
    const double smooth = riemannlab::average_zero_count(T);
    const double empirical =
        static_cast<double>(riemannlab::empirical_zero_count(zs, T));
    CHECK(std::fabs(empirical - smooth) <= 2.0 + std::log(T));
  }
}

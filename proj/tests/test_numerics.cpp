#include <doctest.h>

#include <cmath>
#include <vector>

#include "rotmorse/numerics.hpp"
#include "rotmorse/units.hpp"

using namespace rotmorse;

TEST_CASE("bracketed root of cos on [1, 2]") {
  const auto res = numerics::find_root_bracketed([](double x) { return std::cos(x); }, 1.0, 2.0,
                                                 0.0, 1e-14);
  CHECK(res.x == doctest::Approx(units::kPi / 2).epsilon(1e-13));
}

TEST_CASE("bracketed root survives a flat secant") {
  // Steep on one side, flat on the other: the secant alone stalls.
  const auto f = [](double x) { return x < 0.0 ? -1e-3 : std::pow(x, 9) - 1e-3 + x; };
  const auto res = numerics::find_root_bracketed(f, -1.0, 1.0, 1e-13, 1e-13);
  CHECK(std::abs(f(res.x)) < 1e-9);
  CHECK(res.iterations < 200);
}

TEST_CASE("root finder rejects an unbracketed interval") {
  CHECK_THROWS(numerics::find_root_bracketed([](double x) { return x * x + 1.0; }, -1.0, 1.0,
                                             1e-12, 1e-12));
}

TEST_CASE("first sign change") {
  const auto br = numerics::first_sign_change([](double x) { return std::sin(x); }, 1.0, 10.0, 90);
  REQUIRE(br.has_value());
  CHECK(br->first <= units::kPi);
  CHECK(br->second >= units::kPi);
  CHECK(!numerics::first_sign_change([](double) { return 1.0; }, 0.0, 1.0, 10).has_value());
}

TEST_CASE("golden section finds a parabola's vertex") {
  const double x = numerics::golden_section_max([](double v) { return -(v - 0.3) * (v - 0.3); },
                                                -1.0, 2.0, 1e-10);
  CHECK(x == doctest::Approx(0.3).epsilon(1e-8));
}

TEST_CASE("trapezoid is exact for linear data") {
  std::vector<double> y;
  for (int i = 0; i <= 10; ++i) y.push_back(2.0 + 3.0 * 0.1 * i);
  CHECK(numerics::trapezoid(y, 0.1) == doctest::Approx(2.0 + 1.5));
}

TEST_CASE("peaks of two separated bumps") {
  std::vector<double> f(401);
  for (std::size_t i = 0; i < f.size(); ++i) {
    const double x = 0.01 * static_cast<double>(i);
    f[i] = std::exp(-std::pow((x - 1.0) / 0.1, 2)) + 0.5 * std::exp(-std::pow((x - 3.0) / 0.1, 2));
  }
  const auto peaks = numerics::find_peaks(f);
  REQUIRE(peaks.size() == 2);
  CHECK(peaks[0] == 100);
  CHECK(peaks[1] == 300);
  // Below the 5% threshold the second bump disappears.
  for (std::size_t i = 200; i < f.size(); ++i) f[i] *= 0.01;
  CHECK(numerics::find_peaks(f).size() == 1);
}

TEST_CASE("end points are never peaks") {
  std::vector<double> f{5.0, 4.0, 3.0, 2.0, 1.0};
  CHECK(numerics::find_peaks(f).empty());
}

TEST_CASE("mean spacing") {
  std::vector<double> p{1.0, 1.5, 2.5};
  CHECK(*numerics::mean_spacing(p) == doctest::Approx(0.75));
  CHECK(!numerics::mean_spacing(std::vector<double>{1.0}).has_value());
}

TEST_CASE("unwrap folds 2 pi jumps") {
  std::vector<double> a{0.1, 2.0, 4.0, 6.0, 0.2, 1.0};
  const auto u = numerics::unwrap(a);
  CHECK(u[3] == doctest::Approx(6.0));
  CHECK(u[4] == doctest::Approx(0.2 + units::kTwoPi));
  CHECK(u[5] == doctest::Approx(1.0 + units::kTwoPi));
  for (std::size_t i = 1; i < u.size(); ++i) CHECK(u[i] >= u[i - 1]);
}

#include <doctest.h>

#include <cstdlib>
#include <string>

#include <kpx/format.hpp>

using kpx::format_double;

TEST_CASE("format_double renders simple values compactly") {
  CHECK(format_double(1.0) == "1");
  CHECK(format_double(-2.5) == "-2.5");
  CHECK(format_double(0.0) == "0");
  CHECK(format_double(100.0) == "100");
}

TEST_CASE("format_double round-trips the exact bits") {
  const double values[] = {0.1,
                           1.0 / 3.0,
                           -0.0,
                           3.141592653589793,
                           2.2484919922596048,
                           -11.830804599306904,
                           1e-300,
                           -4.9e-324,
                           1.7976931348623157e308,
                           5e-321};
  for (double v : values) {
    const std::string s = format_double(v);
    const double back = std::strtod(s.c_str(), nullptr);
    CHECK(back == v);
    // Emission is deterministic.
    CHECK(format_double(v) == s);
  }
}

#include "doctest.h"
#include "modsurf/textio.hpp"

using namespace modsurf;

TEST_CASE("complex text") {
  CHECK(*parse_complex("1.5-2i") == cplx(1.5, -2));
  CHECK(*parse_complex("-i") == cplx(0, -1));
  CHECK(*parse_complex("i") == cplx(0, 1));
  CHECK(*parse_complex("3") == cplx(3, 0));
  CHECK(*parse_complex("-0.3i") == cplx(0, -0.3));
  CHECK(*parse_complex("1e-3+2e-1i") == cplx(1e-3, 0.2));
  CHECK(*parse_complex("-1e+2-1e-2i") == cplx(-100, -0.01));
  CHECK(*parse_complex("+2+i") == cplx(2, 1));
  CHECK_FALSE(parse_complex(""));
  CHECK_FALSE(parse_complex("1+"));
  CHECK_FALSE(parse_complex("1 + 2i"));
  CHECK_FALSE(parse_complex("abc"));
  CHECK(format_complex(cplx(1.5, -2)) == "1.5-2i");
  CHECK(format_complex(cplx(-0.0, -0.0)) == "0+0i");
  for (cplx z : {cplx(0.1, 0.2), cplx(-1e-300, 3e10), cplx(1.0 / 3, -2.0 / 7)})
    CHECK(*parse_complex(format_complex(z)) == z);
}

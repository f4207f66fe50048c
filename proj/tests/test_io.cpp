#include <doctest.h>

#include "gapcert/errors.hpp"
#include "gapcert/io.hpp"

using namespace gapcert;

TEST_CASE("block saddle sections") {
  auto H = parse_block_saddle("A\n1 1\n2\nB\n1 2\n1 3\nC\n2 2\n1 0\n0 1\n");
  CHECK(H.m() == 1);
  CHECK(H.k() == 2);
  CHECK(H.B(0, 1) == 3.0);
  auto Z = parse_block_saddle("# stokes\nA\n1 1\n2\nB\n1 2\n1 3\nC zero 2\n");
  CHECK(Z.C == Matrix(2, 2));
  auto O = parse_block_saddle("A\n1 1\n2\nB\n1 3\n1 3 4\n");
  CHECK(O.k() == 3);
  CHECK(O.C.max_abs() == 0.0);
}

TEST_CASE("block saddle parse errors") {
  for (const char* text : {"A\n1 1\n2\n", "A\n1 1\n2\nA\n1 1\n2\nB\n1 1\n1\n", "1 1\n2\n", "A\n1 1\n2\nB\n1 1\n1\nC zero\n",
                           "A\n1 1\nx\nB\n1 1\n1\n", "A extra\n1 1\n2\nB\n1 1\n1\n"}) {
    try {
      parse_block_saddle(text);
      FAIL("expected a parse error for: " << text);
    } catch (const Error& e) {
      CHECK(e.is_parse_error());
    }
  }
  CHECK_THROWS_AS(load_block_saddle("/nonexistent/file"), Error);
}

TEST_CASE("number formatting and JSON shapes") {
  CHECK(format_double(0.1) == "0.10000000000000001");
  CHECK(format_double(INFINITY) == "inf");
  CHECK(format_double(NAN) == "nan");
  GapCertificate g;
  g.lo = -1;
  g.hi = 2;
  g.method = Method::Stretch;
  g.quantities["lambda0"] = 0.5;
  auto j = to_json(g);
  CHECK(j["method"] == "stretch");
  CHECK(j["interval"][1] == 2.0);
  CHECK(j["claim"] == "empty");
  CHECK(j["inv_norm_bound"].is_null());
  IntervalPair p;
  p.source = IntervalSource::RuWa;
  CHECK(to_json(p)["source"] == "ruwa");
  std::ostringstream out;
  write_csv_row(out, {"a", "b"});
  CHECK(out.str() == "a,b\n");
}

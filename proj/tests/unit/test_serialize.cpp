#include <filesystem>
#include <random>

#include "doctest.h"
#include "recu/gadgets.hpp"
#include "recu/serialize.hpp"
#include "support.hpp"

using namespace recu;

TEST_CASE("round-trip of the product gadget is exact") {
  const Network net = gadgets::product(1.0);
  CHECK(deserialize(serialize(net)) == net);
  CHECK(deserialize(serialize(net, MatrixEncoding::sparse)) == net);
  CHECK(deserialize(serialize(net, MatrixEncoding::dense)) == net);
}

TEST_CASE("property: random networks round-trip bit-exactly") {
  std::mt19937_64 rng(8);
  for (int trial = 0; trial < 25; ++trial) {
    const Network net = recu::testing::random_network(rng, 1 + trial % 3, 1 + trial % 2, 1 + trial % 4);
    const Network back = deserialize(serialize(net));
    CHECK(back == net);
  }
}

TEST_CASE("truncated documents fail with a location") {
  const std::string text = serialize(gadgets::square(1.0));
  try {
    deserialize(text.substr(0, text.size() / 2));
    FAIL("expected a parse error");
  } catch (const ParseError& e) {
    CHECK(e.location().rfind("byte ", 0) == 0);
  }
}

TEST_CASE("non-finite and malformed entries are rejected") {
  CHECK_THROWS_AS(deserialize(R"({"activation":"rho3","input_dim":1,"layers":[{"A":[[NaN]],"b":[0]}]})"), ParseError);
  CHECK_THROWS_AS(deserialize(R"({"activation":"rho3","input_dim":1,"layers":[{"A":[["x"]],"b":[0]}]})"), ParseError);
  CHECK_THROWS_AS(deserialize(R"({"activation":"rho3","input_dim":1,"layers":[{"A":[[1e999]],"b":[0]}]})"), ParseError);
  CHECK_THROWS_AS(deserialize(R"({"activation":"rho3","input_dim":1,"layers":[]})"), ParseError);
  CHECK_THROWS_AS(deserialize(R"({"activation":"relu9x","input_dim":1,"layers":[{"A":[[1]],"b":[0]}]})"), ParseError);
  try {
    deserialize(R"({"activation":"rho3","input_dim":2,"layers":[{"A":[[1]],"b":[0]}]})");
    FAIL("expected a parse error");
  } catch (const ParseError& e) {
    CHECK(e.location() == "/layers/0");
  }
  try {
    deserialize(R"({"activation":"rho3","input_dim":1,"layers":[{"A":[[1],[2,3]],"b":[0,0]}]})");
    FAIL("expected a parse error");
  } catch (const ParseError& e) {
    CHECK(e.location() == "/layers/0/A/1");
  }
}

TEST_CASE("sparse encoding validates indices") {
  CHECK_THROWS_AS(
      deserialize(R"({"activation":"rho3","input_dim":1,"layers":[{"A_sparse":{"rows":1,"cols":1,"entries":[[0,3,1.0]]},"b":[0]}]})"),
      ParseError);
  const Network net = deserialize(
      R"({"activation":"rho3","input_dim":2,"layers":[{"A_sparse":{"rows":1,"cols":2,"entries":[[0,1,2.5]]},"b":[1]}]})");
  CHECK(realize(net, {7.0, 2.0})[0] == 6.0);
}

TEST_CASE("save and load through a file") {
  const auto path = std::filesystem::temp_directory_path() / "recu_serialize_test.json";
  const Network net = gadgets::monomial_extractor();
  save_network(net, path);
  CHECK(load_network(path) == net);
  std::filesystem::remove(path);
  CHECK_THROWS(load_network(path));
}

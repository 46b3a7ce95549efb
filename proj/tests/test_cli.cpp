#include "doctest.h"
#include "mirrork/cli.hpp"
#include "mirrork/io.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>

using namespace mirrork;

namespace {

struct Result {
  int code;
  std::string out;
  std::string err;
};

Result invoke(std::vector<std::string> args) {
  args.insert(args.begin(), "mirrork");
  std::ostringstream out, err;
  int code = run(args, out, err);
  return {code, out.str(), err.str()};
}

std::size_t count(const std::string& haystack, const std::string& needle) {
  std::size_t n = 0;
  for (std::size_t pos = haystack.find(needle); pos != std::string::npos; pos = haystack.find(needle, pos + 1)) ++n;
  return n;
}

std::string temp_file(const std::string& name, const std::string& contents) {
  std::string path = "mirrork_cli_test_" + name;
  std::ofstream(path) << contents;
  return path;
}

bool single_error_line(const std::string& err) {
  return err.rfind("error: ", 0) == 0 && count(err, "\n") == 1;
}

}  // namespace

TEST_CASE("cli: kzero catalog:sign agrees") {
  auto r = invoke({"kzero", "catalog:sign"});
  CHECK(r.code == 0);
  CHECK(count(r.out, "Z + Z/2") == 3);
  CHECK(r.out.find("AGREE") != std::string::npos);
  auto j = Json::parse(invoke({"kzero", "catalog:sign", "--format", "json"}).out);
  CHECK(j["verdict"] == "AGREE");
  CHECK(j["chain_h0"].dump() == "[1,[2]]");
  CHECK(j["coend"]["group"] == j["mp"]["group"]);
}

TEST_CASE("cli: e2 for the sign lattice over F3") {
  auto r = invoke({"e2", "catalog:sign", "--preset", "ff:3,2", "--qmax", "3"});
  CHECK(r.code == 0);
  CHECK(r.out.find("collapse: certified") != std::string::npos);
  auto j = Json::parse(invoke({"--format", "json", "e2", "catalog:sign", "--preset", "ff:3,2", "--qmax", "3"}).out);
  CHECK(j["rows"][1][1].dump() == "[0,[4]]");
  CHECK(j["collapse"]["certified"] == true);
}

TEST_CASE("cli: exit codes") {
  auto unsupported = invoke({"cells", "build", "catalog:norm_one_cyclic3", "--backend", "cubical"});
  CHECK(unsupported.code == 3);
  CHECK(single_error_line(unsupported.err));
  for (const auto& args : std::vector<std::vector<std::string>>{
           {"kzero", "catalog:unknown"},
           {"e2", "catalog:sign", "--preset", "ff:6,2"},
           {"e2", "catalog:sign", "--preset", "ff:3"},
           {"e2", "catalog:sign", "--preset", "ff:3,3"},
           {"swan", "--preset", "ff:x"},
           {"bredon", "catalog:sign", "--coeff", "other"},
           {"cells", "build", "catalog:sign", "--backend", "nope"},
           {"kzero", "catalog:sign", "--unknown-flag"},
           {"--format", "xml", "catalog", "list"},
           {}}) {
    auto r = invoke(args);
    CAPTURE(r.err);
    CHECK(r.code == 2);
    CHECK(single_error_line(r.err));
  }
  CHECK(invoke({"--help"}).code == 0);
}

TEST_CASE("cli: JSON output is deterministic") {
  for (const auto& args : std::vector<std::vector<std::string>>{
           {"--format", "json", "cells", "build", "catalog:norm_one_cyclic3"},
           {"--format", "json", "bredon", "catalog:induced_S3_C2"},
           {"--format", "json", "lattice", "info", "catalog:regular_S3"},
           {"--format", "json", "swan", "--preset", "ff:9"}}) {
    auto a = invoke(args), b = invoke(args);
    CHECK(a.code == 0);
    CHECK(a.out == b.out);
    CHECK(Json::parse(a.out).is_object());
  }
}

TEST_CASE("cli: catalog export feeds lattice info, mackey files feed bredon") {
  auto exported = invoke({"catalog", "export", "sign"});
  REQUIRE(exported.code == 0);
  std::string lattice = temp_file("sign.json", exported.out);
  auto info = invoke({"--format", "json", "lattice", "info", lattice});
  CHECK(info.code == 0);
  CHECK(Json::parse(info.out)["subgroup_classes"][1]["h1"].dump() == "[0,[2]]");

  std::string mackey = temp_file("k1.json", mackey_to_json(finite_field_mackey(3, 2, 1)).dump());
  auto h = invoke({"--format", "json", "bredon", lattice, "--coeff", "mackey:" + mackey});
  CHECK(h.code == 0);
  CHECK(Json::parse(h.out)["H"].dump() == "[[0,[2]],[0,[4]]]");
  // A trivial-group lattice is inflated to the coefficient group.
  auto split = invoke({"bredon", "catalog:split1", "--coeff", "mackey:" + mackey});
  CHECK(split.code == 0);
  auto wrong = invoke({"bredon", "catalog:norm_one_cyclic3", "--coeff", "mackey:" + mackey});
  CHECK(wrong.code == 2);

  std::remove(lattice.c_str());
  std::remove(mackey.c_str());
}

TEST_CASE("cli: catalog list and swan table") {
  auto list = invoke({"catalog", "list"});
  CHECK(list.code == 0);
  CHECK(count(list.out, "\n") == 14);
  auto swan = invoke({"swan", "--preset", "ff:3", "--nmax", "2"});
  CHECK(swan.code == 0);
  CHECK(swan.out.find("Z/4") != std::string::npos);
}

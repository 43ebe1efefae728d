#pragma once

// Runs the N-Quads syntax conformance files listed in manifest.txt: positive
// files must parse to the quad set frozen from the reference parser, negative
// files must raise SyntaxError.

#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "json_terms.hpp"
#include "tessera/errors.hpp"
#include "tessera/rdf/nquads.hpp"

namespace tessera::testing {

struct SuiteResult {
  int positive = 0;
  int negative = 0;
  std::vector<std::string> failures;
};

inline std::string slurp(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

inline SuiteResult run_nquads_suite(const std::filesystem::path& dir) {
  SuiteResult result;
  std::istringstream manifest(slurp(dir / "manifest.txt"));
  std::string kind, name;
  while (manifest >> kind >> name) {
    const std::string text = slurp(dir / name);
    if (kind == "positive") {
      ++result.positive;
      try {
        const auto actual = rdf::parse_nquads(text);
        const auto stem = name.substr(0, name.size() - 3);
        const auto expected =
            quads_from_json(nlohmann::json::parse(slurp(dir / (stem + ".expected.json"))));
        if (actual != expected) result.failures.push_back(name + ": quad set differs from reference");
      } catch (const std::exception& e) {
        result.failures.push_back(name + ": " + e.what());
      }
    } else {
      ++result.negative;
      try {
        rdf::parse_nquads(text);
        result.failures.push_back(name + ": accepted");
      } catch (const SyntaxError&) {
      } catch (const std::exception& e) {
        result.failures.push_back(name + ": wrong exception: " + e.what());
      }
    }
  }
  return result;
}

}  // namespace tessera::testing

#pragma once

// Seeded random grammars with a layered (acyclic) category structure.

#include <cstdint>
#include <string>

#include "prodgen/gil.hpp"
#include "prodgen/prefs.hpp"
#include "prodgen/registry.hpp"
#include "prodgen/tgl.hpp"

namespace testing {

struct RandomParams {
  int max_rules = 25;
  int max_conflict = 4;
  int max_depth = 8;
  bool constraints = true;
  bool criteria = false;
};

struct RandomCase {
  std::string grammar_text;
  std::string input_text;
  prodgen::tgl::Grammar grammar;
  prodgen::gil::FsPtr input;
  prodgen::prefs::CriteriaSpec criteria;
};

RandomCase random_case(std::uint64_t seed, const RandomParams& params = {});

/// Registry with `tag`, which spells out its arguments and hooked features,
/// e.g. "t3/CASE=nom/NUM=sg".
prodgen::Registry random_registry();

}  // namespace testing

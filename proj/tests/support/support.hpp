#pragma once

#include <fstream>
#include <memory>
#include <sstream>
#include <string>
#include <vector>

#include "prodgen/engine.hpp"
#include "prodgen/gil.hpp"
#include "prodgen/morpho.hpp"
#include "prodgen/tgl.hpp"

namespace testing {

inline std::string data_path(const std::string& name) { return std::string(PRODGEN_DATA_DIR) + "/" + name; }

inline std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

inline prodgen::tgl::Grammar demo_grammar(const std::string& name) {
  return prodgen::tgl::parse_grammar(read_file(data_path(name)));
}

inline prodgen::gil::FsPtr demo_input(const std::string& name) {
  return prodgen::gil::parse_gil(read_file(data_path(name)));
}

inline prodgen::Registry toy_registry() {
  prodgen::Registry r;
  prodgen::morpho::install_toy_morphology(r, std::make_shared<prodgen::morpho::Lexicon>(prodgen::morpho::Lexicon::toy()));
  return r;
}

inline std::vector<std::string> texts(const std::vector<prodgen::Solution>& sols) {
  std::vector<std::string> out;
  for (const auto& s : sols) out.push_back(s.text);
  return out;
}

}  // namespace testing

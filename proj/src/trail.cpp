#include "prodgen/trail.hpp"

#include <stdexcept>

namespace prodgen {

void Trail::undo_to(const Mark& m) {
  if (m.effects > effects_.size() || m.features > features_.mark())
    throw std::out_of_range("unknown trail mark");
  while (effects_.size() > m.effects) {
    Effect e = std::move(effects_.back());
    effects_.pop_back();
    e.fx->undo(memory_, e.input, e.args);
  }
  features_.undo_to(m.features);
}

void Trail::run_side_effect(const std::string& name, const Registry::SideEffect& fx, const gil::FsPtr& input,
                            std::vector<gil::Atom> args) {
  fx.apply(memory_, input, args);
  effects_.push_back({name, &fx, input, std::move(args)});
}

}  // namespace prodgen

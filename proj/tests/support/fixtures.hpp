#pragma once

#include <initializer_list>
#include <string>
#include <utility>

#include "bdikit/presets.hpp"

namespace fixture {

/// Preset with string overrides applied, e.g. spec("pure-death-bm", {{"kill_rate", "2"}}).
inline bdikit::model::ModelSpec spec(const std::string& preset,
                                     std::initializer_list<std::pair<std::string, std::string>> overrides = {}) {
  auto p = bdikit::model::preset_params(preset);
  for (const auto& [k, v] : overrides) bdikit::model::apply_override(p, k, v);
  return bdikit::model::make_model(p);
}

}  // namespace fixture

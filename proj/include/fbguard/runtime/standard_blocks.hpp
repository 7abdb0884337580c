#pragma once

#include <string>

#include "fbguard/runtime/network.hpp"

namespace fbguard::fb {

/// E_SWITCH: EI WITH G; G=false fires EO0, G=true fires EO1.
class ESwitch final : public ClonableBehavior<ESwitch> {
 public:
  void on_event(std::string_view event, DispatchContext& ctx) override;
};

FBInstance make_e_switch(std::string id);

}  // namespace fbguard::fb

#include "fbguard/runtime/standard_blocks.hpp"

#include <memory>

namespace fbguard::fb {

void ESwitch::on_event(std::string_view event, DispatchContext& ctx) {
  if (event != "EI") return;
  ctx.emit(ctx.in("G").as_bool() ? "EO1" : "EO0");
}

FBInstance make_e_switch(std::string id) {
  return FBInstance(std::move(id),
                    {event_in("EI", {"G"}), data_in("G", DataKind::Bool), event_out("EO0"), event_out("EO1")},
                    std::make_unique<ESwitch>());
}

}  // namespace fbguard::fb

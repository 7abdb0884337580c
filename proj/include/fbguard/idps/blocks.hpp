#pragma once

#include <optional>
#include <string>

#include "fbguard/idps/service.hpp"
#include "fbguard/runtime/composite.hpp"

namespace fbguard::idps {

inline constexpr Tick kDefaultPoll = millis(100);
inline constexpr Tick kDefaultHold = seconds(2);

/// IDPS_SIFB: INIT WITH PARAMS, STOP -> INITO WITH QO,STATUS; each alert
/// (service input "ALERT") fires IND WITH ALERT_SEQ.
class IdpsSifbBehavior final : public fb::ClonableBehavior<IdpsSifbBehavior> {
 public:
  explicit IdpsSifbBehavior(IdpsService* service) : service_(service) {}

  void on_event(std::string_view event, fb::DispatchContext& ctx) override;
  void on_service(std::string_view label, const fb::ServiceInput& input, fb::DispatchContext& ctx) override;

  Status status() const { return status_; }

 private:
  void report(fb::DispatchContext& ctx, bool qo);

  IdpsService* service_;
  Status status_ = Status::Stopped;
};

/// ALERTCHECK: REQ (poll) and ALERT, both WITH ALERT_SEQ. QO is true iff
/// ALERT_SEQ last increased no more than `hold` ago. REQ always answers with
/// CNF; ALERT fires CNF only when QO changes.
class AlertCheckBehavior final : public fb::ClonableBehavior<AlertCheckBehavior> {
 public:
  explicit AlertCheckBehavior(Tick hold) : hold_(hold) {}

  void on_event(std::string_view event, fb::DispatchContext& ctx) override;

  bool qo() const { return qo_; }
  std::optional<Tick> last_increase() const { return last_increase_; }

 private:
  Tick hold_;
  std::int64_t last_seq_ = 0;
  std::optional<Tick> last_increase_;
  bool qo_ = false;
};

fb::FBInstance make_idps_sifb(std::string id, IdpsService* service);
fb::FBInstance make_alertcheck(std::string id, Tick hold = kDefaultHold);

/// IDPS_CFB: interface INIT, STOP, REQ, PARAMS -> INITO, CNF, A, STATUS.
/// Interior instances are IDPS_SIFB and ALERTCHECK.
fb::CompositeFB make_idps_cfb(IdpsService* service, Tick hold = kDefaultHold);

}  // namespace fbguard::idps

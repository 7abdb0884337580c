#include "fbguard/runtime/runtime.hpp"

namespace fbguard::fb {

void Runtime::post(Tick at, std::string_view event_in_ref, std::uint32_t lane) {
  scheduler_.post(at, [this, ref = network_.resolve(event_in_ref)] { fire(ref.to_string()); }, lane);
}

void Runtime::fire(std::string_view event_in_ref) {
  if (halted()) return;
  enqueue(network_.resolve(event_in_ref));
}

void Runtime::service(std::string_view instance, std::string_view label, ServiceInput input) {
  if (halted()) return;
  enqueue(ServiceCall{std::string(instance), std::string(label), std::move(input)});
}

void Runtime::observe(std::string_view event_out_ref, Observer observer) {
  observers_[network_.resolve(event_out_ref)].push_back(std::move(observer));
}

void Runtime::enqueue(Work work) {
  work_.push_back(std::move(work));
  if (draining_) return;
  draining_ = true;
  try {
    while (!work_.empty()) {
      if (halted()) {
        work_.clear();
        break;
      }
      Work next = std::move(work_.front());
      work_.pop_front();
      run_one(next);
    }
  } catch (...) {
    work_.clear();
    draining_ = false;
    throw;
  }
  draining_ = false;
}

void Runtime::run_one(Work& work) {
  const Tick now = scheduler_.now();
  std::string instance;
  DispatchOutcome outcome;
  if (auto* ref = std::get_if<PortRef>(&work)) {
    instance = ref->instance;
    if (trace_) trace_->record_dispatch(now, ref->to_string());
    outcome = network_.dispatch(*ref, now);
  } else {
    auto& call = std::get<ServiceCall>(work);
    instance = call.instance;
    if (trace_) trace_->record_dispatch(now, call.instance + "." + call.label);
    outcome = network_.dispatch_service(call.instance, call.label, call.input, now);
  }
  ++dispatches_;
  const FBInstance* inst = network_.find(instance);
  for (const auto& e : outcome.emissions) {
    PortRef src{instance, e.event};
    if (trace_ && trace_->enabled()) {
      std::vector<Assignment> with;
      for (const auto& w : inst->find_port(e.event)->with) with.push_back({w, inst->data_out(w)});
      trace_->record_emit(now, src.to_string(), with);
    }
    for (auto& target : network_.event_targets(src)) work_.push_back(std::move(target));
  }
  for (auto& action : outcome.deferred) action();
  for (const auto& e : outcome.emissions) {
    auto it = observers_.find(PortRef{instance, e.event});
    if (it == observers_.end()) continue;
    for (auto& obs : it->second) obs(e, now);
  }
}

}  // namespace fbguard::fb

#pragma once

#include <map>
#include <string>
#include <vector>

#include "fbguard/runtime/network.hpp"

namespace fbguard::fb {

/// Composite block type: an interface, an interior network and one binding per
/// interface port.
struct CompositeFB {
  std::vector<PortSpec> interface;
  FBNetwork interior;
  std::map<std::string, PortRef> bindings;
};

/// Problems with a composite's interface bindings (unbound, unknown or
/// mismatched ports). Empty means it can be instantiated.
std::vector<std::string> check_bindings(const CompositeFB& composite);

/// Flattens `composite` into `parent`: interior instances become "<id>.<inner>"
/// and every interface port "<id>.<port>" becomes an alias for its bound
/// interior port. Throws NetworkError if the bindings are invalid.
void instantiate(FBNetwork& parent, const std::string& id, CompositeFB composite);

}  // namespace fbguard::fb

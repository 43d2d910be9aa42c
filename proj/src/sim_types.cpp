#include "dtnsim/sim_types.hpp"

#include <algorithm>
#include <utility>

namespace dtnsim {

const Custody* NodeState::find(MessageId id) const {
  auto it = std::lower_bound(buffer.begin(), buffer.end(), id,
                             [](const Custody& c, MessageId v) { return c.message.id < v; });
  return it != buffer.end() && it->message.id == id ? &*it : nullptr;
}

Custody* NodeState::find(MessageId id) {
  return const_cast<Custody*>(std::as_const(*this).find(id));
}

bool Connection::has_carried(MessageId id) const {
  return std::find(carried.begin(), carried.end(), id) != carried.end();
}

}  // namespace dtnsim

#include "cyclesim/errors.hpp"

namespace cyclesim {

void fault(const std::string& what) { throw InvariantFault(what); }

}  // namespace cyclesim

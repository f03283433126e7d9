#include "genscatter/errors.hpp"

namespace genscatter {

void require(bool cond, const std::string &what) {
  if (!cond)
    throw DomainError(what);
}

} // namespace genscatter

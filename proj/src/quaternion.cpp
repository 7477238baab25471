#include "quaternion.hpp"

#include <ostream>

namespace qjensen {

std::ostream& operator<<(std::ostream& os, const Quaternion& q) {
    return os << '[' << q.x0 << ", " << q.x1 << ", " << q.x2 << ", " << q.x3 << ']';
}

} // namespace qjensen

#pragma once

#include <ostream>

#include "equichern/scalar.hpp"
#include "equichern/torus.hpp"

namespace equichern {

inline void PrintTo(const Form& f, std::ostream* os) { *os << "\n" << (f.is_zero() ? "0\n" : to_text(f, kMaxDim)); }
inline void PrintTo(const Scalar& s, std::ostream* os) { *os << s.str(); }

}  // namespace equichern

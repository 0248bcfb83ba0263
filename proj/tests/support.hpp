#pragma once

#include "doctest.h"
#include "spinstrata/algebra.hpp"

namespace doctest {
template <>
struct StringMaker<spinstrata::Rational> {
    static String convert(const spinstrata::Rational& r) { return r.str().c_str(); }
};
}  // namespace doctest

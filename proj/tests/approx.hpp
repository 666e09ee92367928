#pragma once

#include <doctest.h>

// Purely relative comparison: |x - v| < eps * max(|x|, |v|).
inline doctest::Approx rel(double value, double eps)
{
    return doctest::Approx(value).epsilon(eps).scale(0.0);
}

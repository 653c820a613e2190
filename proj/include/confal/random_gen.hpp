#pragma once

#include <cstdint>
#include <vector>

#include "confal/poly.hpp"

namespace confal {

// Deterministic splitmix64 generator. Randomized campaigns must reproduce
// bit-for-bit across platforms, so no std:: distributions here.
class Rng {
  public:
    explicit Rng(uint64_t seed) : state_(seed ? seed : 0x9e3779b97f4a7c15ULL) {}

    uint64_t next()
    {
        uint64_t z = (state_ += 0x9e3779b97f4a7c15ULL);
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        return z ^ (z >> 31);
    }

    // uniform in [lo, hi]
    int range(int lo, int hi) { return lo + static_cast<int>(next() % uint64_t(hi - lo + 1)); }

    bool chance(int num, int den) { return range(1, den) <= num; }

    Rational rational(int max_abs_num = 9, int max_den = 9)
    {
        return Rational(range(-max_abs_num, max_abs_num), range(1, max_den));
    }

    Rational nonzero_rational(int max_abs_num = 9, int max_den = 9)
    {
        for (;;) {
            Rational q = rational(max_abs_num, max_den);
            if (!q.is_zero())
                return q;
        }
    }

    // random polynomial in the given variables, per-variable degree <= max_deg
    MultiPoly poly(const std::vector<VarId>& vars, int max_deg, int max_terms)
    {
        MultiPoly p;
        int terms = range(0, max_terms);
        for (int t = 0; t < terms; ++t) {
            Monomial m;
            for (VarId v : vars)
                detail::mono_set(m, v, range(0, max_deg));
            p += MultiPoly::monomial(rational(), m);
        }
        return p;
    }

    MultiPoly nonzero_poly(const std::vector<VarId>& vars, int max_deg, int max_terms)
    {
        for (;;) {
            MultiPoly p = poly(vars, max_deg, max_terms);
            if (!p.is_zero())
                return p;
        }
    }

  private:
    uint64_t state_;
};

} // namespace confal

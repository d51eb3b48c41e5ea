#ifndef CLASSRANK_BOX_HPP
#define CLASSRANK_BOX_HPP

#include <gmpxx.h>

#include "classrank/errors.hpp"

namespace classrank {

/// Inclusive rectangle of integer pairs (a, b), optionally without the
/// diagonal a = b.
struct Box {
    mpz_class a_lo, a_hi, b_lo, b_hi;
    bool include_diagonal = true;

    bool empty() const { return a_lo > a_hi || b_lo > b_hi; }

    mpz_class cell_count() const {
        if (empty()) return 0;
        mpz_class n = (a_hi - a_lo + 1) * (b_hi - b_lo + 1);
        if (!include_diagonal) {
            mpz_class dlo = a_lo > b_lo ? a_lo : b_lo;
            mpz_class dhi = a_hi < b_hi ? a_hi : b_hi;
            if (dlo <= dhi) n -= dhi - dlo + 1;
        }
        return n;
    }
};

} // namespace classrank

#endif

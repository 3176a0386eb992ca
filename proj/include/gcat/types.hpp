#pragma once

// Shared scalar types, error hierarchy and small utilities used across the
// library. All arithmetic that feeds a decision is exact: rationals are
// GMP-backed and never rounded.

#include <gmpxx.h>

#include <cctype>
#include <cstdint>
#include <functional>
#include <mutex>
#include <numeric>
#include <stdexcept>
#include <string>
#include <thread>
#include <vector>

namespace gcat {

using Integer = mpz_class;
using Rational = mpq_class;

struct error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Invalid user-facing input: unknown Cartan type, bad r, non-coprime zeta
// exponent, malformed files.
struct spec_error : error {
    using error::error;
};

// An enumeration limit (Weyl group size, coloring count, class count) was hit.
struct cap_error : error {
    using error::error;
};

// Internal consistency violation: a wall hit during folding, a vanishing
// Weyl denominator, a non-integral exponent. Reaching one of these means the
// input data contradicts the theory the library implements.
struct data_error : error {
    using error::error;
};

// Enumeration limits. The CLI can override these from flags or from the
// GCAT_MAX_ENUM environment variable.
struct Caps {
    long weyl_group = 10'000'000;  // largest Weyl group we will enumerate
    long colorings = 1'000'000;    // largest coloring sum in a bracket
    long classes = 1'000'000;      // largest |G|^m for class enumeration
};

inline bool is_integral(const Rational& q) { return q.get_den() == 1; }

inline long to_long(const Integer& z) {
    if (!z.fits_slong_p()) throw error("integer out of machine range");
    return z.get_si();
}

inline long to_long(const Rational& q) {
    if (!is_integral(q)) throw error("expected an integer, got " + q.get_str());
    return to_long(Integer(q.get_num()));
}

inline long pos_mod(long a, long m) {
    long r = a % m;
    return r < 0 ? r + m : r;
}

inline std::string rational_str(const Rational& q) { return q.get_str(); }

inline Rational parse_rational(const std::string& text) {
    std::string s;
    for (char ch : text)
        if (!std::isspace(static_cast<unsigned char>(ch))) s += ch;
    if (s.empty()) throw spec_error("empty rational literal");
    try {
        Rational q(s);
        q.canonicalize();
        return q;
    } catch (const std::invalid_argument&) {
        throw spec_error("malformed rational literal: " + text);
    }
}

// Static-partition parallel map over [0, n). Results must be written to
// preallocated slots so the output is schedule-independent.
inline void parallel_for(long n, int threads, const std::function<void(long)>& body) {
    if (threads <= 1 || n <= 1) {
        for (long i = 0; i < n; ++i) body(i);
        return;
    }
    int workers = static_cast<int>(std::min<long>(threads, n));
    std::vector<std::thread> pool;
    pool.reserve(workers);
    std::exception_ptr first_error;
    std::mutex err_mutex;
    for (int w = 0; w < workers; ++w) {
        pool.emplace_back([&, w]() {
            try {
                for (long i = w; i < n; i += workers) body(i);
            } catch (...) {
                std::lock_guard<std::mutex> lock(err_mutex);
                if (!first_error) first_error = std::current_exception();
            }
        });
    }
    for (auto& t : pool) t.join();
    if (first_error) std::rethrow_exception(first_error);
}

}  // namespace gcat

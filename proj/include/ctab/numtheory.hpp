#pragma once

// Elementary number theory over machine integers (conductors, element orders,
// class counts are all desk-scale) plus a few helpers on GMP integers.

#include <algorithm>
#include <cstdint>
#include <map>
#include <mutex>
#include <numeric>
#include <stdexcept>
#include <vector>

#include <gmpxx.h>

namespace ctab {

using Int = mpz_class;
using Rat = mpq_class;

inline long gcd_l(long a, long b) { return std::gcd(a, b); }
inline long lcm_l(long a, long b) { return std::lcm(a, b); }

inline long mod_l(long a, long n)
{
    long r = a % n;
    return r < 0 ? r + n : r;
}

inline long pow_mod(long base, long exp, long mod)
{
    if (mod == 1)
        return 0;
    long result = 1;
    base = mod_l(base, mod);
    while (exp > 0) {
        if (exp & 1)
            result = static_cast<long>((static_cast<__int128>(result) * base) % mod);
        base = static_cast<long>((static_cast<__int128>(base) * base) % mod);
        exp >>= 1;
    }
    return result;
}

// Inverse of a modulo n, gcd(a, n) = 1 required.
inline long inv_mod(long a, long n)
{
    long t = 0, new_t = 1;
    long r = n, new_r = mod_l(a, n);
    while (new_r != 0) {
        long q = r / new_r;
        std::swap(t -= q * new_t, new_t);
        std::swap(r -= q * new_r, new_r);
    }
    if (r != 1)
        throw std::invalid_argument("inv_mod: arguments not coprime");
    return mod_l(t, n);
}

inline bool is_prime(long n)
{
    if (n < 2)
        return false;
    for (long d = 2; d * d <= n; ++d)
        if (n % d == 0)
            return false;
    return true;
}

inline std::vector<std::pair<long, int>> factorize(long n)
{
    std::vector<std::pair<long, int>> f;
    for (long d = 2; d * d <= n; ++d) {
        if (n % d == 0) {
            int e = 0;
            while (n % d == 0) {
                n /= d;
                ++e;
            }
            f.emplace_back(d, e);
        }
    }
    if (n > 1)
        f.emplace_back(n, 1);
    return f;
}

inline std::vector<long> prime_divisors(long n)
{
    std::vector<long> ps;
    for (auto& [p, e] : factorize(n))
        ps.push_back(p);
    return ps;
}

inline std::vector<long> divisors(long n)
{
    std::vector<long> ds{1};
    for (auto& [p, e] : factorize(n)) {
        size_t sz = ds.size();
        long pk = 1;
        for (int i = 0; i < e; ++i) {
            pk *= p;
            for (size_t j = 0; j < sz; ++j)
                ds.push_back(ds[j] * pk);
        }
    }
    std::sort(ds.begin(), ds.end());
    return ds;
}

inline long euler_phi(long n)
{
    long r = n;
    for (auto& [p, e] : factorize(n))
        r = r / p * (p - 1);
    return r;
}

// Multiplicative order of a modulo n (gcd(a, n) = 1); ord(anything mod 1) = 1.
inline long multiplicative_order(long a, long n)
{
    if (n == 1)
        return 1;
    if (gcd_l(mod_l(a, n), n) != 1)
        throw std::invalid_argument("multiplicative_order: arguments not coprime");
    long order = euler_phi(n);
    for (long p : prime_divisors(order))
        while (order % p == 0 && pow_mod(a, order / p, n) == 1)
            order /= p;
    return order;
}

// Largest divisor of n coprime to p (the p'-part).
inline long coprime_part(long n, long p)
{
    while (n % p == 0)
        n /= p;
    return n;
}

inline int valuation(Int n, long p)
{
    if (n == 0)
        throw std::invalid_argument("valuation of zero");
    int v = 0;
    Int q, r;
    n = abs(n);
    while (true) {
        mpz_fdiv_qr_ui(q.get_mpz_t(), r.get_mpz_t(), n.get_mpz_t(), p);
        if (r != 0)
            break;
        n = q;
        ++v;
    }
    return v;
}

// n-th cyclotomic polynomial, dense integer coefficients, low degree first.
// Computed as (x^n - 1) / prod_{d | n, d < n} Phi_d by exact division.
// The cache is mutex-guarded so callers stay free of coordination duties.
inline std::vector<Int> cyclotomic_polynomial(long n)
{
    static std::map<long, std::vector<Int>> cache;
    static std::mutex cache_mutex;
    {
        std::lock_guard<std::mutex> lock(cache_mutex);
        auto it = cache.find(n);
        if (it != cache.end())
            return it->second;
    }

    for (long d : divisors(n)) {  // ascending, so dependencies are filled first
        {
            std::lock_guard<std::mutex> lock(cache_mutex);
            if (cache.count(d))
                continue;
        }
        std::vector<Int> num(d + 1, 0);
        num[0] = -1;
        num[d] = 1;
        for (long e : divisors(d)) {
            if (e == d)
                continue;
            std::vector<Int> phi_e;
            {
                std::lock_guard<std::mutex> lock(cache_mutex);
                phi_e = cache.at(e);
            }
            // exact polynomial division num /= phi_e (phi_e is monic)
            std::vector<Int> quot(num.size() - phi_e.size() + 1, 0);
            std::vector<Int> rem = num;
            for (long i = static_cast<long>(quot.size()) - 1; i >= 0; --i) {
                Int c = rem[i + phi_e.size() - 1];
                quot[i] = c;
                if (c == 0)
                    continue;
                for (size_t j = 0; j < phi_e.size(); ++j)
                    rem[i + j] -= c * phi_e[j];
            }
            num = quot;
        }
        std::lock_guard<std::mutex> lock(cache_mutex);
        cache.emplace(d, std::move(num));
    }
    std::lock_guard<std::mutex> lock(cache_mutex);
    return cache.at(n);
}

// Deterministic pseudorandom stream for property tests and reproducible search
// tie-breaking experiments.
struct SplitMix64 {
    std::uint64_t state;
    explicit SplitMix64(std::uint64_t seed) : state(seed) {}
    std::uint64_t next()
    {
        std::uint64_t z = (state += 0x9e3779b97f4a7c15ull);
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
        return z ^ (z >> 31);
    }
    // uniform in [0, bound)
    long below(long bound) { return static_cast<long>(next() % static_cast<std::uint64_t>(bound)); }
};

}  // namespace ctab

#pragma once

// Exact arithmetic in cyclotomic fields Q(zeta_n).
//
// Representation: minimal conductor n together with a sparse map
// exponent -> rational coefficient over the power basis
// { zeta_n^k : 0 <= k < phi(n) } obtained by reducing modulo Phi_n.
// Elements lying in a proper cyclotomic subfield are rewritten over the
// smaller conductor, so equal field elements have identical representations
// and operator== is plain structural comparison.

#include <cctype>
#include <cstdlib>
#include <map>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "ctab/numtheory.hpp"

namespace ctab {

class Cyclotomic {
public:
    Cyclotomic() : conductor_(1) {}
    Cyclotomic(long v) : conductor_(1)
    {
        if (v != 0)
            coeffs_[0] = Rat(v);
    }
    Cyclotomic(const Int& v) : conductor_(1)
    {
        if (v != 0)
            coeffs_[0] = Rat(v);
    }
    Cyclotomic(const Rat& v) : conductor_(1)
    {
        Rat c = v;
        c.canonicalize();  // two-argument mpq construction does not canonicalize
        if (c != 0)
            coeffs_[0] = c;
    }

    // zeta_n^k, canonicalized (so conductor may come out smaller than n).
    static Cyclotomic root_of_unity(long n, long k)
    {
        if (n < 1)
            throw std::invalid_argument("root_of_unity: order must be positive");
        std::map<long, Rat> m;
        m[mod_l(k, n)] = Rat(1);
        return Cyclotomic(n, std::move(m));
    }

    long conductor() const { return conductor_; }
    const std::map<long, Rat>& coefficients() const { return coeffs_; }

    bool is_zero() const { return coeffs_.empty(); }
    bool is_rational() const { return conductor_ == 1; }
    Rat rational_value() const
    {
        if (!is_rational())
            throw std::domain_error("rational_value: element is irrational");
        return coeffs_.empty() ? Rat(0) : coeffs_.begin()->second;
    }
    // Z[zeta_n] is the full ring of integers, so integrality of the power
    // basis coefficients decides algebraic integrality.
    bool is_algebraic_integer() const
    {
        for (auto& [e, c] : coeffs_)
            if (c.get_den() != 1)
                return false;
        return true;
    }
    Int integer_value() const
    {
        Rat q = rational_value();
        if (q.get_den() != 1)
            throw std::domain_error("integer_value: element is not an integer");
        return q.get_num();
    }

    friend Cyclotomic operator+(const Cyclotomic& a, const Cyclotomic& b)
    {
        long n = lcm_l(a.conductor_, b.conductor_);
        std::map<long, Rat> m = a.embedded(n);
        for (auto& [e, c] : b.embedded(n)) {
            auto [it, fresh] = m.emplace(e, c);
            if (!fresh)
                it->second += c;
        }
        return Cyclotomic(n, std::move(m));
    }
    friend Cyclotomic operator-(const Cyclotomic& a, const Cyclotomic& b) { return a + (-b); }
    Cyclotomic operator-() const
    {
        Cyclotomic r = *this;
        for (auto& [e, c] : r.coeffs_)
            c = -c;
        return r;
    }
    friend Cyclotomic operator*(const Cyclotomic& a, const Cyclotomic& b)
    {
        long n = lcm_l(a.conductor_, b.conductor_);
        std::map<long, Rat> am = a.embedded(n), bm = b.embedded(n), m;
        for (auto& [ea, ca] : am)
            for (auto& [eb, cb] : bm) {
                long e = mod_l(ea + eb, n);
                Rat c = ca * cb;
                auto [it, fresh] = m.emplace(e, c);
                if (!fresh)
                    it->second += c;
            }
        return Cyclotomic(n, std::move(m));
    }
    friend Cyclotomic operator*(const Rat& s, const Cyclotomic& a)
    {
        Rat sc = s;
        sc.canonicalize();
        if (sc == 0)
            return Cyclotomic();
        Cyclotomic r = a;
        for (auto& [e, c] : r.coeffs_)
            c *= sc;
        return r;
    }
    friend Cyclotomic operator*(const Cyclotomic& a, const Rat& s) { return s * a; }
    Cyclotomic& operator+=(const Cyclotomic& b) { return *this = *this + b; }
    Cyclotomic& operator-=(const Cyclotomic& b) { return *this = *this - b; }
    Cyclotomic& operator*=(const Cyclotomic& b) { return *this = *this * b; }

    friend bool operator==(const Cyclotomic& a, const Cyclotomic& b)
    {
        return a.conductor_ == b.conductor_ && a.coeffs_ == b.coeffs_;
    }
    friend bool operator!=(const Cyclotomic& a, const Cyclotomic& b) { return !(a == b); }
    // Deterministic total order, for use as container key and in tie-breaking.
    friend bool operator<(const Cyclotomic& a, const Cyclotomic& b)
    {
        if (a.conductor_ != b.conductor_)
            return a.conductor_ < b.conductor_;
        auto ia = a.coeffs_.begin(), ib = b.coeffs_.begin();
        for (; ia != a.coeffs_.end() && ib != b.coeffs_.end(); ++ia, ++ib) {
            if (ia->first != ib->first)
                return ia->first < ib->first;
            int c = cmp(ia->second, ib->second);
            if (c != 0)
                return c < 0;
        }
        return ia == a.coeffs_.end() && ib != b.coeffs_.end();
    }

    // Galois automorphism zeta_n -> zeta_n^k; requires gcd(k, conductor) = 1.
    Cyclotomic galois(long k) const
    {
        long n = conductor_;
        long kr = mod_l(k, n);
        if (gcd_l(kr, n) != 1)
            throw std::invalid_argument("galois: exponent not coprime to conductor");
        std::map<long, Rat> m;
        for (auto& [e, c] : coeffs_) {
            long en = mod_l(e * kr, n);
            auto [it, fresh] = m.emplace(en, c);
            if (!fresh)
                it->second += c;
        }
        return Cyclotomic(n, std::move(m));
    }
    Cyclotomic conjugate() const
    {
        if (conductor_ == 1)
            return *this;
        return galois(conductor_ - 1);
    }

    // Text form: sum of terms c*E(n)^k over the canonical representation,
    // ascending exponents; rationals print bare. Round-trips through parse().
    std::string to_string() const
    {
        if (coeffs_.empty())
            return "0";
        if (conductor_ == 1)
            return coeffs_.begin()->second.get_str();
        std::ostringstream os;
        bool first = true;
        for (auto& [e, c] : coeffs_) {
            Rat a = c;
            bool neg = a < 0;
            if (neg)
                a = -a;
            if (first)
                os << (neg ? "-" : "");
            else
                os << (neg ? "-" : "+");
            first = false;
            if (e == 0) {
                os << a.get_str();
                continue;
            }
            if (a != 1)
                os << a.get_str() << "*";
            os << "E(" << conductor_ << ")";
            if (e != 1)
                os << "^" << e;
        }
        return os.str();
    }

    // Parses the E(n)^k sum syntax. Accepts spaces, arbitrary exponents and
    // mixed conductors; the result is canonicalized.
    static Cyclotomic parse(const std::string& text)
    {
        size_t pos = 0;
        Cyclotomic value = parse_expr(text, pos);
        skip_ws(text, pos);
        if (pos != text.size())
            throw std::invalid_argument("cyclotomic parse error at column " +
                                        std::to_string(pos + 1) + " in '" + text + "'");
        return value;
    }

private:
    long conductor_;
    std::map<long, Rat> coeffs_;

    // Canonicalizing constructor: takes any exponent map for zeta_n.
    Cyclotomic(long n, std::map<long, Rat>&& raw) : conductor_(n), coeffs_(std::move(raw))
    {
        canonicalize();
    }

    // Re-express over Q(zeta_n) for conductor_ | n (exponent scaling only;
    // caller canonicalizes afterwards).
    std::map<long, Rat> embedded(long n) const
    {
        long f = n / conductor_;
        std::map<long, Rat> m;
        for (auto& [e, c] : coeffs_)
            m.emplace(e * f, c);
        return m;
    }

    void canonicalize()
    {
        // drop zero terms, fold exponents mod n
        {
            std::map<long, Rat> m;
            for (auto& [e, c] : coeffs_) {
                if (c == 0)
                    continue;
                long en = mod_l(e, conductor_);
                auto [it, fresh] = m.emplace(en, c);
                if (!fresh)
                    it->second += c;
            }
            coeffs_ = std::move(m);
        }
        reduce_mod_cyclotomic();
        descend_conductor();
    }

    // Reduce exponents >= phi(n) via Phi_n(zeta_n) = 0.
    void reduce_mod_cyclotomic()
    {
        long n = conductor_;
        if (n == 1)
            return;
        long phi = euler_phi(n);
        bool needs = false;
        for (auto& [e, c] : coeffs_)
            if (e >= phi) {
                needs = true;
                break;
            }
        if (!needs)
            return;
        std::vector<Int> mod = cyclotomic_polynomial(n);
        std::vector<Rat> dense(n, Rat(0));
        for (auto& [e, c] : coeffs_)
            dense[e] = c;
        for (long d = n - 1; d >= phi; --d) {
            Rat c = dense[d];
            if (c == 0)
                continue;
            dense[d] = 0;
            long shift = d - phi;
            for (long j = 0; j < phi; ++j)
                dense[shift + j] -= c * Rat(mod[j]);
        }
        coeffs_.clear();
        for (long e = 0; e < phi; ++e)
            if (dense[e] != 0)
                coeffs_[e] = dense[e];
    }

    // Minimize the conductor by stepwise prime descent. The representation is
    // Phi_n-reduced on entry and on exit.
    void descend_conductor()
    {
        bool descended = true;
        while (descended && conductor_ > 1) {
            descended = false;
            for (long p : prime_divisors(conductor_)) {
                if (try_descend(p)) {
                    descended = true;
                    break;
                }
            }
        }
        if (conductor_ == 1 && !coeffs_.empty() && coeffs_.begin()->second == 0)
            coeffs_.clear();
    }

    bool try_descend(long p)
    {
        long n = conductor_;
        long m = n / p;
        if (m % p == 0) {
            // p^2 | n: Q(zeta_m) sits on the exponents divisible by p.
            for (auto& [e, c] : coeffs_)
                if (e % p != 0)
                    return false;
            std::map<long, Rat> down;
            for (auto& [e, c] : coeffs_)
                down.emplace(e / p, c);
            conductor_ = m;
            coeffs_ = std::move(down);
            return true;
        }
        // p exactly divides n: split zeta_n^i = zeta_p^a zeta_m^b via CRT and
        // reduce the zeta_p part by Phi_p; the element descends iff only the
        // zeta_p^0 slice survives.
        long alpha = (m == 1) ? 0 : inv_mod(p, m);  // alpha*p = 1 mod m
        long beta = inv_mod(m, p);                  // beta*m = 1 mod p
        // zeta_n^i = zeta_p^{i*beta mod p} * zeta_m^{i*alpha mod m}
        std::vector<std::map<long, Rat>> slice(p);
        for (auto& [e, c] : coeffs_) {
            long a = mod_l(e * beta, p);
            long b = (m == 1) ? 0 : mod_l(e * alpha, m);
            auto [it, fresh] = slice[a].emplace(b, c);
            if (!fresh)
                it->second += c;
        }
        // zeta_p^{p-1} = -(1 + zeta_p + ... + zeta_p^{p-2})
        if (!slice[p - 1].empty() && p > 1) {
            for (long a = 0; a < p - 1; ++a)
                for (auto& [b, c] : slice[p - 1]) {
                    auto [it, fresh] = slice[a].emplace(b, -c);
                    if (!fresh)
                        it->second -= c;
                }
            slice[p - 1].clear();
        }
        // each slice is a polynomial in zeta_m: reduce and test a != 0 slices
        for (long a = 1; a < p - 1; ++a) {
            Cyclotomic probe(m, std::map<long, Rat>(slice[a]));
            if (!probe.is_zero_raw())
                return false;
        }
        Cyclotomic down(m, std::map<long, Rat>(slice[0]));
        conductor_ = down.conductor_;
        coeffs_ = std::move(down.coeffs_);
        return true;
    }

    // True iff the element is zero; usable on freshly canonicalized values.
    bool is_zero_raw() const { return coeffs_.empty(); }

    // --- parsing -----------------------------------------------------------
    static void skip_ws(const std::string& s, size_t& pos)
    {
        while (pos < s.size() && (s[pos] == ' ' || s[pos] == '\t'))
            ++pos;
    }
    static Int parse_uint(const std::string& s, size_t& pos)
    {
        skip_ws(s, pos);
        size_t start = pos;
        while (pos < s.size() && std::isdigit(static_cast<unsigned char>(s[pos])))
            ++pos;
        if (pos == start)
            throw std::invalid_argument("cyclotomic parse error: digit expected at column " +
                                        std::to_string(pos + 1) + " in '" + s + "'");
        return Int(s.substr(start, pos - start));
    }
    // term := rational | [rational '*'] 'E' '(' n ')' ['^' exp]
    static Cyclotomic parse_term(const std::string& s, size_t& pos)
    {
        skip_ws(s, pos);
        Rat coeff(1);
        bool have_coeff = false;
        if (pos < s.size() && std::isdigit(static_cast<unsigned char>(s[pos]))) {
            Int num = parse_uint(s, pos);
            Int den(1);
            skip_ws(s, pos);
            if (pos < s.size() && s[pos] == '/') {
                ++pos;
                den = parse_uint(s, pos);
                if (den == 0)
                    throw std::invalid_argument("cyclotomic parse error: zero denominator in '" + s + "'");
            }
            coeff = Rat(num, den);
            coeff.canonicalize();
            have_coeff = true;
            skip_ws(s, pos);
            if (pos < s.size() && s[pos] == '*') {
                ++pos;
                skip_ws(s, pos);
            } else {
                return Cyclotomic(coeff);
            }
        }
        if (pos >= s.size() || s[pos] != 'E') {
            if (have_coeff)
                throw std::invalid_argument("cyclotomic parse error: E(n) expected at column " +
                                            std::to_string(pos + 1) + " in '" + s + "'");
            throw std::invalid_argument("cyclotomic parse error: term expected at column " +
                                        std::to_string(pos + 1) + " in '" + s + "'");
        }
        ++pos;
        skip_ws(s, pos);
        if (pos >= s.size() || s[pos] != '(')
            throw std::invalid_argument("cyclotomic parse error: '(' expected at column " +
                                        std::to_string(pos + 1) + " in '" + s + "'");
        ++pos;
        Int n_big = parse_uint(s, pos);
        skip_ws(s, pos);
        if (pos >= s.size() || s[pos] != ')')
            throw std::invalid_argument("cyclotomic parse error: ')' expected at column " +
                                        std::to_string(pos + 1) + " in '" + s + "'");
        ++pos;
        if (n_big == 0 || !n_big.fits_slong_p())
            throw std::invalid_argument("cyclotomic parse error: bad root order in '" + s + "'");
        long n = n_big.get_si();
        long k = 1;
        skip_ws(s, pos);
        if (pos < s.size() && s[pos] == '^') {
            ++pos;
            skip_ws(s, pos);
            bool neg = false;
            if (pos < s.size() && (s[pos] == '-' || s[pos] == '+')) {
                neg = s[pos] == '-';
                ++pos;
            }
            Int e = parse_uint(s, pos);
            k = mod_l(neg ? -e.get_si() : e.get_si(), n);
        }
        return coeff * root_of_unity(n, k);
    }
    static Cyclotomic parse_expr(const std::string& s, size_t& pos)
    {
        skip_ws(s, pos);
        bool neg = false;
        if (pos < s.size() && (s[pos] == '+' || s[pos] == '-')) {
            neg = s[pos] == '-';
            ++pos;
        }
        Cyclotomic acc = parse_term(s, pos);
        if (neg)
            acc = -acc;
        while (true) {
            skip_ws(s, pos);
            if (pos >= s.size() || (s[pos] != '+' && s[pos] != '-'))
                break;
            bool minus = s[pos] == '-';
            ++pos;
            Cyclotomic t = parse_term(s, pos);
            acc = minus ? acc - t : acc + t;
        }
        return acc;
    }
};

inline Cyclotomic root_of_unity(long n, long k) { return Cyclotomic::root_of_unity(n, k); }

}  // namespace ctab

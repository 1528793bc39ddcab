#pragma once

// Finite fields GF(l^d) with a deterministic defining polynomial, and the
// reduction of cyclotomic integers modulo a fixed prime ideal above l.
//
// Determinism contract: for given (l, d) the modulus is the lexicographically
// smallest monic irreducible of degree d over GF(l), coefficients compared
// low-degree first; the distinguished root-of-unity image is the
// lexicographically smallest field element of the required exact order.
// Everything downstream (block fingerprints, congruence filters) inherits
// reproducibility from this choice.

#include <mutex>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <vector>

#include "ctab/cyclotomic.hpp"
#include "ctab/numtheory.hpp"

namespace ctab {

struct FiniteFieldElement {
    long characteristic = 0;
    long degree = 1;
    std::vector<long> value;  // size == degree, entries in [0, characteristic)

    friend bool operator==(const FiniteFieldElement&, const FiniteFieldElement&) = default;
    friend bool operator<(const FiniteFieldElement& a, const FiniteFieldElement& b)
    {
        if (a.characteristic != b.characteristic)
            return a.characteristic < b.characteristic;
        if (a.degree != b.degree)
            return a.degree < b.degree;
        return a.value < b.value;  // low-degree-first lexicographic
    }
    std::string to_string() const
    {
        std::ostringstream os;
        os << "[";
        for (long i = 0; i < degree; ++i)
            os << (i ? "," : "") << value[i];
        os << "]";
        return os.str();
    }
};

class GaloisField {
public:
    // Cached accessor; construction computes the deterministic modulus.
    static const GaloisField& get(long l, long d)
    {
        static std::map<std::pair<long, long>, GaloisField> cache;
        static std::mutex cache_mutex;
        std::lock_guard<std::mutex> lock(cache_mutex);
        auto key = std::make_pair(l, d);
        auto it = cache.find(key);
        if (it == cache.end())
            it = cache.emplace(key, GaloisField(l, d)).first;
        return it->second;
    }

    long characteristic() const { return l_; }
    long degree() const { return d_; }
    const std::vector<long>& modulus() const { return modulus_; }

    FiniteFieldElement zero() const { return element({}); }
    FiniteFieldElement one() const { return element({1}); }
    FiniteFieldElement from_integer(const Int& n) const
    {
        Int r = n % l_;
        long v = r.get_si();
        return element({mod_l(v, l_)});
    }
    // image of a rational with denominator prime to l
    FiniteFieldElement from_rational(const Rat& q) const
    {
        Int den_red = q.get_den() % l_;
        if (den_red == 0)
            throw std::domain_error("reduction undefined: denominator divisible by " +
                                    std::to_string(l_));
        long inv = inv_mod(mod_l(den_red.get_si(), l_), l_);
        Int num_red = q.get_num() % l_;
        long num = mod_l(num_red.get_si(), l_);
        return element({mod_l(num * inv % l_, l_)});
    }

    FiniteFieldElement add(const FiniteFieldElement& a, const FiniteFieldElement& b) const
    {
        check(a);
        check(b);
        std::vector<long> v(d_);
        for (long i = 0; i < d_; ++i)
            v[i] = (a.value[i] + b.value[i]) % l_;
        return element(std::move(v));
    }
    FiniteFieldElement sub(const FiniteFieldElement& a, const FiniteFieldElement& b) const
    {
        check(a);
        check(b);
        std::vector<long> v(d_);
        for (long i = 0; i < d_; ++i)
            v[i] = mod_l(a.value[i] - b.value[i], l_);
        return element(std::move(v));
    }
    FiniteFieldElement mul(const FiniteFieldElement& a, const FiniteFieldElement& b) const
    {
        check(a);
        check(b);
        std::vector<long> prod(2 * d_ - 1, 0);
        for (long i = 0; i < d_; ++i) {
            if (a.value[i] == 0)
                continue;
            for (long j = 0; j < d_; ++j)
                prod[i + j] = (prod[i + j] + a.value[i] * b.value[j]) % l_;
        }
        reduce(prod);
        prod.resize(d_);
        return element(std::move(prod));
    }
    FiniteFieldElement pow(FiniteFieldElement base, long e) const
    {
        FiniteFieldElement r = one();
        while (e > 0) {
            if (e & 1)
                r = mul(r, base);
            base = mul(base, base);
            e >>= 1;
        }
        return r;
    }
    bool is_zero(const FiniteFieldElement& a) const
    {
        for (long c : a.value)
            if (c != 0)
                return false;
        return true;
    }
    long element_order(const FiniteFieldElement& a) const
    {
        if (is_zero(a))
            throw std::domain_error("element_order of zero");
        long group = 1;
        for (long i = 0; i < d_; ++i)
            group *= l_;
        long order = group - 1;
        for (long p : prime_divisors(order))
            while (order % p == 0 && pow(a, order / p) == one())
                order /= p;
        return order;
    }
    // lexicographically smallest element of exact multiplicative order n,
    // or nullopt when n does not divide l^d - 1. The elements of exact order
    // n are the primitive powers of any one of them, so one representative
    // (found by raising lexicographically scanned elements to the cofactor)
    // pins the whole set and its minimum without sweeping the field.
    std::optional<FiniteFieldElement> smallest_of_order(long n) const
    {
        long group = 1;
        for (long i = 0; i < d_; ++i)
            group *= l_;
        if (n < 1 || (group - 1) % n != 0)
            return std::nullopt;
        long cofactor = (group - 1) / n;
        FiniteFieldElement seed;
        bool found = false;
        std::vector<long> v(d_, 0);
        while (!found) {
            long i = d_;
            while (i > 0) {
                --i;
                if (++v[i] < l_)
                    break;
                v[i] = 0;
                if (i == 0)
                    return std::nullopt;  // exhausted; cannot happen for valid n
            }
            FiniteFieldElement cand = element(std::vector<long>(v));
            if (is_zero(cand))
                continue;
            FiniteFieldElement a = pow(cand, cofactor);
            if (!is_zero(a) && element_order(a) == n) {
                seed = a;
                found = true;
            }
        }
        FiniteFieldElement best = seed;
        FiniteFieldElement cur = seed;
        for (long k = 2; k < n; ++k) {
            cur = mul(cur, seed);
            if (gcd_l(k, n) == 1 && cur < best)
                best = cur;
        }
        return best;
    }

private:
    long l_, d_;
    std::vector<long> modulus_;  // monic, size d_ + 1, low degree first

    GaloisField(long l, long d) : l_(l), d_(d)
    {
        if (!is_prime(l))
            throw std::invalid_argument("GaloisField: characteristic must be prime");
        if (d < 1)
            throw std::invalid_argument("GaloisField: degree must be positive");
        modulus_ = smallest_irreducible();
    }

    FiniteFieldElement element(std::vector<long>&& v) const
    {
        v.resize(d_, 0);
        return FiniteFieldElement{l_, d_, std::move(v)};
    }
    void check(const FiniteFieldElement& a) const
    {
        if (a.characteristic != l_ || a.degree != d_)
            throw std::invalid_argument("finite field element from a different field");
    }
    void reduce(std::vector<long>& poly) const
    {
        for (long i = static_cast<long>(poly.size()) - 1; i >= d_; --i) {
            long c = poly[i];
            if (c == 0)
                continue;
            poly[i] = 0;
            for (long j = 0; j < d_; ++j)
                poly[i - d_ + j] = mod_l(poly[i - d_ + j] - c * modulus_[j], l_);
        }
        poly.resize(d_);
    }

    // polynomial helpers over GF(l), dense low-first vectors
    static std::vector<long> poly_mul_mod(const std::vector<long>& a, const std::vector<long>& b,
                                          const std::vector<long>& mod, long l)
    {
        std::vector<long> prod(a.size() + b.size() - 1, 0);
        for (size_t i = 0; i < a.size(); ++i) {
            if (a[i] == 0)
                continue;
            for (size_t j = 0; j < b.size(); ++j)
                prod[i + j] = (prod[i + j] + a[i] * b[j]) % l;
        }
        return poly_rem(prod, mod, l);
    }
    static std::vector<long> poly_rem(std::vector<long> a, const std::vector<long>& mod, long l)
    {
        long dm = static_cast<long>(mod.size()) - 1;
        long lead_inv = inv_mod(mod[dm], l);
        for (long i = static_cast<long>(a.size()) - 1; i >= dm; --i) {
            long c = mod_l(a[i] * lead_inv, l);
            if (c == 0)
                continue;
            for (long j = 0; j <= dm; ++j)
                a[i - dm + j] = mod_l(a[i - dm + j] - c * mod[j], l);
        }
        a.resize(std::max<long>(dm, 1));
        return a;
    }
    static std::vector<long> poly_gcd(std::vector<long> a, std::vector<long> b, long l)
    {
        auto deg = [](const std::vector<long>& p) {
            for (long i = static_cast<long>(p.size()) - 1; i >= 0; --i)
                if (p[i] != 0)
                    return i;
            return -1L;
        };
        while (deg(b) >= 0) {
            if (deg(a) < deg(b)) {
                std::swap(a, b);
                continue;
            }
            std::vector<long> m(b.begin(), b.begin() + deg(b) + 1);
            a = poly_rem(a, m, l);
            std::swap(a, b);
        }
        long da = deg(a);
        a.resize(da + 1);
        return a;
    }
    // x^(l^reps) mod f via iterated Frobenius
    static std::vector<long> frobenius_power(const std::vector<long>& f, long l, long reps)
    {
        std::vector<long> x{0, 1};
        std::vector<long> t = poly_rem(x, f, l);
        for (long r = 0; r < reps; ++r) {
            // t <- t^l mod f by square-and-multiply on the exponent l
            std::vector<long> acc{1};
            std::vector<long> base = t;
            long e = l;
            while (e > 0) {
                if (e & 1)
                    acc = poly_mul_mod(acc, base, f, l);
                base = poly_mul_mod(base, base, f, l);
                e >>= 1;
            }
            t = acc;
        }
        return t;
    }
    static bool poly_equal(const std::vector<long>& a, const std::vector<long>& b)
    {
        size_t n = std::max(a.size(), b.size());
        for (size_t i = 0; i < n; ++i) {
            long ca = i < a.size() ? a[i] : 0;
            long cb = i < b.size() ? b[i] : 0;
            if (ca != cb)
                return false;
        }
        return true;
    }
    bool is_irreducible(const std::vector<long>& f) const
    {
        // f monic of degree d over GF(l): irreducible iff x^(l^d) = x mod f
        // and gcd(x^(l^(d/q)) - x, f) = 1 for every prime q | d
        if (f[0] == 0)
            return false;  // divisible by x
        std::vector<long> x{0, 1};
        std::vector<long> xd = frobenius_power(f, l_, d_);
        if (!poly_equal(xd, poly_rem(x, f, l_)))
            return false;
        for (long q : prime_divisors(d_)) {
            std::vector<long> t = frobenius_power(f, l_, d_ / q);
            // t - x
            std::vector<long> diff = t;
            if (diff.size() < 2)
                diff.resize(2, 0);
            diff[1] = mod_l(diff[1] - 1, l_);
            std::vector<long> g = poly_gcd(diff, f, l_);
            long dg = static_cast<long>(g.size()) - 1;
            while (dg > 0 && g[dg] == 0)
                --dg;
            if (dg != 0)
                return false;
        }
        return true;
    }
    std::vector<long> smallest_irreducible() const
    {
        std::vector<long> f(d_ + 1, 0);
        f[d_] = 1;
        if (d_ == 1)
            return f;  // x itself: GF(l) as residues mod x
        // iterate constant..leading-1 coefficients in lexicographic order,
        // low-degree coefficient most significant; c_0 = 0 is divisible by x,
        // so the scan starts at c_0 = 1
        std::vector<long> c(d_, 0);
        c[0] = 1;
        while (true) {
            for (long i = 0; i < d_; ++i)
                f[i] = c[i];
            if (is_irreducible(f))
                return f;
            long i = d_;
            while (i > 0) {
                --i;
                if (++c[i] < l_)
                    break;
                c[i] = 0;
                if (i == 0)
                    throw std::logic_error("no irreducible polynomial found");
            }
        }
    }
};

// Fixed prime ideal above l for reductions out of Q(zeta_n): the l'-part n' of
// the conductor, the residue degree d = ord_{n'}(l), and a distinguished
// primitive n'-th root of unity in GF(l^d).
struct PrimeIdealContext {
    long l = 0;
    long n_prime = 1;
    long d = 1;
    FiniteFieldElement image;

    const GaloisField& field() const { return GaloisField::get(l, d); }
};

// image_rank 0 picks the deterministic (lexicographically smallest) image;
// rank k > 0 picks the k-th smallest valid image, for independence checks.
inline PrimeIdealContext make_prime_ideal_context(long l, long conductor_bound, int image_rank = 0)
{
    if (!is_prime(l))
        throw std::invalid_argument("prime ideal context: l must be prime");
    PrimeIdealContext ctx;
    ctx.l = l;
    ctx.n_prime = coprime_part(conductor_bound, l);
    ctx.d = multiplicative_order(l, ctx.n_prime);
    const GaloisField& F = GaloisField::get(l, ctx.d);
    if (ctx.n_prime == 1) {
        ctx.image = F.one();
        return ctx;
    }
    if (image_rank == 0) {
        auto img = F.smallest_of_order(ctx.n_prime);
        if (!img)
            throw std::logic_error("no element of required order");
        ctx.image = *img;
        return ctx;
    }
    // all primitive n'-th roots are powers image^k with gcd(k, n') = 1
    auto base = F.smallest_of_order(ctx.n_prime);
    if (!base)
        throw std::logic_error("no element of required order");
    std::vector<FiniteFieldElement> roots;
    for (long k = 1; k < ctx.n_prime; ++k)
        if (gcd_l(k, ctx.n_prime) == 1)
            roots.push_back(F.pow(*base, k));
    std::sort(roots.begin(), roots.end());
    if (image_rank >= static_cast<int>(roots.size()))
        throw std::invalid_argument("image_rank exceeds number of valid images");
    ctx.image = roots[image_rank];
    return ctx;
}

// Ring homomorphism Z[zeta_n]_(l) -> GF(l^d): l-power roots of unity collapse
// to 1, zeta_{n'} goes to ctx.image. Rational coefficients need l-free
// denominators; offending inputs raise domain_error.
inline FiniteFieldElement reduce_mod_l(const Cyclotomic& a, const PrimeIdealContext& ctx)
{
    const GaloisField& F = ctx.field();
    long n = a.conductor();
    long lpow = 1;
    long n1 = n;
    while (n1 % ctx.l == 0) {
        n1 /= ctx.l;
        lpow *= ctx.l;
    }
    if (ctx.n_prime % n1 != 0)
        throw std::invalid_argument("reduce_mod_l: conductor not covered by context");
    long scale = ctx.n_prime / n1;
    // zeta_n^e = zeta_{l^b}^{e*beta mod lpow} * zeta_{n1}^{e*alpha mod n1}
    long alpha = (n1 == 1) ? 0 : ((lpow == 1) ? 1 : inv_mod(lpow, n1));
    FiniteFieldElement acc = F.zero();
    for (auto& [e, c] : a.coefficients()) {
        long root_exp = (n1 == 1) ? 0 : mod_l(e * alpha, n1);
        FiniteFieldElement term = F.mul(F.from_rational(c), F.pow(ctx.image, root_exp * scale));
        acc = F.add(acc, term);
    }
    return acc;
}

}  // namespace ctab

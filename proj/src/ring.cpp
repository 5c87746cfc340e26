#include "globact/ring.hpp"

#include <algorithm>
#include <numeric>
#include <sstream>

namespace globact {

namespace {

bool is_prime(std::uint64_t p) {
    if (p < 2) return false;
    for (std::uint64_t d = 2; d * d <= p; ++d)
        if (p % d == 0) return false;
    return true;
}

std::vector<std::string> split(const std::string& s, char sep) {
    std::vector<std::string> out;
    std::string cur;
    for (char c : s) {
        if (c == sep) {
            out.push_back(cur);
            cur.clear();
        } else {
            cur.push_back(c);
        }
    }
    out.push_back(cur);
    return out;
}

std::uint32_t parse_u32(const std::string& s, const std::string& what) {
    if (s.empty() || s.find_first_not_of("0123456789") != std::string::npos)
        throw ConfigError("malformed " + what + " in ring spec: '" + s + "'");
    unsigned long long v = std::stoull(s);
    if (v > 0xffffffffULL) throw ConfigError(what + " out of range: " + s);
    return static_cast<std::uint32_t>(v);
}

// Coefficient vector (length deg) from an element index, base p.
void digits_of(std::uint32_t idx, std::uint32_t p, std::uint32_t deg, std::uint32_t* out) {
    for (std::uint32_t i = 0; i < deg; ++i) {
        out[i] = idx % p;
        idx /= p;
    }
}

}  // namespace

RingPtr FiniteRing::parse(const std::string& spec) {
    auto parts = split(spec, ':');
    auto ring = std::shared_ptr<FiniteRing>(new FiniteRing());
    ring->spec_ = spec;

    if (parts[0] == "Zmod") {
        if (parts.size() != 2) throw ConfigError("expected Zmod:<m>, got '" + spec + "'");
        std::uint32_t m = parse_u32(parts[1], "modulus");
        if (m < 2) throw ConfigError("Zmod modulus must be >= 2 (zero/trivial ring rejected)");
        if (m > 1u << 20) throw ConfigError("Zmod modulus too large");
        ring->kind_ = Kind::zmod;
        ring->m_ = m;
        ring->q_ = m;
        return ring;
    }

    if (parts[0] == "GF") {
        if (parts.size() != 2) throw ConfigError("expected GF:<p>, got '" + spec + "'");
        std::uint32_t p = parse_u32(parts[1], "characteristic");
        if (!is_prime(p)) throw ConfigError("GF:<p> requires p prime, got " + parts[1]);
        ring->kind_ = Kind::prime_field;
        ring->m_ = p;
        ring->q_ = p;
        return ring;
    }

    if (parts[0] == "GFpoly") {
        if (parts.size() != 3) throw ConfigError("expected GFpoly:<p>:<c0,c1,...>, got '" + spec + "'");
        std::uint32_t p = parse_u32(parts[1], "characteristic");
        if (!is_prime(p)) throw ConfigError("GFpoly characteristic must be prime, got " + parts[1]);
        auto coeff_strs = split(parts[2], ',');
        if (coeff_strs.size() < 2)
            throw ConfigError("GFpoly quotient must have degree >= 1");
        std::vector<std::uint32_t> coeffs;
        for (const auto& cs : coeff_strs) coeffs.push_back(parse_u32(cs, "coefficient") % p);
        if (coeffs.back() != 1)
            throw ConfigError("GFpoly quotient polynomial must be monic (leading coefficient 1)");
        std::uint32_t deg = static_cast<std::uint32_t>(coeffs.size()) - 1;
        std::uint64_t q = 1;
        for (std::uint32_t i = 0; i < deg; ++i) {
            q *= p;
            if (q > 1024) throw ConfigError("GFpoly ring too large (max 1024 elements)");
        }
        ring->kind_ = Kind::poly_quotient;
        ring->m_ = p;
        ring->deg_ = deg;
        ring->quot_ = coeffs;
        ring->q_ = static_cast<std::uint32_t>(q);

        // Precompute add/mul tables by polynomial arithmetic mod (f, p).
        const std::uint32_t n = ring->q_;
        ring->add_table_.resize(std::size_t(n) * n);
        ring->mul_table_.resize(std::size_t(n) * n);
        std::vector<std::uint32_t> da(deg), db(deg), prod(2 * deg);
        for (std::uint32_t a = 0; a < n; ++a) {
            digits_of(a, p, deg, da.data());
            for (std::uint32_t b = 0; b < n; ++b) {
                digits_of(b, p, deg, db.data());
                std::uint32_t sum = 0, pw = 1;
                for (std::uint32_t i = 0; i < deg; ++i) {
                    sum += ((da[i] + db[i]) % p) * pw;
                    pw *= p;
                }
                ring->add_table_[std::size_t(a) * n + b] = sum;

                std::fill(prod.begin(), prod.end(), 0u);
                for (std::uint32_t i = 0; i < deg; ++i)
                    for (std::uint32_t j = 0; j < deg; ++j)
                        prod[i + j] = (prod[i + j] + da[i] * db[j]) % p;
                // reduce mod f: x^deg = -(c_{deg-1} x^{deg-1} + ... + c_0)
                for (std::uint32_t k = 2 * deg - 1; k >= deg; --k) {
                    std::uint32_t c = prod[k];
                    if (c == 0) continue;
                    prod[k] = 0;
                    for (std::uint32_t i = 0; i < deg; ++i) {
                        std::uint32_t sub = (c * coeffs[i]) % p;
                        prod[k - deg + i] = (prod[k - deg + i] + p - sub) % p;
                    }
                }
                std::uint32_t val = 0;
                pw = 1;
                for (std::uint32_t i = 0; i < deg; ++i) {
                    val += prod[i] * pw;
                    pw *= p;
                }
                ring->mul_table_[std::size_t(a) * n + b] = val;
            }
        }
        return ring;
    }

    throw ConfigError("unknown ring kind '" + parts[0] + "' (expected Zmod, GF, GFpoly)");
}

std::uint32_t FiniteRing::add(std::uint32_t a, std::uint32_t b) const {
    if (kind_ == Kind::poly_quotient) return add_table_[std::size_t(a) * q_ + b];
    std::uint32_t s = a + b;
    return s >= m_ ? s - m_ : s;
}

std::uint32_t FiniteRing::mul(std::uint32_t a, std::uint32_t b) const {
    if (kind_ == Kind::poly_quotient) return mul_table_[std::size_t(a) * q_ + b];
    return static_cast<std::uint32_t>((std::uint64_t(a) * b) % m_);
}

std::uint32_t FiniteRing::neg(std::uint32_t a) const {
    if (kind_ == Kind::poly_quotient) {
        std::uint32_t val = 0, pw = 1, x = a;
        for (std::uint32_t i = 0; i < deg_; ++i) {
            std::uint32_t d = x % m_;
            x /= m_;
            val += ((m_ - d) % m_) * pw;
            pw *= m_;
        }
        return val;
    }
    return a == 0 ? 0 : m_ - a;
}

std::optional<std::uint32_t> FiniteRing::inv(std::uint32_t a) const {
    if (kind_ == Kind::poly_quotient) {
        for (std::uint32_t b = 0; b < q_; ++b)
            if (mul(a, b) == 1) return b;
        return std::nullopt;
    }
    // extended gcd on representatives
    std::int64_t r0 = m_, r1 = a, s0 = 0, s1 = 1;
    while (r1 != 0) {
        std::int64_t qq = r0 / r1;
        std::int64_t r2 = r0 - qq * r1, s2 = s0 - qq * s1;
        r0 = r1; r1 = r2;
        s0 = s1; s1 = s2;
    }
    if (r0 != 1) return std::nullopt;
    std::int64_t s = s0 % m_;
    if (s < 0) s += m_;
    return static_cast<std::uint32_t>(s);
}

std::string FiniteRing::elem_str(std::uint32_t a) const {
    if (kind_ != Kind::poly_quotient) return std::to_string(a);
    std::ostringstream os;
    bool first = true;
    std::uint32_t x = a;
    for (std::uint32_t i = 0; i < deg_; ++i) {
        std::uint32_t d = x % m_;
        x /= m_;
        if (d == 0) continue;
        if (!first) os << "+";
        if (i == 0) {
            os << d;
        } else {
            if (d != 1) os << d << "*";
            os << "x";
            if (i > 1) os << "^" << i;
        }
        first = false;
    }
    if (first) os << "0";
    return os.str();
}

std::vector<std::uint32_t> FiniteRing::enumerate() const {
    std::vector<std::uint32_t> out(q_);
    std::iota(out.begin(), out.end(), 0u);
    return out;
}

RingElem arith(ArithOp op, const RingElem& a, const RingElem& b) {
    if (!a.ring->same_ring(*b.ring))
        throw DomainError("mixed-ring operands: " + a.ring->spec() + " vs " + b.ring->spec());
    switch (op) {
        case ArithOp::add: return {a.ring, a.ring->add(a.idx, b.idx)};
        case ArithOp::mul: return {a.ring, a.ring->mul(a.idx, b.idx)};
        case ArithOp::neg: return {a.ring, a.ring->neg(a.idx)};
    }
    throw DomainError("unknown arith op");
}

std::optional<RingElem> try_invert(const RingElem& a) {
    auto r = a.ring->inv(a.idx);
    if (!r) return std::nullopt;
    return RingElem{a.ring, *r};
}

}  // namespace globact

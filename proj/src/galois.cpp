#include "pgfold/galois.hpp"

#include <stdexcept>

namespace pgfold {
namespace {

uint64_t checked_pow(uint64_t p, uint32_t e, uint64_t max_order) {
    uint64_t v = 1;
    for (uint32_t i = 0; i < e; ++i) {
        if (v > max_order / p) {
            throw std::invalid_argument("field size bound exceeded: p^e > " +
                                        std::to_string(max_order));
        }
        v *= p;
    }
    return v;
}

// Multiply a packed coefficient vector by x and reduce by the monic modulus.
// reduction[i] holds the x^i coordinate of -x^e mod p.
uint64_t mul_by_x(uint64_t packed, uint64_t p, uint32_t e,
                  const std::vector<uint64_t>& pow_p,
                  const std::vector<uint32_t>& reduction) {
    const uint64_t top = packed / pow_p[e - 1];
    uint64_t shifted = (packed % pow_p[e - 1]) * p;
    if (top == 0) return shifted;
    uint64_t out = 0;
    for (uint32_t i = 0; i < e; ++i) {
        uint64_t digit = (shifted / pow_p[i]) % p;
        digit = (digit + top * reduction[i]) % p;
        out += digit * pow_p[i];
    }
    return out;
}

void validate_spec(const FieldSpec& spec) {
    if (!is_prime(spec.p)) {
        throw std::invalid_argument("field characteristic must be prime, got " +
                                    std::to_string(spec.p));
    }
    if (spec.e < 1) throw std::invalid_argument("extension degree must be >= 1");
    if (spec.poly.size() != spec.e + 1) {
        throw std::invalid_argument("polynomial must have degree e: expected " +
                                    std::to_string(spec.e + 1) + " coefficients, got " +
                                    std::to_string(spec.poly.size()));
    }
    if (spec.poly.back() != 1) {
        throw std::invalid_argument("polynomial must be monic");
    }
    for (uint32_t c : spec.poly) {
        if (c >= spec.p) {
            throw std::invalid_argument("polynomial coefficient " + std::to_string(c) +
                                        " out of range for GF(" + std::to_string(spec.p) + ")");
        }
    }
}

std::vector<uint32_t> reduction_digits(const FieldSpec& spec) {
    std::vector<uint32_t> r(spec.e);
    for (uint32_t i = 0; i < spec.e; ++i) {
        r[i] = uint32_t((spec.p - spec.poly[i]) % spec.p);
    }
    return r;
}

// Multiplicative order of x modulo the polynomial, or 0 if x never returns
// to 1 (x shares a factor with the modulus).
uint64_t order_of_x(const FieldSpec& spec, const std::vector<uint64_t>& pow_p) {
    if (spec.poly[0] == 0) return 0;  // x divides the modulus
    const uint64_t group = pow_p[spec.e] - 1;
    const auto red = reduction_digits(spec);
    uint64_t cur = 1;
    for (uint64_t i = 1; i <= group; ++i) {
        cur = mul_by_x(cur, spec.p, spec.e, pow_p, red);
        if (cur == 1) return i;
    }
    return 0;
}

}  // namespace

bool is_prime(uint64_t n) {
    if (n < 2) return false;
    for (uint64_t d = 2; d * d <= n; ++d) {
        if (n % d == 0) return false;
    }
    return true;
}

PolyCoeffs default_primitive_poly(uint64_t p, uint32_t e, uint64_t max_order) {
    if (!is_prime(p)) {
        throw std::invalid_argument("characteristic must be prime, got " + std::to_string(p));
    }
    if (e < 1) throw std::invalid_argument("extension degree must be >= 1");
    const uint64_t order = checked_pow(p, e, max_order);
    std::vector<uint64_t> pow_p(e + 1);
    pow_p[0] = 1;
    for (uint32_t i = 1; i <= e; ++i) pow_p[i] = pow_p[i - 1] * p;

    // Candidates ordered by the coefficient tuple (a_{e-1}, ..., a_0).
    for (uint64_t mask = 0; mask < order; ++mask) {
        FieldSpec cand;
        cand.p = p;
        cand.e = e;
        cand.poly.assign(e + 1, 0);
        cand.poly[e] = 1;
        uint64_t rest = mask;
        for (uint32_t i = 0; i < e; ++i) {
            cand.poly[i] = uint32_t(rest % p);
            rest /= p;
        }
        if (cand.poly[0] == 0) continue;  // x would be a zero divisor
        if (order_of_x(cand, pow_p) == order - 1) return cand.poly;
    }
    throw std::runtime_error("no primitive polynomial found for GF(" + std::to_string(p) +
                             "^" + std::to_string(e) + ")");
}

uint64_t subgroup_stride(uint64_t group_order, uint64_t subgroup_order) {
    if (subgroup_order == 0 || group_order == 0) {
        throw std::domain_error("group orders must be positive");
    }
    if (group_order % subgroup_order != 0) {
        throw std::domain_error("subgroup order " + std::to_string(subgroup_order) +
                                " does not divide group order " + std::to_string(group_order));
    }
    return group_order / subgroup_order;
}

int64_t FieldElement::log() const {
    if (is_zero()) throw std::domain_error("log of the zero element is undefined");
    return log_;
}

FiniteField FiniteField::build(FieldSpec spec, uint64_t max_order) {
    validate_spec(spec);
    FiniteField f;
    f.order_ = checked_pow(spec.p, spec.e, max_order);
    f.spec_ = std::move(spec);
    f.pow_p_.resize(f.spec_.e + 1);
    f.pow_p_[0] = 1;
    for (uint32_t i = 1; i <= f.spec_.e; ++i) f.pow_p_[i] = f.pow_p_[i - 1] * f.spec_.p;

    const uint64_t group = f.order_ - 1;
    f.exp_packed_.assign(group, 0);
    f.log_packed_.assign(f.order_, -1);
    const auto red = reduction_digits(f.spec_);

    uint64_t cur = 1;
    for (uint64_t i = 0; i < group; ++i) {
        if (f.log_packed_[cur] != -1) {
            // Returned to an earlier power before filling the table.
            const uint64_t ord = (cur == 1) ? i : 0;
            throw std::invalid_argument(
                "polynomial is not primitive: x has multiplicative order " +
                (ord ? std::to_string(ord) : std::string("undefined (x is a zero divisor)")) +
                ", need " + std::to_string(group));
        }
        f.exp_packed_[i] = cur;
        f.log_packed_[cur] = int64_t(i);
        cur = mul_by_x(cur, f.spec_.p, f.spec_.e, f.pow_p_, red);
    }
    if (cur != 1) {
        throw std::invalid_argument("polynomial is not primitive: x^" + std::to_string(group) +
                                    " != 1");
    }
    return f;
}

FieldElement FiniteField::from_log(int64_t log) const {
    const int64_t g = int64_t(group_order());
    FieldElement a;
    a.log_ = ((log % g) + g) % g;
    return a;
}

FieldElement FiniteField::from_packed(uint64_t packed) const {
    if (packed >= order_) throw std::invalid_argument("packed value out of range");
    if (packed == 0) return zero();
    return from_log(log_packed_[packed]);
}

uint64_t FiniteField::packed(FieldElement a) const {
    return a.is_zero() ? 0 : exp_packed_[uint64_t(a.log_)];
}

std::vector<uint32_t> FiniteField::coeffs(FieldElement a) const {
    std::vector<uint32_t> c(spec_.e);
    uint64_t v = packed(a);
    for (uint32_t i = 0; i < spec_.e; ++i) {
        c[i] = uint32_t(v % spec_.p);
        v /= spec_.p;
    }
    return c;
}

uint64_t FiniteField::add_packed(uint64_t a, uint64_t b) const {
    if (spec_.p == 2) return a ^ b;
    uint64_t out = 0;
    for (uint32_t i = 0; i < spec_.e; ++i) {
        const uint64_t da = (a / pow_p_[i]) % spec_.p;
        const uint64_t db = (b / pow_p_[i]) % spec_.p;
        out += ((da + db) % spec_.p) * pow_p_[i];
    }
    return out;
}

FieldElement FiniteField::add(FieldElement a, FieldElement b) const {
    return from_packed(add_packed(packed(a), packed(b)));
}

FieldElement FiniteField::neg(FieldElement a) const {
    if (a.is_zero() || spec_.p == 2) return a;
    // -1 = alpha^((p^e - 1)/2) in odd characteristic
    return mul(a, from_log(int64_t(group_order() / 2)));
}

FieldElement FiniteField::sub(FieldElement a, FieldElement b) const {
    return add(a, neg(b));
}

FieldElement FiniteField::mul(FieldElement a, FieldElement b) const {
    if (a.is_zero() || b.is_zero()) return zero();
    return from_log(a.log_ + b.log_);
}

FieldElement FiniteField::inv(FieldElement a) const {
    if (a.is_zero()) throw std::domain_error("inverse of the zero element is undefined");
    return from_log(-a.log_);
}

FieldElement FiniteField::pow(FieldElement a, int64_t n) const {
    if (a.is_zero()) {
        if (n > 0) return zero();
        if (n == 0) return one();
        throw std::domain_error("negative power of the zero element is undefined");
    }
    const int64_t g = int64_t(group_order());
    const int64_t lg = ((a.log_ % g) * (n % g)) % g;
    return from_log(lg);
}

FieldElement FiniteField::relative_trace(FieldElement x, uint32_t sub_degree) const {
    if (sub_degree == 0 || spec_.e % sub_degree != 0) {
        throw std::domain_error("subfield degree " + std::to_string(sub_degree) +
                                " does not divide " + std::to_string(spec_.e));
    }
    if (x.is_zero()) return zero();
    const uint64_t g = group_order();
    // Frobenius step: exponent multiplication by p^sub_degree mod (p^e - 1).
    uint64_t frob = 1;
    for (uint32_t i = 0; i < sub_degree; ++i) frob = (frob * spec_.p) % g;
    const uint32_t terms = spec_.e / sub_degree;
    uint64_t exp = uint64_t(x.log_) % g;
    FieldElement acc = zero();
    for (uint32_t i = 0; i < terms; ++i) {
        acc = add(acc, from_log(int64_t(exp)));
        exp = (exp * frob) % g;
    }
    return acc;
}

int64_t FiniteField::log_of_packed(uint64_t packed) const {
    if (packed >= order_) throw std::invalid_argument("packed value out of range");
    return log_packed_[packed];
}

}  // namespace pgfold

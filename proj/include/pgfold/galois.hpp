#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace pgfold {

inline constexpr uint64_t kDefaultMaxFieldOrder = uint64_t{1} << 20;

bool is_prime(uint64_t n);

/// Monic polynomial over GF(p); coefficients in ascending degree order,
/// so poly[i] is the coefficient of x^i and poly.back() == 1.
using PolyCoeffs = std::vector<uint32_t>;

struct FieldSpec {
    uint64_t p = 2;   ///< prime characteristic
    uint32_t e = 1;   ///< extension degree over GF(p)
    PolyCoeffs poly;  ///< degree-e primitive polynomial
};

/// Deterministic default: the smallest primitive monic polynomial of degree e
/// over GF(p), comparing coefficient tuples from the leading term down.
PolyCoeffs default_primitive_poly(uint64_t p, uint32_t e,
                                  uint64_t max_order = kDefaultMaxFieldOrder);

/// beta = group_order / subgroup_order. <alpha^beta> is the unique subgroup
/// of the requested order inside a cyclic group of order group_order.
/// Throws std::domain_error if subgroup_order does not divide group_order.
uint64_t subgroup_stride(uint64_t group_order, uint64_t subgroup_order);

/// Element of GF(p^e) in discrete-log form: either ZERO or the class of
/// alpha^log with log reduced into [0, p^e - 2].
class FieldElement {
public:
    constexpr FieldElement() = default;
    bool is_zero() const { return log_ == kZeroLog; }
    /// Exponent of the element; throws std::domain_error for ZERO.
    int64_t log() const;
    friend bool operator==(FieldElement, FieldElement) = default;

private:
    static constexpr int64_t kZeroLog = -1;
    int64_t log_ = kZeroLog;
    friend class FiniteField;
};

/// GF(p^e) with materialized exp/log tables. Immutable after construction;
/// safe to share across threads read-only.
class FiniteField {
public:
    FiniteField() = default;  ///< empty; usable only after build()

    /// Builds the field and verifies primitivity of spec.poly (the residue
    /// class of x must have multiplicative order p^e - 1).
    static FiniteField build(FieldSpec spec,
                             uint64_t max_order = kDefaultMaxFieldOrder);

    const FieldSpec& spec() const { return spec_; }
    uint64_t order() const { return order_; }
    uint64_t group_order() const { return order_ - 1; }

    FieldElement zero() const { return FieldElement{}; }
    FieldElement one() const { return from_log(0); }
    FieldElement alpha() const { return from_log(1); }

    /// Any integer exponent; reduced modulo p^e - 1.
    FieldElement from_log(int64_t log) const;
    /// Element from its base-p packed coefficient vector (0 packs to ZERO).
    FieldElement from_packed(uint64_t packed) const;
    uint64_t packed(FieldElement a) const;
    /// Coefficient vector of length e, entry i is the x^i coordinate.
    std::vector<uint32_t> coeffs(FieldElement a) const;

    FieldElement add(FieldElement a, FieldElement b) const;
    FieldElement neg(FieldElement a) const;
    FieldElement sub(FieldElement a, FieldElement b) const;
    FieldElement mul(FieldElement a, FieldElement b) const;
    /// Throws std::domain_error for ZERO.
    FieldElement inv(FieldElement a) const;
    FieldElement pow(FieldElement a, int64_t n) const;

    /// Relative trace onto the subfield GF(p^sub_degree):
    /// sum of x^(p^(sub_degree*i)) for i in [0, e/sub_degree).
    /// Throws std::domain_error if sub_degree does not divide e.
    FieldElement relative_trace(FieldElement x, uint32_t sub_degree) const;

    /// exp table: entry i is the packed coefficient vector of alpha^i.
    const std::vector<uint64_t>& exp_table() const { return exp_packed_; }
    /// log of a packed value, -1 for the zero element.
    int64_t log_of_packed(uint64_t packed) const;

private:
    FieldSpec spec_;
    uint64_t order_ = 0;
    std::vector<uint64_t> pow_p_;       // p^i for i in [0, e]
    std::vector<uint64_t> exp_packed_;  // size p^e - 1
    std::vector<int64_t> log_packed_;   // size p^e, -1 for zero

    uint64_t add_packed(uint64_t a, uint64_t b) const;
};

}  // namespace pgfold

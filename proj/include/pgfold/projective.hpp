#pragma once

#include <cstdint>
#include <utility>
#include <vector>

#include "pgfold/galois.hpp"

namespace pgfold {

/// Number of l-dimensional projective subspaces inside an n-dimensional one:
///   phi(n,l,s) = [(s^{n+1}-1)(s^n-1)...(s^{n-l+1}-1)] / [(s-1)(s^2-1)...(s^{l+1}-1)]
/// l = -1 is the empty product and yields 1. Exact integer arithmetic;
/// throws std::invalid_argument on bad ranges, std::overflow_error if the
/// result leaves 64 bits.
uint64_t phi(int64_t n, int64_t l, uint64_t s);

struct ProjParams {
    uint32_t m = 1;  ///< projective dimension
    uint64_t q = 2;  ///< base field order
    uint64_t p = 2;  ///< q = p^b
    uint32_t b = 1;

    /// Validates m >= 1 and q a prime power; derives p and b.
    static ProjParams make(uint32_t m, uint64_t q);
    uint32_t field_degree() const { return b * (m + 1); }
    uint64_t num_points() const;  ///< (q^{m+1}-1)/(q-1)
};

/// A projective subspace held as an explicit point set.
struct Flat {
    int32_t dim = -1;             ///< projective dimension
    std::vector<uint32_t> points; ///< sorted canonical point indices
    std::vector<uint32_t> basis;  ///< representative exponents of a spanning set
};

/// P(m, GF(q)) backed by GF(q^{m+1}) in discrete-log form. Point i is the
/// class {alpha^(i + jN)}, N = (q^{m+1}-1)/(q-1); hyperplane h is the set
/// {x : Tr(alpha^h * alpha^x) = 0} with the relative trace onto GF(q).
/// Immutable after construction.
class ProjectiveSpace {
public:
    ProjectiveSpace() = default;  ///< empty; usable only after build()

    static ProjectiveSpace build(ProjParams params, PolyCoeffs poly_override = {},
                                 uint64_t max_order = kDefaultMaxFieldOrder);

    const ProjParams& params() const { return params_; }
    const FiniteField& field() const { return field_; }
    uint32_t num_points() const { return n_; }
    uint32_t num_hyperplanes() const { return n_; }
    uint64_t vertex_degree() const { return degree_; }

    bool incident(uint32_t point, uint32_t hyperplane) const {
        return trace_zero_[size_t((point + hyperplane) % n_)];
    }
    std::vector<uint32_t> hyperplane_points(uint32_t h) const;
    std::vector<uint32_t> point_hyperplanes(uint32_t x) const;

    /// Canonical index of a nonzero element's point class.
    uint32_t point_of(FieldElement v) const;

    /// Smallest flat containing the given points: closure of their
    /// representative vectors under addition and GF(q) scaling.
    Flat span(const std::vector<uint32_t>& points) const;

    bool flat_in_hyperplane(const Flat& f, uint32_t h) const;
    std::vector<uint32_t> hyperplanes_containing(const Flat& f) const;

    /// Image of a flat under multiplication by alpha^offset.
    Flat shift(const Flat& f, uint32_t offset) const;

    /// Hyperplanes containing a flat of the given projective dimension
    /// (count only; 0 for the whole space).
    uint64_t hyperplanes_through_dim(int32_t flat_dim) const;

private:
    ProjParams params_;
    FiniteField field_;
    uint32_t n_ = 0;
    uint64_t degree_ = 0;
    std::vector<bool> trace_zero_;        // s in [0,N): Tr(alpha^s) == 0
    std::vector<uint32_t> trace_zero_set_; // sorted list of the same
};

/// Regular balanced bipartite point-hyperplane incidence graph with a dense
/// point-major edge enumeration.
struct IncidenceGraph {
    uint32_t n = 0;
    uint32_t degree = 0;
    std::vector<std::vector<uint32_t>> point_adj;  // point -> sorted hyperplanes
    std::vector<std::vector<uint32_t>> hyper_adj;  // hyperplane -> sorted points
    std::vector<std::pair<uint32_t, uint32_t>> edges;  // index -> (point, hyperplane)

    uint64_t num_edges() const { return edges.size(); }
    /// Dense index of edge (point, hyperplane); throws if not incident.
    uint64_t edge_index(uint32_t point, uint32_t hyperplane) const;
};

IncidenceGraph incidence_graph(const ProjectiveSpace& space);

}  // namespace pgfold

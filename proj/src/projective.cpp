#include "pgfold/projective.hpp"

#include <algorithm>
#include <stdexcept>
#include <unordered_set>

namespace pgfold {
namespace {

using u128 = unsigned __int128;

u128 checked_mul(u128 a, u128 b) {
    if (a != 0 && b > ~u128{0} / a) throw std::overflow_error("phi: product overflow");
    return a * b;
}

u128 pow_u128(uint64_t s, int64_t e) {
    u128 v = 1;
    for (int64_t i = 0; i < e; ++i) v = checked_mul(v, s);
    return v;
}

uint64_t gcd_u128(u128 a, u128 b) {
    while (b != 0) {
        u128 t = a % b;
        a = b;
        b = t;
    }
    return uint64_t(a);
}

}  // namespace

uint64_t phi(int64_t n, int64_t l, uint64_t s) {
    if (s < 2) throw std::invalid_argument("phi: s must be >= 2");
    if (l < -1 || l > n || n < 0) {
        throw std::invalid_argument("phi: need -1 <= l <= n and n >= 0");
    }
    u128 num = 1, den = 1;
    for (int64_t i = 0; i <= l; ++i) {
        num = checked_mul(num, pow_u128(s, n + 1 - i) - 1);
        den = checked_mul(den, pow_u128(s, i + 1) - 1);
        const u128 g = gcd_u128(num, den);
        num /= g;
        den /= g;
    }
    if (den != 1) throw std::logic_error("phi: non-integral result");
    if (num > ~uint64_t{0}) throw std::overflow_error("phi: result exceeds 64 bits");
    return uint64_t(num);
}

ProjParams ProjParams::make(uint32_t m, uint64_t q) {
    if (m < 1) throw std::invalid_argument("projective dimension must be >= 1");
    if (q < 2) throw std::invalid_argument("base field order must be >= 2");
    ProjParams pp;
    pp.m = m;
    pp.q = q;
    uint64_t p = 2;
    while (q % p != 0) {
        ++p;
        if (p * p > q) {
            p = q;
            break;
        }
    }
    uint32_t b = 0;
    uint64_t rest = q;
    while (rest % p == 0) {
        rest /= p;
        ++b;
    }
    if (rest != 1) {
        throw std::invalid_argument("base field order " + std::to_string(q) +
                                    " is not a prime power");
    }
    pp.p = p;
    pp.b = b;
    return pp;
}

uint64_t ProjParams::num_points() const {
    uint64_t qm1 = 1;  // q^{m+1}
    for (uint32_t i = 0; i <= m; ++i) qm1 *= q;
    return (qm1 - 1) / (q - 1);
}

ProjectiveSpace ProjectiveSpace::build(ProjParams params, PolyCoeffs poly_override,
                                       uint64_t max_order) {
    ProjectiveSpace s;
    s.params_ = params;
    FieldSpec fs;
    fs.p = params.p;
    fs.e = params.field_degree();
    fs.poly = poly_override.empty() ? default_primitive_poly(params.p, fs.e, max_order)
                                    : std::move(poly_override);
    s.field_ = FiniteField::build(std::move(fs), max_order);

    const uint64_t n64 = params.num_points();
    if (phi(params.m, 0, params.q) != n64) {
        throw std::logic_error("point count disagrees with phi(m,0,q)");
    }
    s.n_ = uint32_t(n64);
    s.degree_ = phi(int64_t(params.m) - 1, 0, params.q);

    s.trace_zero_.assign(s.n_, false);
    for (uint32_t i = 0; i < s.n_; ++i) {
        if (s.field_.relative_trace(s.field_.from_log(i), params.b).is_zero()) {
            s.trace_zero_[i] = true;
            s.trace_zero_set_.push_back(i);
        }
    }
    if (s.trace_zero_set_.size() != s.degree_) {
        throw std::logic_error("trace-zero set size disagrees with phi(m-1,0,q)");
    }
    return s;
}

std::vector<uint32_t> ProjectiveSpace::hyperplane_points(uint32_t h) const {
    std::vector<uint32_t> pts;
    pts.reserve(trace_zero_set_.size());
    for (uint32_t d : trace_zero_set_) pts.push_back((d + n_ - h % n_) % n_);
    std::sort(pts.begin(), pts.end());
    return pts;
}

std::vector<uint32_t> ProjectiveSpace::point_hyperplanes(uint32_t x) const {
    return hyperplane_points(x);  // the trace form is symmetric in the two sides
}

uint32_t ProjectiveSpace::point_of(FieldElement v) const {
    if (v.is_zero()) throw std::domain_error("the zero vector has no point class");
    return uint32_t(uint64_t(v.log()) % n_);
}

Flat ProjectiveSpace::span(const std::vector<uint32_t>& points) const {
    if (points.empty()) throw std::invalid_argument("span of an empty point set");
    const uint64_t scalar_stride = n_;  // alpha^N generates GF(q)*
    std::unordered_set<int64_t> seen;   // logs, -1 for zero
    seen.insert(-1);
    std::vector<FieldElement> elems = {field_.zero()};
    std::vector<uint32_t> basis;
    for (uint32_t px : points) {
        if (px >= n_) throw std::invalid_argument("point index out of range");
        FieldElement v = field_.from_log(px);
        if (seen.count(v.log())) continue;
        basis.push_back(px);
        std::vector<FieldElement> grown;
        grown.reserve(elems.size() * size_t(params_.q));
        for (FieldElement e : elems) {
            grown.push_back(e);
            for (uint64_t j = 0; j + 1 < params_.q; ++j) {
                grown.push_back(field_.add(e, field_.from_log(int64_t(px + j * scalar_stride))));
            }
        }
        elems = std::move(grown);
        seen.clear();
        for (FieldElement e : elems) seen.insert(e.is_zero() ? -1 : e.log());
    }
    Flat f;
    f.dim = int32_t(basis.size()) - 1;
    f.basis = std::move(basis);
    for (FieldElement e : elems) {
        if (!e.is_zero()) f.points.push_back(point_of(e));
    }
    std::sort(f.points.begin(), f.points.end());
    f.points.erase(std::unique(f.points.begin(), f.points.end()), f.points.end());
    if (f.points.size() != phi(f.dim, 0, params_.q)) {
        throw std::logic_error("span: point count disagrees with phi(dim,0,q)");
    }
    return f;
}

bool ProjectiveSpace::flat_in_hyperplane(const Flat& f, uint32_t h) const {
    for (uint32_t x : f.points) {
        if (!incident(x, h)) return false;
    }
    return true;
}

std::vector<uint32_t> ProjectiveSpace::hyperplanes_containing(const Flat& f) const {
    std::vector<uint32_t> out;
    for (uint32_t h = 0; h < n_; ++h) {
        if (flat_in_hyperplane(f, h)) out.push_back(h);
    }
    return out;
}

Flat ProjectiveSpace::shift(const Flat& f, uint32_t offset) const {
    Flat g;
    g.dim = f.dim;
    g.points.reserve(f.points.size());
    for (uint32_t x : f.points) g.points.push_back((x + offset) % n_);
    std::sort(g.points.begin(), g.points.end());
    g.basis.reserve(f.basis.size());
    for (uint32_t x : f.basis) g.basis.push_back((x + offset) % n_);
    return g;
}

uint64_t ProjectiveSpace::hyperplanes_through_dim(int32_t flat_dim) const {
    const int32_t m = int32_t(params_.m);
    if (flat_dim < 0 || flat_dim > m) throw std::invalid_argument("flat dimension out of range");
    if (flat_dim == m) return 0;
    return phi(m - flat_dim - 1, m - flat_dim - 2, params_.q);
}

uint64_t IncidenceGraph::edge_index(uint32_t point, uint32_t hyperplane) const {
    const auto& adj = point_adj.at(point);
    auto it = std::lower_bound(adj.begin(), adj.end(), hyperplane);
    if (it == adj.end() || *it != hyperplane) {
        throw std::invalid_argument("not an edge: point " + std::to_string(point) +
                                    ", hyperplane " + std::to_string(hyperplane));
    }
    return uint64_t(point) * degree + uint64_t(it - adj.begin());
}

IncidenceGraph incidence_graph(const ProjectiveSpace& space) {
    IncidenceGraph g;
    g.n = space.num_points();
    g.degree = uint32_t(space.vertex_degree());
    g.point_adj.resize(g.n);
    g.hyper_adj.resize(g.n);
    for (uint32_t x = 0; x < g.n; ++x) g.point_adj[x] = space.point_hyperplanes(x);
    for (uint32_t h = 0; h < g.n; ++h) g.hyper_adj[h] = space.hyperplane_points(h);
    g.edges.reserve(size_t(g.n) * g.degree);
    for (uint32_t x = 0; x < g.n; ++x) {
        if (g.point_adj[x].size() != g.degree) {
            throw std::logic_error("incidence graph is not regular");
        }
        for (uint32_t h : g.point_adj[x]) g.edges.emplace_back(x, h);
    }
    for (uint32_t h = 0; h < g.n; ++h) {
        if (g.hyper_adj[h].size() != g.degree) {
            throw std::logic_error("incidence graph is not regular");
        }
    }
    return g;
}

}  // namespace pgfold

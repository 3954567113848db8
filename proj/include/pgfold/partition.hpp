#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "pgfold/projective.hpp"

namespace pgfold {

enum class FoldCase { kOdd, kEvenFactorable };

/// Derived parameters of a coset-decomposition spread with blocks of
/// projective dimension k.
struct FoldParams {
    uint32_t k = 0;               ///< projective dimension of each block
    uint32_t t = 2;               ///< (m+1)/(k+1)
    FoldCase fold_case = FoldCase::kOdd;
    uint64_t num_blocks = 0;      ///< B = (q^{m+1}-1)/(q^{k+1}-1)
    uint64_t stride = 0;          ///< coset stride beta (equals B)
    uint64_t points_per_block = 0;

    /// Throws std::invalid_argument unless (k+1) divides (m+1) with quotient >= 2.
    static FoldParams derive(const ProjParams& proj, uint32_t k);
};

struct SpreadPartition {
    FoldParams fold;
    std::vector<Flat> blocks;                           ///< S_0..S_{B-1}
    std::vector<Flat> carriers;                         ///< T_0..T_{B-1}, S_i inside T_i
    std::vector<std::vector<uint32_t>> hyperplane_groups;  ///< group i = {h : T_i in h}
    std::vector<uint32_t> group_of;                     ///< hyperplane -> group index
    bool equivariant = false;                           ///< carriers are alpha-shifts of T_0
};

/// Coset decomposition of the point set: block i is the point reduction of
/// {alpha^(i + j*beta)}, a flat of projective dimension k.
std::vector<Flat> coset_point_partition(const ProjectiveSpace& space, uint32_t k);

/// t = 2: carriers are the blocks themselves; group i collects the
/// hyperplanes containing block i.
std::pair<std::vector<Flat>, std::vector<std::vector<uint32_t>>> build_carriers_odd(
    const ProjectiveSpace& space, const std::vector<Flat>& blocks);

/// t >= 3: carrier i is a span of (t-1) blocks containing S_i. Equivariant
/// alpha-shift assignment when the orbit of T_0 has B distinct members,
/// otherwise a deterministic maximum matching over all distinct carriers.
std::pair<std::vector<Flat>, std::vector<std::vector<uint32_t>>> build_carriers_even(
    const ProjectiveSpace& space, const std::vector<Flat>& blocks);

/// The matching fallback on its own: enumerate all distinct (t-1)-block
/// spans, then match block i to a carrier containing S_i (blocks in index
/// order, carriers in point-set order).
std::pair<std::vector<Flat>, std::vector<std::vector<uint32_t>>> build_carriers_even_matching(
    const ProjectiveSpace& space, const std::vector<Flat>& blocks);

SpreadPartition build_partition(const ProjectiveSpace& space, uint32_t k);

/// Round profile of the fold: d[j] is the number of hyperplanes of group
/// (i+j) mod B incident to a point of block i, padded to the per-round
/// maximum when the counts are not uniform.
struct DegreeProfile {
    std::vector<uint32_t> d;
    bool uniform = true;
    uint64_t deviations = 0;  ///< (unit, point, round) cells below d[round]
    uint64_t total = 0;       ///< sum of d
};

DegreeProfile degree_profile(const ProjectiveSpace& space, const SpreadPartition& part);

struct CheckEntry {
    std::string name;
    bool pass = false;
    std::string detail;
};

struct LemmaReport {
    std::vector<CheckEntry> entries;
    bool all_pass() const;
};

/// Exhaustive structural checks behind the fold schedules: off-carrier
/// incidence counts, inside-or-disjoint blocks, distinct two-block spans,
/// pairwise carrier intersections, cover/closure and the degree identity.
LemmaReport verify_spread_lemmas(const ProjectiveSpace& space, const SpreadPartition& part);

}  // namespace pgfold

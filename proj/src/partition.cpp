#include "pgfold/partition.hpp"

#include <algorithm>
#include <map>
#include <set>
#include <stdexcept>

namespace pgfold {
namespace {

uint64_t ipow(uint64_t base, uint32_t e) {
    uint64_t v = 1;
    for (uint32_t i = 0; i < e; ++i) v *= base;
    return v;
}

std::vector<bool> point_mask(const ProjectiveSpace& space, const Flat& f) {
    std::vector<bool> mask(space.num_points(), false);
    for (uint32_t x : f.points) mask[x] = true;
    return mask;
}

bool block_inside(const std::vector<bool>& carrier_mask, const Flat& block) {
    for (uint32_t x : block.points) {
        if (!carrier_mask[x]) return false;
    }
    return true;
}

bool block_disjoint(const std::vector<bool>& carrier_mask, const Flat& block) {
    for (uint32_t x : block.points) {
        if (carrier_mask[x]) return false;
    }
    return true;
}

// Hyperplane groups induced by the carriers: group i = {h : T_i inside h}.
// Verifies that the groups are pairwise disjoint, cover every hyperplane and
// have points_per_block members each.
std::vector<std::vector<uint32_t>> group_hyperplanes(const ProjectiveSpace& space,
                                                     const std::vector<Flat>& carriers,
                                                     uint64_t points_per_block) {
    const uint32_t n = space.num_hyperplanes();
    std::vector<std::vector<uint32_t>> groups(carriers.size());
    std::vector<int64_t> owner(n, -1);
    for (size_t i = 0; i < carriers.size(); ++i) {
        for (uint32_t h = 0; h < n; ++h) {
            if (!space.flat_in_hyperplane(carriers[i], h)) continue;
            if (owner[h] != -1) {
                throw std::logic_error("hyperplane " + std::to_string(h) +
                                       " contained in carriers " + std::to_string(owner[h]) +
                                       " and " + std::to_string(i));
            }
            owner[h] = int64_t(i);
            groups[i].push_back(h);
        }
    }
    for (uint32_t h = 0; h < n; ++h) {
        if (owner[h] == -1) {
            throw std::logic_error("hyperplane " + std::to_string(h) +
                                   " not covered by any carrier");
        }
    }
    for (size_t i = 0; i < groups.size(); ++i) {
        if (groups[i].size() != points_per_block) {
            throw std::logic_error("hyperplane group " + std::to_string(i) + " has " +
                                   std::to_string(groups[i].size()) + " members, expected " +
                                   std::to_string(points_per_block));
        }
    }
    return groups;
}

}  // namespace

FoldParams FoldParams::derive(const ProjParams& proj, uint32_t k) {
    const uint32_t mp1 = proj.m + 1;
    const uint32_t kp1 = k + 1;
    if (mp1 % kp1 != 0) {
        throw std::invalid_argument("block dimension incompatible: " + std::to_string(kp1) +
                                    " does not divide " + std::to_string(mp1));
    }
    FoldParams fp;
    fp.k = k;
    fp.t = mp1 / kp1;
    if (fp.t < 2) {
        throw std::invalid_argument("block dimension " + std::to_string(k) +
                                    " leaves no fold: need (m+1)/(k+1) >= 2");
    }
    fp.fold_case = (fp.t == 2) ? FoldCase::kOdd : FoldCase::kEvenFactorable;
    const uint64_t group = ipow(proj.q, mp1) - 1;
    const uint64_t sub = ipow(proj.q, kp1) - 1;
    fp.stride = subgroup_stride(group, sub);
    fp.num_blocks = fp.stride;
    fp.points_per_block = sub / (proj.q - 1);
    if (fp.num_blocks * fp.points_per_block != proj.num_points()) {
        throw std::logic_error("fold parameters inconsistent with point count");
    }
    return fp;
}

std::vector<Flat> coset_point_partition(const ProjectiveSpace& space, uint32_t k) {
    const FoldParams fp = FoldParams::derive(space.params(), k);
    const uint32_t n = space.num_points();
    const uint32_t B = uint32_t(fp.num_blocks);
    std::vector<Flat> blocks;
    blocks.reserve(B);
    for (uint32_t i = 0; i < B; ++i) {
        std::vector<uint32_t> pts;
        pts.reserve(fp.points_per_block);
        for (uint64_t j = 0; j < fp.points_per_block; ++j) {
            pts.push_back(uint32_t((i + j * fp.stride) % n));
        }
        std::sort(pts.begin(), pts.end());
        Flat f = space.span(pts);
        if (f.points != pts || f.dim != int32_t(k)) {
            throw std::logic_error("coset block " + std::to_string(i) +
                                   " is not a closed flat of dimension " + std::to_string(k));
        }
        blocks.push_back(std::move(f));
    }
    return blocks;
}

std::pair<std::vector<Flat>, std::vector<std::vector<uint32_t>>> build_carriers_odd(
    const ProjectiveSpace& space, const std::vector<Flat>& blocks) {
    const FoldParams fp = FoldParams::derive(space.params(), uint32_t(blocks.at(0).dim));
    if (fp.t != 2) {
        throw std::invalid_argument("odd-case carriers need t = 2, got t = " +
                                    std::to_string(fp.t));
    }
    std::vector<Flat> carriers = blocks;
    auto groups = group_hyperplanes(space, carriers, fp.points_per_block);
    return {std::move(carriers), std::move(groups)};
}

std::pair<std::vector<Flat>, std::vector<std::vector<uint32_t>>> build_carriers_even(
    const ProjectiveSpace& space, const std::vector<Flat>& blocks) {
    const FoldParams fp = FoldParams::derive(space.params(), uint32_t(blocks.at(0).dim));
    if (fp.t < 3) {
        throw std::invalid_argument("even-case carriers need t >= 3, got t = " +
                                    std::to_string(fp.t));
    }
    const uint32_t B = uint32_t(fp.num_blocks);
    const uint32_t m = space.params().m;
    const int32_t carrier_dim = int32_t(m - fp.k - 1);

    // T_0: span of S_0 and the first other blocks, in index order, that are
    // not already inside the running span.
    std::vector<uint32_t> pts = blocks[0].points;
    Flat t0 = blocks[0];
    uint32_t used = 1;
    for (uint32_t cand = 1; cand < B && used < fp.t - 1; ++cand) {
        auto mask = point_mask(space, t0);
        if (block_inside(mask, blocks[cand])) continue;
        pts.insert(pts.end(), blocks[cand].points.begin(), blocks[cand].points.end());
        t0 = space.span(pts);
        ++used;
    }
    if (t0.dim != carrier_dim) {
        throw std::logic_error("seed carrier has dimension " + std::to_string(t0.dim) +
                               ", expected " + std::to_string(carrier_dim));
    }

    std::vector<Flat> carriers(B);
    std::set<std::vector<uint32_t>> distinct;
    for (uint32_t i = 0; i < B; ++i) {
        carriers[i] = space.shift(t0, i);
        distinct.insert(carriers[i].points);
    }
    if (distinct.size() != B) return build_carriers_even_matching(space, blocks);

    // Every carrier must contain its block.
    for (uint32_t i = 0; i < B; ++i) {
        if (!block_inside(point_mask(space, carriers[i]), blocks[i])) {
            throw std::logic_error("carrier " + std::to_string(i) + " does not contain block " +
                                   std::to_string(i));
        }
    }
    auto groups = group_hyperplanes(space, carriers, fp.points_per_block);
    return {std::move(carriers), std::move(groups)};
}

std::pair<std::vector<Flat>, std::vector<std::vector<uint32_t>>> build_carriers_even_matching(
    const ProjectiveSpace& space, const std::vector<Flat>& blocks) {
    const FoldParams fp = FoldParams::derive(space.params(), uint32_t(blocks.at(0).dim));
    if (fp.t < 3) {
        throw std::invalid_argument("even-case carriers need t >= 3, got t = " +
                                    std::to_string(fp.t));
    }
    const uint32_t B = uint32_t(fp.num_blocks);
    const int32_t carrier_dim = int32_t(space.params().m - fp.k - 1);

    std::map<std::vector<uint32_t>, Flat> by_points;
    std::vector<uint32_t> pick;
    const uint32_t want = fp.t - 1;
    constexpr uint64_t kComboCap = 5'000'000;
    uint64_t combos = 0;
    auto recurse = [&](auto&& self, uint32_t start) -> void {
        if (pick.size() == want) {
            if (++combos > kComboCap) {
                throw std::runtime_error("carrier enumeration too large");
            }
            std::vector<uint32_t> up;
            for (uint32_t b : pick) {
                up.insert(up.end(), blocks[b].points.begin(), blocks[b].points.end());
            }
            Flat f = space.span(up);
            if (f.dim == carrier_dim) by_points.emplace(f.points, std::move(f));
            return;
        }
        for (uint32_t nxt = start; nxt < B; ++nxt) {
            pick.push_back(nxt);
            self(self, nxt + 1);
            pick.pop_back();
        }
    };
    recurse(recurse, 0);

    std::vector<const Flat*> cands;
    cands.reserve(by_points.size());
    for (const auto& [_, f] : by_points) cands.push_back(&f);

    // Kuhn's matching: block -> candidate carrier containing it.
    std::vector<std::vector<uint32_t>> adj(B);
    for (uint32_t i = 0; i < B; ++i) {
        for (uint32_t c = 0; c < cands.size(); ++c) {
            if (block_inside(point_mask(space, *cands[c]), blocks[i])) adj[i].push_back(c);
        }
    }
    std::vector<int64_t> cand_owner(cands.size(), -1);
    std::vector<char> visited;
    auto augment = [&](auto&& self, uint32_t i) -> bool {
        for (uint32_t c : adj[i]) {
            if (visited[c]) continue;
            visited[c] = 1;
            if (cand_owner[c] == -1 || self(self, uint32_t(cand_owner[c]))) {
                cand_owner[c] = i;
                return true;
            }
        }
        return false;
    };
    std::vector<int64_t> carrier_of(B, -1);
    for (uint32_t i = 0; i < B; ++i) {
        visited.assign(cands.size(), 0);
        if (!augment(augment, i)) {
            throw std::logic_error("carrier matching failed at block " + std::to_string(i) +
                                   ": " + std::to_string(cands.size()) +
                                   " distinct carriers for " + std::to_string(B) + " blocks");
        }
    }
    for (uint32_t c = 0; c < cands.size(); ++c) {
        if (cand_owner[c] != -1) carrier_of[size_t(cand_owner[c])] = c;
    }
    std::vector<Flat> carriers(B);
    for (uint32_t i = 0; i < B; ++i) carriers[i] = *cands[size_t(carrier_of[i])];
    auto groups = group_hyperplanes(space, carriers, fp.points_per_block);
    return {std::move(carriers), std::move(groups)};
}

SpreadPartition build_partition(const ProjectiveSpace& space, uint32_t k) {
    SpreadPartition part;
    part.fold = FoldParams::derive(space.params(), k);
    part.blocks = coset_point_partition(space, k);
    if (part.fold.fold_case == FoldCase::kOdd) {
        auto [carriers, groups] = build_carriers_odd(space, part.blocks);
        part.carriers = std::move(carriers);
        part.hyperplane_groups = std::move(groups);
        part.equivariant = true;
    } else {
        auto [carriers, groups] = build_carriers_even(space, part.blocks);
        part.carriers = std::move(carriers);
        part.hyperplane_groups = std::move(groups);
        // Shift structure holds when carrier i is carrier 0 shifted by i.
        part.equivariant = true;
        for (uint32_t i = 0; i < part.carriers.size() && part.equivariant; ++i) {
            part.equivariant = part.carriers[i].points ==
                               space.shift(part.carriers[0], i).points;
        }
    }
    part.group_of.assign(space.num_hyperplanes(), 0);
    for (uint32_t g = 0; g < part.hyperplane_groups.size(); ++g) {
        for (uint32_t h : part.hyperplane_groups[g]) part.group_of[h] = g;
    }
    return part;
}

DegreeProfile degree_profile(const ProjectiveSpace& space, const SpreadPartition& part) {
    const uint32_t B = uint32_t(part.fold.num_blocks);
    DegreeProfile prof;
    prof.d.assign(B, 0);
    std::vector<uint32_t> min_d(B, ~uint32_t{0});
    for (uint32_t i = 0; i < B; ++i) {
        for (uint32_t x : part.blocks[i].points) {
            for (uint32_t j = 0; j < B; ++j) {
                uint32_t cnt = 0;
                for (uint32_t h : part.hyperplane_groups[(i + j) % B]) {
                    if (space.incident(x, h)) ++cnt;
                }
                prof.d[j] = std::max(prof.d[j], cnt);
                min_d[j] = std::min(min_d[j], cnt);
            }
        }
    }
    for (uint32_t j = 0; j < B; ++j) {
        prof.total += prof.d[j];
        if (min_d[j] != prof.d[j]) prof.uniform = false;
    }
    if (!prof.uniform) {
        for (uint32_t i = 0; i < B; ++i) {
            for (uint32_t x : part.blocks[i].points) {
                for (uint32_t j = 0; j < B; ++j) {
                    uint32_t cnt = 0;
                    for (uint32_t h : part.hyperplane_groups[(i + j) % B]) {
                        if (space.incident(x, h)) ++cnt;
                    }
                    if (cnt != prof.d[j]) ++prof.deviations;
                }
            }
        }
    }
    return prof;
}

bool LemmaReport::all_pass() const {
    for (const auto& e : entries) {
        if (!e.pass) return false;
    }
    return true;
}

LemmaReport verify_spread_lemmas(const ProjectiveSpace& space, const SpreadPartition& part) {
    LemmaReport rep;
    const auto& proj = space.params();
    const FoldParams& fp = part.fold;
    const uint32_t B = uint32_t(fp.num_blocks);
    const uint32_t n = space.num_points();
    auto add = [&rep](std::string name, bool pass, std::string detail) {
        rep.entries.push_back({std::move(name), pass, std::move(detail)});
    };

    // (a) every point off a carrier lies on exactly (q^k - 1)/(q - 1) of the
    // hyperplanes through that carrier.
    {
        const uint64_t expected = (ipow(proj.q, fp.k) - 1) / (proj.q - 1);
        bool pass = true;
        std::string witness;
        for (uint32_t i = 0; i < B && pass; ++i) {
            auto mask = point_mask(space, part.carriers[i]);
            for (uint32_t x = 0; x < n && pass; ++x) {
                if (mask[x]) continue;
                uint32_t cnt = 0;
                for (uint32_t h : part.hyperplane_groups[i]) {
                    if (space.incident(x, h)) ++cnt;
                }
                if (cnt != expected) {
                    pass = false;
                    witness = "point " + std::to_string(x) + " meets " + std::to_string(cnt) +
                              " hyperplanes of group " + std::to_string(i) + ", expected " +
                              std::to_string(expected);
                }
            }
        }
        add("off-carrier-incidence", pass,
            pass ? "every off-carrier point meets exactly " + std::to_string(expected)
                 : witness);
    }

    // (b) every block is inside or disjoint from every carrier.
    {
        bool pass = true;
        std::string witness;
        for (uint32_t i = 0; i < B && pass; ++i) {
            auto mask = point_mask(space, part.carriers[i]);
            for (uint32_t j = 0; j < B && pass; ++j) {
                if (!block_inside(mask, part.blocks[j]) && !block_disjoint(mask, part.blocks[j])) {
                    pass = false;
                    witness = "block " + std::to_string(j) + " straddles carrier " +
                              std::to_string(i);
                }
            }
        }
        add("block-inside-or-disjoint", pass, pass ? "all block/carrier pairs" : witness);
    }

    // (c) spans of a fixed block with every other block give exactly
    // (B-1)/(c2-1) distinct flats, c2 = blocks inside a two-block span.
    if (fp.t >= 3) {
        const uint64_t c2 = (ipow(proj.q, 2 * (fp.k + 1)) - 1) / (ipow(proj.q, fp.k + 1) - 1);
        const uint64_t expected = (B - 1) / (c2 - 1);
        bool pass = true;
        std::string witness;
        for (uint32_t i = 0; i < B && pass; ++i) {
            std::set<std::vector<uint32_t>> spans;
            for (uint32_t j = 0; j < B; ++j) {
                if (j == i) continue;
                std::vector<uint32_t> up = part.blocks[i].points;
                up.insert(up.end(), part.blocks[j].points.begin(), part.blocks[j].points.end());
                spans.insert(space.span(up).points);
            }
            if (spans.size() != expected) {
                pass = false;
                witness = "block " + std::to_string(i) + " yields " +
                          std::to_string(spans.size()) + " distinct spans, expected " +
                          std::to_string(expected);
            }
        }
        add("distinct-two-block-spans", pass,
            pass ? std::to_string(expected) + " distinct spans per block" : witness);
    }

    // (d) any two distinct carriers intersect in a flat of vector dimension
    // (t-2)(k+1), i.e. (q^{(t-2)(k+1)} - 1)/(q - 1) common points.
    {
        const uint64_t expected = (ipow(proj.q, (fp.t - 2) * (fp.k + 1)) - 1) / (proj.q - 1);
        bool pass = true;
        std::string witness;
        for (uint32_t i = 0; i < B && pass; ++i) {
            for (uint32_t j = i + 1; j < B && pass; ++j) {
                std::vector<uint32_t> common;
                std::set_intersection(part.carriers[i].points.begin(),
                                      part.carriers[i].points.end(),
                                      part.carriers[j].points.begin(),
                                      part.carriers[j].points.end(),
                                      std::back_inserter(common));
                if (common.size() != expected) {
                    pass = false;
                    witness = "carriers " + std::to_string(i) + "," + std::to_string(j) +
                              " share " + std::to_string(common.size()) + " points, expected " +
                              std::to_string(expected);
                }
            }
        }
        add("carrier-intersection-dimension", pass,
            pass ? std::to_string(expected) + " common points per pair" : witness);
    }

    // Disjoint covers on both sides.
    {
        std::vector<uint32_t> cover(n, 0);
        for (const auto& b : part.blocks) {
            for (uint32_t x : b.points) ++cover[x];
        }
        bool pass = std::all_of(cover.begin(), cover.end(), [](uint32_t c) { return c == 1; });
        add("blocks-partition-points", pass, pass ? "exact cover" : "cover defect");
        std::vector<uint32_t> hcover(n, 0);
        for (const auto& g : part.hyperplane_groups) {
            for (uint32_t h : g) ++hcover[h];
        }
        pass = std::all_of(hcover.begin(), hcover.end(), [](uint32_t c) { return c == 1; });
        add("groups-partition-hyperplanes", pass, pass ? "exact cover" : "cover defect");
    }

    // Closure: blocks and carriers re-span to themselves.
    {
        bool pass = true;
        std::string witness;
        for (uint32_t i = 0; i < B && pass; ++i) {
            if (space.span(part.blocks[i].points).points != part.blocks[i].points) {
                pass = false;
                witness = "block " + std::to_string(i);
            }
            if (pass && space.span(part.carriers[i].points).points != part.carriers[i].points) {
                pass = false;
                witness = "carrier " + std::to_string(i);
            }
        }
        add("span-closure", pass, pass ? "all blocks and carriers closed" : witness);
    }

    // Property 3: every block lies in exactly
    // (q^{(k+1)(t-1)} - 1)/(q^{k+1} - 1) carriers.
    {
        const uint64_t expected =
            (ipow(proj.q, (fp.k + 1) * (fp.t - 1)) - 1) / (ipow(proj.q, fp.k + 1) - 1);
        bool pass = true;
        std::string witness;
        for (uint32_t j = 0; j < B && pass; ++j) {
            uint64_t cnt = 0;
            for (uint32_t i = 0; i < B; ++i) {
                if (block_inside(point_mask(space, part.carriers[i]), part.blocks[j])) ++cnt;
            }
            if (cnt != expected) {
                pass = false;
                witness = "block " + std::to_string(j) + " lies in " + std::to_string(cnt) +
                          " carriers, expected " + std::to_string(expected);
            }
        }
        add("carriers-per-block", pass,
            pass ? std::to_string(expected) + " carriers per block" : witness);
    }

    // Degree identity: local hyperplanes plus the off-carrier contribution
    // equals the vertex degree.
    {
        const uint64_t carriers_per_block =
            (ipow(proj.q, (fp.k + 1) * (fp.t - 1)) - 1) / (ipow(proj.q, fp.k + 1) - 1);
        const uint64_t local = space.hyperplanes_through_dim(int32_t(fp.k));
        const uint64_t off = space.hyperplanes_through_dim(int32_t(proj.m - fp.k));
        const uint64_t lhs = local + off * (fp.num_blocks - carriers_per_block);
        const uint64_t rhs = phi(int64_t(proj.m) - 1, int64_t(proj.m) - 2, proj.q);
        add("degree-identity", lhs == rhs,
            std::to_string(local) + " + " + std::to_string(off) + "*" +
                std::to_string(fp.num_blocks - carriers_per_block) + " = " + std::to_string(lhs) +
                (lhs == rhs ? " = " : " != ") + std::to_string(rhs));
    }

    return rep;
}

}  // namespace pgfold

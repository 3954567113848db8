#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "pgfold/partition.hpp"

#include <algorithm>
#include <set>
#include <vector>

using namespace pgfold;

namespace {

ProjectiveSpace make_space(uint32_t m, uint64_t q) {
    return ProjectiveSpace::build(ProjParams::make(m, q));
}

// Oracle: which block is inside hyperplane h, by raw incidence only.
std::vector<std::vector<uint32_t>> oracle_groups(const ProjectiveSpace& space,
                                                 const std::vector<Flat>& flats) {
    std::vector<std::vector<uint32_t>> groups(flats.size());
    for (uint32_t h = 0; h < space.num_hyperplanes(); ++h) {
        for (size_t i = 0; i < flats.size(); ++i) {
            bool inside = true;
            for (uint32_t x : flats[i].points) inside = inside && space.incident(x, h);
            if (inside) groups[i].push_back(h);
        }
    }
    return groups;
}

const CheckEntry& entry(const LemmaReport& rep, const std::string& name) {
    for (const auto& e : rep.entries) {
        if (e.name == name) return e;
    }
    throw std::logic_error("missing report entry " + name);
}

}  // namespace

TEST_CASE("FoldParams derivation") {
    auto p5 = ProjParams::make(5, 2);
    auto f2 = FoldParams::derive(p5, 2);
    CHECK(f2.t == 2);
    CHECK(f2.fold_case == FoldCase::kOdd);
    CHECK(f2.num_blocks == 9);
    CHECK(f2.stride == 9);
    CHECK(f2.points_per_block == 7);

    auto f1 = FoldParams::derive(p5, 1);
    CHECK(f1.t == 3);
    CHECK(f1.fold_case == FoldCase::kEvenFactorable);
    CHECK(f1.num_blocks == 21);
    CHECK(f1.points_per_block == 3);

    CHECK_THROWS_WITH(FoldParams::derive(ProjParams::make(3, 2), 2),
                      doctest::Contains("3 does not divide 4"));
    CHECK_THROWS_AS(FoldParams::derive(p5, 5), std::invalid_argument);  // t = 1
}

TEST_CASE("coset point partition of P(5, GF(2))") {
    auto space = make_space(5, 2);
    auto planes = coset_point_partition(space, 2);
    REQUIRE(planes.size() == 9);
    CHECK(planes[0].points == std::vector<uint32_t>{0, 9, 18, 27, 36, 45, 54});
    for (const auto& f : planes) {
        CHECK(f.dim == 2);
        CHECK(f.points.size() == 7);
    }

    auto lines = coset_point_partition(space, 1);
    REQUIRE(lines.size() == 21);
    for (uint32_t i = 0; i < 21; ++i) {
        CHECK(lines[i].points == std::vector<uint32_t>{i, i + 21, i + 42});
    }

    // disjoint cover
    std::vector<uint32_t> cover(63, 0);
    for (const auto& f : lines) {
        for (uint32_t x : f.points) ++cover[x];
    }
    CHECK(std::all_of(cover.begin(), cover.end(), [](uint32_t c) { return c == 1; }));

    // multiplying by alpha maps block i onto block i+1
    for (uint32_t i = 0; i < 21; ++i) {
        CHECK(space.shift(lines[i], 1).points == lines[(i + 1) % 21].points);
    }
}

TEST_CASE("trivial partition of P(1, GF(2))") {
    auto space = make_space(1, 2);
    auto blocks = coset_point_partition(space, 0);
    REQUIRE(blocks.size() == 3);
    for (uint32_t i = 0; i < 3; ++i) {
        CHECK(blocks[i].points == std::vector<uint32_t>{i});
    }
    auto [carriers, groups] = build_carriers_odd(space, blocks);
    CHECK(carriers.size() == 3);
    for (const auto& g : groups) CHECK(g.size() == 1);
}

TEST_CASE("odd-case carriers of P(5, GF(2)), k = 2") {
    auto space = make_space(5, 2);
    auto blocks = coset_point_partition(space, 2);
    auto [carriers, groups] = build_carriers_odd(space, blocks);
    REQUIRE(groups.size() == 9);
    for (const auto& g : groups) CHECK(g.size() == 7);
    CHECK(oracle_groups(space, blocks) == groups);
    CHECK_THROWS_AS(build_carriers_odd(space, coset_point_partition(space, 1)),
                    std::invalid_argument);  // t = 3 is not the odd case
}

TEST_CASE("odd-case carriers of P(3, GF(2)), k = 1") {
    auto space = make_space(3, 2);
    auto blocks = coset_point_partition(space, 1);
    REQUIRE(blocks.size() == 5);
    auto [carriers, groups] = build_carriers_odd(space, blocks);
    for (const auto& g : groups) CHECK(g.size() == 3);
    CHECK(oracle_groups(space, blocks) == groups);
}

TEST_CASE("even-case carriers of P(5, GF(2)), k = 1") {
    auto space = make_space(5, 2);
    auto part = build_partition(space, 1);
    REQUIRE(part.carriers.size() == 21);
    CHECK(part.equivariant);
    std::set<std::vector<uint32_t>> distinct;
    for (const auto& t : part.carriers) {
        CHECK(t.dim == 3);
        CHECK(t.points.size() == 15);
        distinct.insert(t.points);
    }
    CHECK(distinct.size() == 21);

    // each carrier contains exactly 5 blocks; each block lies in exactly 5 carriers
    std::vector<uint32_t> per_block(21, 0);
    for (const auto& t : part.carriers) {
        std::vector<bool> mask(63, false);
        for (uint32_t x : t.points) mask[x] = true;
        uint32_t inside = 0;
        for (uint32_t i = 0; i < 21; ++i) {
            bool in = true;
            for (uint32_t x : part.blocks[i].points) in = in && mask[x];
            if (in) {
                ++inside;
                ++per_block[i];
            }
        }
        CHECK(inside == 5);
    }
    for (uint32_t c : per_block) CHECK(c == 5);

    for (const auto& g : part.hyperplane_groups) CHECK(g.size() == 3);
    CHECK(oracle_groups(space, part.carriers) == part.hyperplane_groups);
}

TEST_CASE("even-case carriers of P(8, GF(2)), k = 2") {
    auto space = make_space(8, 2);
    auto part = build_partition(space, 2);
    REQUIRE(part.carriers.size() == 73);
    for (const auto& g : part.hyperplane_groups) CHECK(g.size() == 7);
    // Property 3: every block lies in exactly (2^6-1)/(2^3-1) = 9 carriers
    auto rep = verify_spread_lemmas(space, part);
    const auto& rep_entry = entry(rep, "carriers-per-block");
    CHECK(rep_entry.pass);
    CHECK(rep_entry.detail == "9 carriers per block");
}

TEST_CASE("degree profile of P(5, GF(2)) spreads") {
    auto space = make_space(5, 2);
    {
        auto part = build_partition(space, 2);
        auto prof = degree_profile(space, part);
        CHECK(prof.uniform);
        CHECK(prof.d == std::vector<uint32_t>{7, 3, 3, 3, 3, 3, 3, 3, 3});
        CHECK(prof.total == 31);
    }
    {
        auto part = build_partition(space, 1);
        auto prof = degree_profile(space, part);
        CHECK(prof.uniform);
        CHECK(prof.total == 31);
        CHECK(prof.d[0] == 3);
        CHECK(std::count(prof.d.begin(), prof.d.end(), 3u) == 5);
        CHECK(std::count(prof.d.begin(), prof.d.end(), 1u) == 16);
    }
}

TEST_CASE("degree profile of P(3, GF(3)), k = 1, against brute force") {
    auto space = make_space(3, 3);
    auto part = build_partition(space, 1);
    REQUIRE(part.fold.num_blocks == 10);
    auto prof = degree_profile(space, part);
    CHECK(prof.uniform);
    CHECK(prof.total == 13);
    CHECK(prof.d[0] == 4);
    CHECK(std::count(prof.d.begin(), prof.d.end(), 1u) == 9);

    // oracle: recount every (block, point, round) cell straight from incidence
    const uint32_t B = 10;
    for (uint32_t i = 0; i < B; ++i) {
        for (uint32_t x : part.blocks[i].points) {
            for (uint32_t j = 0; j < B; ++j) {
                uint32_t cnt = 0;
                for (uint32_t h : part.hyperplane_groups[(i + j) % B]) {
                    if (space.incident(x, h)) ++cnt;
                }
                CHECK(cnt == prof.d[j]);
            }
        }
    }
}

TEST_CASE("profile of P(1, GF(2)) has empty rounds") {
    auto space = make_space(1, 2);
    auto part = build_partition(space, 0);
    auto prof = degree_profile(space, part);
    CHECK(prof.uniform);
    CHECK(prof.d == std::vector<uint32_t>{1, 0, 0});
    CHECK(prof.total == 1);
}

TEST_CASE("lemma suite passes on built instances") {
    for (auto [m, q, k] : {std::tuple<uint32_t, uint64_t, uint32_t>{5, 2, 2},
                           {5, 2, 1},
                           {3, 2, 1},
                           {3, 3, 1},
                           {1, 2, 0}}) {
        CAPTURE(m);
        CAPTURE(q);
        CAPTURE(k);
        auto space = make_space(m, q);
        auto part = build_partition(space, k);
        auto rep = verify_spread_lemmas(space, part);
        for (const auto& e : rep.entries) {
            CAPTURE(e.name);
            CAPTURE(e.detail);
            CHECK(e.pass);
        }
    }
}

TEST_CASE("lemma details on P(5, GF(2))") {
    auto space = make_space(5, 2);
    {
        // k = 2: every off-plane point meets exactly 3 hyperplanes through the plane
        auto rep = verify_spread_lemmas(space, build_partition(space, 2));
        CHECK(entry(rep, "off-carrier-incidence").pass);
        CHECK(entry(rep, "off-carrier-incidence").detail ==
              "every off-carrier point meets exactly 3");
    }
    {
        // k = 1: exactly 5 distinct 3-flats from unions with the other 20 lines
        auto rep = verify_spread_lemmas(space, build_partition(space, 1));
        CHECK(entry(rep, "distinct-two-block-spans").pass);
        CHECK(entry(rep, "distinct-two-block-spans").detail == "5 distinct spans per block");
        CHECK(entry(rep, "block-inside-or-disjoint").pass);
        CHECK(entry(rep, "carrier-intersection-dimension").pass);
        CHECK(entry(rep, "degree-identity").pass);
    }
}

TEST_CASE("matching fallback alone produces a valid carrier assignment") {
    auto space = make_space(5, 2);
    auto blocks = coset_point_partition(space, 1);
    auto [carriers, groups] = build_carriers_even_matching(space, blocks);
    REQUIRE(carriers.size() == 21);
    std::set<std::vector<uint32_t>> distinct;
    for (uint32_t i = 0; i < 21; ++i) {
        distinct.insert(carriers[i].points);
        // matched carrier contains its block
        CHECK(std::includes(carriers[i].points.begin(), carriers[i].points.end(),
                            blocks[i].points.begin(), blocks[i].points.end()));
    }
    CHECK(distinct.size() == 21);
    for (const auto& g : groups) CHECK(g.size() == 3);
    CHECK(oracle_groups(space, carriers) == groups);
}

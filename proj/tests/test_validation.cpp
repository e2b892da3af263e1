#include <catch2/catch_amalgamated.hpp>

#include "ttm/sshopm.hpp"
#include "ttm/synthetic.hpp"
#include "ttm/validation.hpp"

#include "test_util.hpp"

using namespace ttm;
using namespace ttm_test;

TEST_CASE("make_scene: empty placement list gives a zero volume") {
    VolumeGrid t = tripod_template(15);
    SyntheticScene s = make_scene(t, 32, 32, 32, {}, 0.0, 1);
    for (double v : s.volume.data) REQUIRE(v == 0.0);
}

TEST_CASE("make_scene: single noise-free placement equals rotate + translate") {
    VolumeGrid t = tripod_template(15);
    Prng rng(2);
    Quat q = random_quat(rng);
    SyntheticScene s = make_scene(t, 32, 32, 32, {{{16, 15, 17}, q}}, 0.0, 1);
    VolumeGrid want(32, 32, 32);
    insert_patch(want, rotate_volume(t, q), {16, 15, 17});
    REQUIRE(s.volume.data == want.data);
}

TEST_CASE("make_scene: reproducible from the seed") {
    VolumeGrid t = tripod_template(15);
    SyntheticScene a = make_scene(t, 24, 24, 24, {{{12, 12, 12}, Quat::identity()}}, 0.5, 99);
    SyntheticScene b = make_scene(t, 24, 24, 24, {{{12, 12, 12}, Quat::identity()}}, 0.5, 99);
    REQUIRE(a.volume.data == b.volume.data);
}

TEST_CASE("make_scene: rejects overlap and out-of-bounds placements") {
    VolumeGrid t = tripod_template(15);
    REQUIRE_THROWS_AS(make_scene(t, 64, 64, 64,
                                 {{{20, 20, 20}, Quat::identity()}, {{24, 20, 20}, Quat::identity()}},
                                 0.0, 1, 12.0),
                      error);
    REQUIRE_THROWS_AS(make_scene(t, 24, 24, 24, {{{2, 12, 12}, Quat::identity()}}, 0.0, 1), error);
}

TEST_CASE("brute_force_phi_max: rank-1 tensor") {
    Prng rng(5);
    auto p0 = random_unit4(rng);
    Quat p = Quat{p0[0], p0[1], p0[2], p0[3]}.canonical();
    auto [lam, q] = brute_force_phi_max(tensor_power(p.components(), 4), 20000, 8);
    REQUIRE(lam == Catch::Approx(1.0).margin(1e-4));
    REQUIRE(angular_distance(q, p) <= 0.05);
}

TEST_CASE("brute_force_phi_max: consistency band against sshopm") {
    Prng rng(7);
    for (int trial = 0; trial < 10; ++trial) {
        SymTensor a = random_sym_tensor(4, rng);
        auto [lam_o, q_o] = brute_force_phi_max(a, 50000, 100 + trial);
        ZEigenpair s = sshopm(a);
        bool ok = (lam_o <= s.lambda + 1e-6) || (s.lambda <= lam_o + 1e-3 * std::abs(lam_o));
        REQUIRE(ok);
    }
}

TEST_CASE("brute_force_phi_max: homogeneous of degree 1 in the tensor") {
    Prng rng(9);
    SymTensor a = random_sym_tensor(4, rng);
    SymTensor a10 = a;
    for (auto& c : a10.comp) c *= 10.0;
    auto [lam1, q1] = brute_force_phi_max(a, 20000, 3);
    auto [lam10, q10] = brute_force_phi_max(a10, 20000, 3);
    REQUIRE(lam10 == Catch::Approx(10.0 * lam1).epsilon(1e-9));
    REQUIRE(angular_distance(q1, q10) <= 1e-6);
}

TEST_CASE("lemma_k_coefficient: vanishes for odd ell") {
    for (int n : {2, 4, 6})
        for (int ell = 1; ell <= 15; ell += 2)
            REQUIRE(std::abs(lemma_k_coefficient(ell, n)) <= 1e-12);
}

TEST_CASE("lemma_k_coefficient: ell=0, n=2 equals pi/8") {
    REQUIRE(lemma_k_coefficient(0, 2) == Catch::Approx(M_PI / 8.0).margin(1e-12));
}

TEST_CASE("lemma_k_coefficient: nonnegative for all ell in [0,16], n in {2,4,6}") {
    for (int n : {2, 4, 6})
        for (int ell = 0; ell <= 16; ++ell)
            REQUIRE(lemma_k_coefficient(ell, n) >= -1e-12);
}

TEST_CASE("lemma_k_coefficient: degree bound - zero above ell = n") {
    for (int n : {2, 4, 6})
        for (int ell = n + 1; ell <= 16; ++ell)
            REQUIRE(std::abs(lemma_k_coefficient(ell, n)) <= 1e-12);
}

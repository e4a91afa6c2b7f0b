#include <doctest.h>

#include <cmath>

#include "stepanov/classify.hpp"
#include "stepanov/zoo.hpp"

using namespace stepanov;

namespace {

Tensor as_cotensor(int dim, const Eigen::VectorXd& v) {
    Tensor t(dim, {Variance::Co});
    t.data() = v;
    return t;
}

} // namespace

TEST_CASE("planted linear-derivative instances are recovered exactly") {
    for (std::uint64_t seed : {1ULL, 2ULL, 3ULL, 7ULL, 11ULL}) {
        AlgebraicInstance inst = generate_instance(4, InstanceKind::Omega2Star, seed);
        ClassFit fit = classify(ClassId::Omega2Star, inst.g, &inst.F, inst.T, inst.D);
        REQUIRE(fit.applicable);
        CHECK(fit.member);
        CHECK(fit.rel_residual < 1e-10);
        CHECK(fit.dof == 8);
        if (fit.rank == fit.dof) {
            CHECK_FALSE(fit.rank_deficient);
            CHECK((fit.vectors.at("rho") - inst.planted.at("rho")).norm() < 1e-9);
            CHECK((fit.vectors.at("sigma") - inst.planted.at("sigma")).norm() < 1e-9);
        }
    }
}

TEST_CASE("unconstrained derivatives are rejected by every narrow class") {
    for (std::uint64_t seed : {5ULL, 6ULL, 7ULL}) {
        AlgebraicInstance inst = generate_instance(4, InstanceKind::Unconstrained, seed);
        for (ClassId id : {ClassId::Omega1, ClassId::Omega2, ClassId::Omega3,
                           ClassId::Omega1Star, ClassId::Omega2Star, ClassId::Omega4Star}) {
            ClassFit fit = classify(id, inst.g, &inst.F, inst.T, inst.D);
            INFO("class ", class_name(id), " seed ", seed);
            CHECK_FALSE(fit.member);
            CHECK(fit.rel_residual > 1e-2);
        }
    }
}

TEST_CASE("a vanishing derivative belongs to every class with zero vectors") {
    AlgebraicInstance inst = generate_instance(4, InstanceKind::Omega2Star, 9);
    Tensor zero(4, {Variance::Co, Variance::Co, Variance::Co});
    for (int c = 0; c < kClassCount; ++c) {
        ClassFit fit = classify(static_cast<ClassId>(c), inst.g, &inst.F, inst.T, zero);
        CHECK(fit.member);
        CHECK(fit.rel_residual == 0.0);
        for (const auto& [k, v] : fit.vectors) CHECK(v.norm() == 0.0);
    }
}

TEST_CASE("classes whose equation involves the structure are inapplicable without one") {
    AlgebraicInstance inst = generate_instance(4, InstanceKind::Omega2Star, 13);
    for (ClassId id : {ClassId::Omega4Star, ClassId::Omega5Star}) {
        ClassFit star = classify(id, inst.g, nullptr, inst.T, inst.D);
        CHECK_FALSE(star.applicable);
        CHECK_FALSE(star.member);
    }
    // the antisymmetrized equation itself involves only T and g
    ClassFit plain = classify(ClassId::Omega2Star, inst.g, nullptr, inst.T, inst.D);
    CHECK(plain.applicable);
}

TEST_CASE("a fully symmetric derivative: symmetric-difference class yes, trace-form class no") {
    AlgebraicInstance inst = generate_instance(4, InstanceKind::Omega2Star, 21);
    Tensor d = symmetrize(inst.D + generate_instance(4, InstanceKind::Unconstrained, 22).D,
                          {0, 1, 2});
    ClassFit o2 = classify(ClassId::Omega2, inst.g, &inst.F, inst.T, d);
    CHECK(o2.member);
    CHECK(o2.rel_residual < 1e-12);
    ClassFit o3 = classify(ClassId::Omega3, inst.g, &inst.F, inst.T, d);
    CHECK_FALSE(o3.member);
    // symmetric-in-all-slots kills the antisymmetrized equation, so the
    // F-decorated variant also holds with zero vectors
    ClassFit o2s = classify(ClassId::Omega2Star, inst.g, &inst.F, inst.T, d);
    CHECK(o2s.member);
}

TEST_CASE("trace-form derivatives are recovered with both vectors") {
    SplitMix64 rng(31);
    const int n = 4;
    AlgebraicInstance base = generate_instance(n, InstanceKind::Omega2Star, 31);
    Eigen::VectorXd av(n), bv(n);
    for (int i = 0; i < n; ++i) {
        av(i) = rng.normal();
        bv(i) = rng.normal();
    }
    Tensor a = as_cotensor(n, av), b = as_cotensor(n, bv);
    Tensor d = outer(base.g, a); // a_k g_ij
    Tensor bp = outer(b, base.g); // b_i g_jk; add its ij-swap for b_j g_ik
    d += bp + transpose_slots(bp, {1, 0, 2});
    ClassFit fit = classify(ClassId::Omega3, base.g, &base.F, base.T, d);
    REQUIRE(fit.member);
    CHECK(fit.rel_residual < 1e-12);
    if (!fit.rank_deficient) {
        CHECK((fit.vectors.at("a") - av).norm() < 1e-10);
        CHECK((fit.vectors.at("b") - bv).norm() < 1e-10);
    }
}

TEST_CASE("membership and residual are scale equivariant") {
    AlgebraicInstance inst = generate_instance(4, InstanceKind::Omega2Star, 17);
    ClassFit base = classify(ClassId::Omega2Star, inst.g, &inst.F, inst.T, inst.D);
    Tensor scaled = inst.D;
    scaled *= 1e3;
    ClassFit big = classify(ClassId::Omega2Star, inst.g, &inst.F, inst.T, scaled);
    CHECK(big.member == base.member);
    CHECK(big.rel_residual == doctest::Approx(base.rel_residual).epsilon(1e-6));
    CHECK((big.vectors.at("rho") - 1e3 * base.vectors.at("rho")).norm() <
          1e-9 * std::max(1.0, big.vectors.at("rho").norm()));
}

TEST_CASE("proportional T and g collapse the design matrix rank") {
    AlgebraicInstance inst = generate_instance(4, InstanceKind::Omega2Star, 23);
    Tensor t = inst.g;
    t *= 2.5; // T = c g makes the rho and sigma columns collinear
    ClassFit fit = classify(ClassId::Omega2Star, inst.g, &inst.F, t, inst.D);
    CHECK(fit.rank == 4);
    CHECK(fit.rank_deficient);
}

TEST_CASE("asymmetric derivative inputs are refused") {
    AlgebraicInstance inst = generate_instance(4, InstanceKind::Omega2Star, 29);
    Tensor bad = inst.D;
    bad({0, 1, 0}) += 1.0; // break D_ijk = D_jik
    CHECK_THROWS_AS(classify(ClassId::Omega2, inst.g, &inst.F, inst.T, bad), StructuralError);
}

TEST_CASE("instance generation validates its arguments") {
    CHECK_THROWS_AS(generate_instance(3, InstanceKind::Omega2Star, 1), Error);
    CHECK_THROWS_AS(generate_instance(0, InstanceKind::Unconstrained, 1), Error);
    CHECK_THROWS_AS(build_omega3star_instance(5, 1), Error);
}

TEST_CASE("instances satisfy the algebraic model they claim") {
    AlgebraicInstance inst = generate_instance(6, InstanceKind::Omega2Star, 37);
    // g symmetric, T symmetric and hybrid, D symmetric in ij
    CHECK(max_abs(inst.T - transpose_slots(inst.T, {1, 0})) < 1e-13);
    Tensor hybrid = inst.T - f_pullback(f_pullback(inst.T, inst.F, {0}), inst.F, {1});
    CHECK(max_abs(hybrid) < 1e-12);
    Tensor ft = f_pullback(inst.T, inst.F, {0});
    CHECK(max_abs(ft + transpose_slots(ft, {1, 0})) < 1e-12);
    CHECK(max_abs(inst.D - transpose_slots(inst.D, {1, 0, 2})) < 1e-12);
}

TEST_CASE("derivative-identity trace: the fitted vectors satisfy all three identity forms") {
    for (std::uint64_t seed : {41ULL, 43ULL, 47ULL}) {
        AlgebraicInstance inst = generate_instance(4, InstanceKind::Omega2Star, seed);
        Theorem1Report rep = verify_theorem1(inst);
        CHECK(rep.pass);
        CHECK(rep.fit.member);
        CHECK(rep.res13 < 1e-10);
        CHECK(rep.res14 < 1e-10);
        CHECK(rep.res15 < 1e-10);
        // the as-printed sign reading is genuinely violated on generic instances
        CHECK(rep.res14_printed > 1e-2);
    }
}

TEST_CASE("four-vector class vectors map onto the two-vector class by differences") {
    for (std::uint64_t seed : {51ULL, 53ULL}) {
        AlgebraicInstance inst = build_omega3star_instance(4, seed);
        CHECK(verify_eq16(inst) < 1e-9);
    }
}

TEST_CASE("extended-class inclusion holds over random planted instances") {
    Theorem3Report rep = verify_theorem3(4, 25, 99, kClassTolExact);
    CHECK(rep.pass);
    CHECK(rep.max_rel_residual < 1e-8);
    CHECK(rep.trials.size() == 25);
}

TEST_CASE("parallel-T equivalence holds on the Fubini-Study plane") {
    const ZooEntry* e = zoo_find("cp2-fs");
    auto pts = sample_points(e->manifest, 4, 42);
    Theorem2Report rep = verify_theorem2(e->manifest, pts, kClassTolExact);
    CHECK(rep.pass);
    for (const auto& rec : rep.points) {
        CHECK(rec.omega2_member);
        CHECK(rec.omega3_member);
        CHECK(rec.dT_norm < 1e-9);
        CHECK(rec.dricci_norm < 1e-9);
        CHECK(rec.consistent);
    }
}

TEST_CASE("structure gate refuses non-applicable inputs instead of failing") {
    const ZooEntry* flrw = zoo_find("flrw-dust");
    auto pts = sample_points(flrw->manifest, 2, 42);
    CHECK_THROWS_AS(verify_theorem2(flrw->manifest, pts, kClassTolExact), PreconditionError);
    const ZooEntry* s4 = zoo_find("s4-like-nonkahler");
    auto pts2 = sample_points(s4->manifest, 2, 42);
    CHECK_THROWS_AS(verify_theorem2(s4->manifest, pts2, kClassTolExact), PreconditionError);
}

TEST_CASE("field classification matches the catalog expectations") {
    for (const ZooEntry& e : zoo_list()) {
        auto pts = sample_points(e.manifest, 5, 42);
        FieldReport rep = classify_field(e.manifest, pts, kClassTolExact);
        REQUIRE(rep.points.size() == pts.size());
        for (int c = 0; c < kClassCount; ++c) {
            if (e.expected_member[c] == -1) continue;
            INFO("entry ", e.name, " class ", class_name(static_cast<ClassId>(c)));
            CHECK(rep.aggregate_member[c] == e.expected_member[c]);
        }
    }
}

TEST_CASE("finite-difference field classification agrees on the Einstein entries") {
    const ZooEntry* e = zoo_find("cp2-fs");
    auto pts = sample_points(e->manifest, 3, 42);
    FieldReport rep = classify_field(e->manifest, pts, kClassTolFd, /*use_fd=*/true);
    for (int c = 0; c < kClassCount; ++c) CHECK(rep.aggregate_member[c] == 1);
}

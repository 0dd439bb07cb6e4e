import random

from fissile.ensembles import Ensemble, augmentation, map_ensemble, singleton
from fissile.fissilizer import (
    FunctionFacePresheaf,
    ProductLayoutPresheaf,
    check_fissilizer_defect,
    defect_subgroup_family,
    fissilize,
    is_fissile,
    point_ensemble,
    q_square,
)
from fissile.layouts import layout_key


def presheaf_on(ground):
    return ProductLayoutPresheaf(FunctionFacePresheaf(ground))


def random_top_ensemble(rng, lp, max_terms=4, coeff=3):
    universe = lp.face.enumerate(lp.face.ground)
    out = Ensemble.zero()
    for _ in range(rng.randint(0, max_terms)):
        out = out + rng.randint(-coeff, coeff) * singleton(rng.choice(universe))
    return out


def test_q_square_empty_layout_is_point():
    lp = presheaf_on((1, 2))
    q = singleton((0, 1)) + 2 * singleton((1, 1))
    assert q_square(lp, q, ()) == point_ensemble(lp)
    assert point_ensemble(lp) == singleton(())


def test_q_square_top_is_identity():
    lp = presheaf_on((1, 2))
    q = singleton((0, 1)) - singleton((1, 0))
    assert lp.unwrap(q_square(lp, q, lp.top)) == q


def test_q_square_on_singleton():
    lp = presheaf_on((1, 2))
    a = layout_key([(1,), (2,)])
    got = q_square(lp, singleton((0, 1)), a)
    assert got == singleton(((0,), (1,)))


def test_singletons_are_fissile():
    lp = presheaf_on((1, 2))
    for el in lp.face.enumerate((1, 2)):
        assert is_fissile(lp, singleton(el))


def test_nonaffine_is_not_fissile():
    lp = presheaf_on((1, 2))
    q = 2 * singleton((0, 0))
    assert augmentation(q) != 1
    assert not is_fissile(lp, q)


def test_is_fissile_matches_brute_layout_check():
    rng = random.Random(21)
    lp = presheaf_on((1, 2))
    for _ in range(40):
        q = random_top_ensemble(rng, lp, max_terms=3)
        wrapped = lp.wrap(q)
        brute = all(
            lp.restrict(wrapped, lp.top, a) == q_square(lp, q, a)
            for a in lp.lattice.layouts
        )
        assert is_fissile(lp, q) == brute


def test_fissilizer_output_is_fissile_and_affine():
    rng = random.Random(22)
    for n in (1, 2, 3):
        lp = presheaf_on(tuple(range(1, n + 1)))
        for _ in range(30 if n < 3 else 10):
            q = random_top_ensemble(rng, lp)
            phi = fissilize(lp, q)
            assert is_fissile(lp, phi)
            assert augmentation(phi) == 1


def test_fissilizer_fixes_fissile_inputs():
    rng = random.Random(23)
    lp = presheaf_on((1, 2))
    for el in lp.face.enumerate((1, 2)):
        assert fissilize(lp, singleton(el)) == singleton(el)
    for _ in range(10):
        q = random_top_ensemble(rng, lp)
        phi = fissilize(lp, q)
        assert fissilize(lp, phi) == phi


def test_fissilizer_singleton_ground_formula():
    # hand expansion over the two-layout lattice of a one-point ground set
    lp = presheaf_on((1,))
    rng = random.Random(24)
    default_el = (lp.face.default,)
    for _ in range(20):
        q = random_top_ensemble(rng, lp)
        expected = q + (1 - augmentation(q)) * singleton(default_el)
        assert fissilize(lp, q) == expected


def test_fissilizer_commutes_with_face_restriction():
    # restriction of the repaired ensemble to a layout splits into the
    # repaired face restrictions
    rng = random.Random(25)
    for n in (2, 3):
        ground = tuple(range(1, n + 1))
        lp = presheaf_on(ground)
        for _ in range(8 if n < 3 else 4):
            q = random_top_ensemble(rng, lp, max_terms=3, coeff=2)
            phi = fissilize(lp, q)
            wrapped = lp.wrap(phi)
            for a in lp.lattice.layouts:
                parts = {}
                for f in a:
                    sub = ProductLayoutPresheaf(
                        FunctionFacePresheaf(f, lp.face.values, lp.face.default)
                    )
                    qf = map_ensemble(
                        lambda el: lp.face.restrict(ground, f, el), q
                    )
                    parts[f] = sub.wrap(fissilize(sub, qf))
                assert lp.restrict(wrapped, lp.top, a) == lp.combine(a, parts)


def test_defect_family_certificate():
    rng = random.Random(26)
    for n in (1, 2):
        lp = presheaf_on(tuple(range(1, n + 1)))
        for _ in range(10):
            q = random_top_ensemble(rng, lp, max_terms=3, coeff=2)
            n_family = defect_subgroup_family(lp, [q])
            report = check_fissilizer_defect(lp, q, n_family)
            assert report.hypothesis_ok, report.hypothesis_failures
            assert report.conclusion


def test_defect_check_trivial_cases():
    lp = presheaf_on((1, 2))
    universe = {
        a: lp.enumerate_universe(a) for a in lp.lattice.layouts
    }
    from fissile.ensembles import SubgroupGenerators

    full = {
        a: SubgroupGenerators([singleton(el) for el in universe[a]])
        for a in lp.lattice.layouts
    }
    q = singleton((0, 1)) - 2 * singleton((1, 1)) + singleton((0, 0))
    report = check_fissilizer_defect(lp, q, full)
    assert report.hypothesis_ok and report.conclusion
    # a fissile input has zero defect, any invariant family works
    report2 = check_fissilizer_defect(lp, singleton((0, 1)), full)
    assert report2.hypothesis_ok and report2.conclusion


def test_defect_check_reports_hypothesis_failure_distinctly():
    from fissile.ensembles import SubgroupGenerators

    lp = presheaf_on((1,))
    bad = {a: SubgroupGenerators([]) for a in lp.lattice.layouts}
    q = 2 * singleton((0,))
    report = check_fissilizer_defect(lp, q, bad)
    assert not report.hypothesis_ok
    assert report.conclusion is None
    assert any(kind == "defect" for kind, *_ in report.hypothesis_failures)

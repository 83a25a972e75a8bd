import pytest
from hypothesis import given, strategies as st

from overtake.errors import GrowthOverflow, Unresolved
from overtake.factory import (CertifiedMachine, PolyCertificate, SemanticMachine, make_O,
                              make_Oprime, standard_registry)
from overtake.growth import (
    COMPILED, CROSSOVER, FIRST, SEMANTIC, STRUCTURAL, build_counterexample_family, catalog_names,
    define_function, derive_hprime, dominates_on_window, f_omega, fgh, g0, g_at_index,
    g_of_machine, g_star, lookup_function, monotonize, GrowthFunction,
)


def fgh_oracle(k, n):
    """Straight from the recursion, no closed forms."""
    if k == 0:
        return n + 1
    x = n
    for _ in range(n + 1):
        x = fgh_oracle(k - 1, x)
    return x


@pytest.mark.parametrize("k,n", [(k, n) for k in range(3) for n in range(7)] + [(3, 0), (3, 1)])
def test_fgh_against_recursion(k, n):
    assert fgh(k, n) == fgh_oracle(k, n)


def test_f_omega_small_values():
    assert [f_omega(n) for n in range(3)] == [1, 3, 23]
    with pytest.raises(GrowthOverflow):
        f_omega(3)


def test_ceiling_is_configurable(monkeypatch):
    monkeypatch.setenv("OVERTAKE_CEILING_BITS", "4")
    with pytest.raises(GrowthOverflow):
        lookup_function("exp2")(10)
    assert lookup_function("exp2")(3) == 8


@given(st.lists(st.integers(0, 50), min_size=1, max_size=30))
def test_monotonize_is_increasing_and_above(values):
    h = GrowthFunction(lambda n: values[n % len(values)], "table")
    star = monotonize(h)
    seq = [star(n) for n in range(40)]
    assert all(a < b for a, b in zip(seq, seq[1:]))
    assert all(star(n) >= h(n) for n in range(40))


def test_hprime_composition():
    hp = derive_hprime(lookup_function("succ"))
    # mono(succ)(y) = y + y + 1; composed with F_omega 1, 3, 23
    assert [hp(n) for n in range(3)] == [3, 7, 47]
    assert lookup_function("hprime(succ)").code == hp.code == 2 * lookup_function("succ").code + 1


def test_catalog():
    assert "pow4_succ" in catalog_names()
    f = define_function("cube_for_test", lambda n: n ** 3, monotone=True)
    assert lookup_function("cube_for_test")(3) == 27
    assert f.code % 2 == 0
    with pytest.raises(ValueError):
        define_function("cube_for_test", lambda n: n)
    with pytest.raises(KeyError):
        lookup_function("no_such_function")


def g0_scan(m, crossover, limit=300):
    ok = [pow(x, m) < 2 ** x for x in range(limit)]  # Python gives 0**0 == 1
    if not crossover:
        return ok.index(True)
    return max([x for x in range(limit) if not ok[x]], default=-1) + 1


def test_g0_tables():
    assert g0(0, FIRST) == 1
    assert [g0(m, FIRST) for m in range(1, 13)] == [0] * 12
    assert g0(2, CROSSOVER) == 5
    assert g0(3, CROSSOVER) == 10
    for m in range(16):
        assert g0(m, FIRST) == g0_scan(m, False)
        assert g0(m, CROSSOVER) == g0_scan(m, True)


def test_g_on_toy_family_all_tiers():
    reg = standard_registry()
    for _, cm in reg:
        if cm.spec is None:
            continue
        want = 2 ** (cm.spec.n + 3) + 1
        assert g_of_machine(cm, tier=STRUCTURAL) == want
        assert g_of_machine(cm, tier=SEMANTIC) == want
        if cm.compiled is not None:
            assert g_of_machine(cm, tier=COMPILED) == want


def test_g_of_O_and_Oprime():
    # O(0) = 0 < 2^0 already, and O' is 0 everywhere
    assert g_of_machine(make_O()) == 0
    assert g_of_machine(make_Oprime(), tier=COMPILED) == 0


def test_g_unresolved_within_budget():
    big = SemanticMachine(lambda x: 4 ** (x + 1), lambda x: 1, "big")
    cm = CertifiedMachine(big, PolyCertificate(1, 10 ** 9), "quasi_trivial", 5)
    with pytest.raises(Unresolved):
        g_of_machine(cm, search_budget=20)


def test_g_at_index_and_g_star():
    reg = standard_registry()
    assert g_at_index(7, reg) == 0
    assert g_at_index(23, reg) == 0
    fam = [cm for _, cm in reg if cm.spec]
    assert g_at_index(fam[2].ell_index, reg) == 33
    assert g_star(fam, 1) == 17
    with pytest.raises(IndexError):
        g_star(fam, 10)


def test_domination_window():
    r = dominates_on_window(lookup_function("exp2"), lookup_function("square"), range(64))
    assert r.failures == (3,)
    assert r.witness == 4 and r.dominates
    r = dominates_on_window(lookup_function("square"), lookup_function("exp2"), range(64))
    assert not r.dominates
    assert dominates_on_window(lambda n: n, lambda n: n, range(5)).witness == 0


def test_counterexample_rows():
    _, rows = build_counterexample_family(lookup_function("succ"), range(4))
    assert [r.g for r in rows[:3]] == [4, 8, 48]
    assert all(r.identity_holds for r in rows[:3])
    assert rows[3].refusal.startswith("overflow")
    # the family indices are far beyond g at these n
    assert not any(r.exceeds_h for r in rows[:3])
    _, rows = build_counterexample_family(lookup_function("square"), range(3))
    assert [r.g for r in rows] == [3, 13, 553]

import json

import pytest

from overtake.codec import ell_index, linear_law, word_of_index
from overtake.ell import pairing
from overtake.errors import CertificateViolation, RegistryError, TableBudgetExceeded
from overtake.factory import (
    KIND_IDENTITY, KIND_QUASI, KIND_ZERO, CertifiedMachine, PolyCertificate, QuasiTrivialSpec,
    Registry, SemanticMachine, compile_quasi_trivial, make_O, make_Oprime, make_quasi_trivial,
    register_family, standard_registry,
)
from overtake.growth import lookup_function
from overtake.machine import run

H, HP = lookup_function("pow2_plus3"), lookup_function("pow4_succ")


def test_certificate_bound():
    assert PolyCertificate(2, 3).bound(4) == 3 * 25 + 3
    assert PolyCertificate(1, 2).bound(0) == 4


def test_O_and_Oprime():
    O, Op = make_O(), make_Oprime()
    for x in range(40):
        n = len(word_of_index(x))
        assert O.evaluate(x) == O.evaluate(x, compiled=True) == x
        assert Op.evaluate(x) == Op.evaluate(x, compiled=True) == 0
        assert O.op_time(x) == n + 1
        assert Op.op_time(x) == n + 2
    assert O.template_code == pairing(KIND_IDENTITY, 0) == 1
    assert Op.template_code == pairing(KIND_ZERO, 0) == 3


def test_spec_threshold_and_values():
    spec = QuasiTrivialSpec(H, HP, 1)
    assert spec.k_n == 16
    assert spec.probes() == (0, 8, 16)
    assert spec.value(16) == 4 ** 17
    assert spec.value(17) == 0
    assert spec.template_code == pairing(KIND_QUASI, pairing(H.code, HP.code))


def test_weak_payload_is_rejected():
    with pytest.raises(ValueError):
        make_quasi_trivial(QuasiTrivialSpec(H, lookup_function("square"), 0))


@pytest.mark.parametrize("n", [0, 1])
def test_compiled_table_agrees_with_semantics(n):
    spec = QuasiTrivialSpec(H, HP, n)
    cm = make_quasi_trivial(spec)
    cm.compiled = compile_quasi_trivial(spec)
    for x in range(2 * spec.k_n + 40):
        assert cm.evaluate(x, compiled=True) == cm.evaluate(x) == spec.value(x)
        w = word_of_index(x)
        # erase-while-reading lookup: 2|x| + max(1, |out|)
        assert cm.op_time(x) == cm.machine.time_model(x)
        assert cm.op_time(x) == 2 * len(w) + max(1, len(word_of_index(spec.value(x))))


def test_table_budget_refusal():
    with pytest.raises(TableBudgetExceeded):
        compile_quasi_trivial(QuasiTrivialSpec(H, HP, 4), table_budget=500)


def test_certificate_is_enforced():
    slow = SemanticMachine(lambda x: x, lambda x: 10 ** 6, "slow")
    cm = CertifiedMachine(slow, PolyCertificate(1, 2), "identity", 1)
    with pytest.raises(CertificateViolation):
        cm.evaluate(3)


def test_family_indices_follow_the_law():
    reg = Registry()
    fam = register_family([QuasiTrivialSpec(H, HP, n) for n in range(5)], reg)
    m = fam[0].template_code
    law = linear_law(m, range(5))
    assert [cm.ell_index for cm in fam] == [law(n) for n in range(5)]
    assert all(cm.ell_index == ell_index(cm.spec.n, m) for cm in fam)
    assert all(reg.is_certified(cm.ell_index) for cm in fam)
    assert not reg.is_certified(fam[0].ell_index + 1)


def test_family_must_share_functions():
    specs = [QuasiTrivialSpec(H, HP, 0), QuasiTrivialSpec(lookup_function("succ"), HP, 1)]
    with pytest.raises(RegistryError):
        register_family(specs, Registry())


def test_index_collision():
    reg = Registry()
    reg.register(make_O())
    reg.register(make_O())  # same machine again is fine
    clash = make_Oprime()
    clash.template_code = make_O().template_code
    with pytest.raises(RegistryError):
        reg.register(clash)


def test_registry_json_round_trip(tmp_path):
    reg = standard_registry()
    path = tmp_path / "reg.json"
    reg.save(path)
    rows = json.loads(path.read_text())
    assert all(isinstance(r["ell_index"], str) for r in rows)
    again = Registry.load(path)
    assert again.indices() == reg.indices()
    assert again.to_json() == reg.to_json()


def test_registry_rejects_tampered_index():
    rows = standard_registry().to_json()
    rows[0]["ell_index"] = "12345"
    with pytest.raises(RegistryError):
        Registry.from_json(rows)


def test_standard_registry_contents():
    reg = standard_registry()
    assert len(reg) == 7
    assert reg.lookup(23).machine.name == "O"
    assert reg.lookup(ell_index(0, 3)).machine.name == "O'"
    compiled = [cm.spec.n for _, cm in reg if cm.spec and cm.compiled is not None]
    assert compiled == [0, 1]
    table = reg.lookup(23).compiled
    assert run(table, "0110", 10).output == "0110"

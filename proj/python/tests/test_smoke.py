import pytest

import qva


def test_affine_round_trip_and_products():
    inst = qva.build("affine_sl2", level="1", cutoff=3)
    assert inst.dim == 35
    assert inst.basis[0] == ("vac", 0)
    assert inst.product("e(-1)", 1, "f(-1)") == "1·vac"
    assert qva.parse(inst.emit()) == inst


def test_commutator_of_currents():
    inst = qva.build("affine_sl2", level="-2", cutoff=2)
    assert inst.commutator("e(-1)", "f(-1)") == ["1·h(-1)", "-2·vac"]
    assert inst.commutator("e(-1)", "e(-1)") == []


def test_classical_suite_passes():
    records = qva.check(qva.build("commutative", cutoff=3), n_range=(-2, 2))
    assert records
    assert {r["status"] for r in records} <= {"pass", "skipped"}
    assert list(records[0]) == [
        "check", "a", "b", "c", "n", "h_order", "status", "control", "witness",
        "first_failing_h_order", "box", "location", "detail", "elapsed_ms",
    ]
    assert qva.exit_code(records) == 0


def test_control_fails_at_first_order_but_exits_clean():
    inst = qva.build("affine_sl2", cutoff=2, h_order=2, braiding="seeded:1")
    assert inst.control and inst.braided
    records = qva.check(inst, suite="ys_equals_yop", workers=2)
    failed = [r for r in records if r["status"] == "fail"]
    assert failed
    assert all(r["first_failing_h_order"] == 1 for r in failed)
    assert qva.exit_code(records) == 0


def test_errors_are_exceptions():
    with pytest.raises(qva.ParseError):
        qva.parse("HEADER\nh_order 1\n")
    with pytest.raises(qva.QvaError):
        qva.build("affine_sl2", braiding="seeded:x")
    with pytest.raises(qva.QvaError):
        qva.check(qva.build("vacuum"), suite="nonsense")
    with pytest.raises(qva.QvaError):
        qva.build("affine_sl2").product("x(-1)", 0, "vac")

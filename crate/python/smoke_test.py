"""Smoke test for the ybhom extension module.

Build and install first, e.g. `maturin develop -m crates/python/Cargo.toml`.
"""

import json
from fractions import Fraction
from pathlib import Path

import ybhom

DATA = Path(__file__).resolve().parent.parent / "crates" / "core" / "data"


def test_ratfunc():
    a = ybhom.RatFunc("1 - y^2")
    b = ybhom.RatFunc("1 + y")
    assert str(a / b) == "1 - y"
    assert a * b.inv() == ybhom.RatFunc("1 - y")
    assert (a - a).is_zero()
    assert ybhom.RatFunc.quantum_int(3) == ybhom.RatFunc("1 + y^2 + y^4")
    assert Fraction(ybhom.RatFunc("1/(1+y)").eval(3)) == Fraction(1, 4)
    assert len({a, ybhom.RatFunc("-y^2 + 1")}) == 1


def test_operator():
    yb = ybhom.YBData(2)
    assert yb.check_ybe()
    assert yb.r_matrix()[1] == ["0", "1 - y^2", "1", "0"]
    assert [yb.kernel_dim(n) for n in range(6)] == [1, 0, 3, 2, 9, 12]
    assert ybhom.kernel_dims(2, 8) == [1, 0, 3, 2, 9, 12, 31, 54, 117]
    assert yb.tilde_dims(5) == [0, 0, 3, 2, 0, 0]
    for n in range(2, 5):
        assert yb.sigma_identities_hold(n)
        assert yb.phi_formula_holds(n)
        assert yb.decomposition_holds(n)
    assert all(ybhom.hilbert_identity_holds(m, 8) for m in range(1, 7))


def test_homology():
    yb = ybhom.YBData(3, rank_mode="both")
    mod = ybhom.Module.triangular_example()
    dims = [h for (n, d, h) in mod.homology(yb, 4) if d == 0]
    assert dims == [1, 3, 9, 27, 81]
    assert mod.r_ranks(yb) == [2, 4, 2]
    assert yb.rank_mismatches() == 0

    again = ybhom.Module.from_json(mod.to_json())
    assert again.homology(yb, 2) == mod.homology(yb, 2)

    free = ybhom.Module.free(2, 5)
    assert free.is_free
    recs = free.homology(ybhom.YBData(2), 5)
    assert [h for (n, d, h) in recs if d == 0] == [1, 0, 3, 2, 9, 12]
    assert all(h == 0 for (n, d, h) in recs if d > 0)


def test_errors():
    for bad in ["1/0", "y^", ""]:
        try:
            ybhom.RatFunc(bad)
        except ValueError:
            continue
        raise AssertionError(f"{bad!r} parsed")
    try:
        ybhom.YBData(2, rank_mode="fast")
    except ValueError:
        pass
    else:
        raise AssertionError("bad rank mode accepted")


def test_cli():
    code, out, err = ybhom.run_cli(["kernel", "--m", "2", "--n-max", "4", "--output", "json"])
    assert code == 0, err
    assert [d["M"] for d in json.loads(out)["degrees"]] == [1, 0, 3, 2, 9]
    code, _, err = ybhom.run_cli(["homology", "--m", "2", "--module", str(DATA / "noncommuting_l2_m2.json")])
    assert code == 1 and "FAILED" in err
    assert ybhom.run_cli(["homology"])[0] == 2


if __name__ == "__main__":
    for name, fn in list(globals().items()):
        if name.startswith("test_"):
            fn()
            print(f"{name}: ok")

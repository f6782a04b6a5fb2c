"""Each acceptance criterion run at its stated grid; one PASS/FAIL line per criterion."""
import pytest

from superharm import suites
from superharm.errors import BadDimension
from superharm.superpoly import R2

LINES = {}


def record(num, title, checks, status=None):
    failed = [c for c in checks if not c["pass"]]
    status = status or ("PASS" if not failed else "FAIL")
    line = f"criterion {num:>2} {title}: {status} ({len(checks) - len(failed)}/{len(checks)} checks)"
    LINES[num] = line
    print(line)
    for c in failed:
        print(f"    failed: {c['name']}  witness={c['witness']}")
    return not failed


def test_criterion_01_sl2():
    assert record(1, "sl2 brackets", suites.suite_sl2(suites.SL2_GRID, deg=8))


def test_criterion_02_fischer():
    checks = []
    for m, n in [(3, 1), (5, 2)]:
        checks += suites.fischer_checks(m, n, 8)
        checks += suites.laplacian_constant_checks(m, n, top=4)
    # the criterion as stated cannot hold at (2,1); that point is the strict xfail below
    ok = record(2, "Fischer decomposition on (3,1),(5,2); (2,1) unattainable, strict xfail", checks,
                status=None if not all(c["pass"] for c in checks) else "FAIL at (2,1) only")
    assert ok


@pytest.mark.xfail(strict=True, reason="M = 0: R^2 is harmonic, so R^2 H_0 and H_2 overlap and the "
                                       "Fischer decomposition does not exist at (2,1)")
def test_criterion_02_fischer_zero_dimension():
    checks = suites.suite_fischer(grid=[(2, 1)], deg=8)
    assert suites.passed(checks)


def test_criterion_02_obstruction():
    # the reason the (2,1) point is unattainable
    assert not R2(2, 1).nabla2()
    with pytest.raises(BadDimension):
        suites.fischer_checks(2, 1, 2)


def test_criterion_03_fermionic_inner_product():
    assert record(3, "fermionic inner products", suites.suite_fermionic((1, 2, 3)))


def test_criterion_04_super_inner_products():
    checks = suites.suite_inner(grid=suites.INNER2_GRID, jmax=3, kmax=4)
    checks += suites.suite_adjoints(grid=((3, 1),), deg=6, ns=())
    assert record(4, "super inner products", checks)


def test_criterion_05_nogo():
    assert record(5, "no-go witnesses", suites.suite_nogo(suites.NOGO_GRID))


def test_criterion_06_integration():
    assert record(6, "supersphere integration", suites.suite_integration(suites.PIZZETTI_GRID, deg=8))


def test_criterion_07_kernels():
    assert record(7, "reproducing kernels", suites.suite_kernels((1, 2, 3), suites.KERNEL_GRID, kmax=3))


def test_criterion_08_mehler():
    assert record(8, "Mehler formulas", suites.suite_mehler(ns=(1, 2), grid=suites.MEHLER_SUPER_GRID,
                                                            classical=(3, 4, 5), Dmax=6))


def test_criterion_08_mehler_three_pairs():
    # listed as a long check, but cheap enough to run every time
    from superharm.mehler import mehler_fermionic_verify
    assert mehler_fermionic_verify(3)["equal"]


def test_criterion_09_dunkl():
    assert record(9, "Dunkl operators", suites.suite_dunkl(seed=0, samples=5, deg=6, gram_deg=4))


def test_criterion_10_appendix():
    assert record(10, "one-dimensional orthogonality", suites.suite_appendix(top=8))

"""Smoke test for the gcfib extension module.

Build the module and put it on the path first:

    cargo build --release -p gcfib-py --features extension-module
    cp target/release/libgcfib_py.so python/gcfib.so
    python3 python/smoke_test.py
"""

import math
import os
import sys

sys.path.insert(0, os.path.dirname(os.path.abspath(__file__)))

import gcfib  # noqa: E402


def close(a, b, tol):
    return all(abs(x - y) <= tol for x, y in zip(a, b))


def main():
    q = gcfib.Quaternion(0.0, 1.0, 0.0, 0.0) * gcfib.Quaternion(0.0, 0.0, 1.0, 0.0)
    assert q.components() == (0.0, 0.0, 0.0, 1.0), q

    hopf = gcfib.Fibration.hopf()
    chart = hopf.chart()
    jac, h_x, h_y = chart.firing_jacobian()
    assert abs(jac.margin() - 4.0) < 1e-8 and max(abs(h_x), abs(h_y)) < 1e-6
    check = chart.contact_cross_check()
    assert check.analytic == -2.0 and check.discrepancy() < 1e-6, check.discrepancy()

    pull = gcfib.Fibration.pull_toward((0.0, 0.0, 1.0), 0.3)
    assert pull.lipschitz_estimate() < 0.3 / 0.7 + 1e-9
    s = 1 / math.sqrt(2)
    p, q, iterations, residual = pull.fibre_through((s, s, 0.0, 0.0))
    assert residual < 1e-13 and iterations <= 60
    m, n = gcfib.to_grassmann(p, q)
    assert close(pull.phi(m), n, 1e-10)
    back = gcfib.from_grassmann(m, n)
    assert close(gcfib.principal_angles((p, q), back), (0.0, 0.0), 1e-7)

    left = gcfib.Fibration.pull_toward((0.0, 1.0, 0.0), 0.2, (1.0, 0.0, 0.0), 0.4, "left")
    for point in [(1.0, 0.0, 0.0, 0.0), (0.5, 0.5, 0.5, 0.5)]:
        c = left.chart(point).contact_cross_check()
        assert c.analytic < 0 and c.discrepancy() < 1e-5

    center, radius = gcfib.smallest_cap([(1.0, 0.0, 0.0), (0.0, 1.0, 0.0)])
    assert abs(radius - math.pi / 4) < 1e-12

    assert gcfib.m_criterion_disagreements(10_000, 3) == 0
    assert gcfib.oracle_verdict(0.5) == "agree-accept"
    assert gcfib.oracle_verdict(3.0) == "agree-reject"

    try:
        gcfib.Fibration.pull_toward((0.0, 0.0, 1.0), 0.8)
    except ValueError:
        pass
    else:
        raise AssertionError("lambda 0.8 should be rejected")

    print("python smoke test passed")


if __name__ == "__main__":
    main()

"""Manual walk-through of the smallest explicit construction.

Run with:
    python -m scripts.worked_example

b = 2, n = 1 gives d = 2, p_d(z) = z^2 - z + x^-1 and the lattice generator T = (B^-1)^T.
Shrinking by f = (x^3, x^3) yields 2^6 points; the script prints the roots, T, the
admissibility scan, and the exact t, strength and discrepancy of the resulting net.
"""
from __future__ import annotations

from laurentnet.core.construction import build_construction, explicit_net, predicted_quality
from laurentnet.core.lattice import ShrinkFactor, m_scan
from laurentnet.core.netanalysis import duality_check
from laurentnet.core.quality import discrepancy_bound, star_discrepancy_exact


def main() -> None:
    b, n = 2, 1
    construction = build_construction(b, n, 64)
    print("Roots of p_d:")
    for label, root in zip(construction.roots.labels, construction.roots.roots):
        print(f"  {label}: {root}")
    print("Generator T:")
    for i in range(construction.lattice.d):
        print("  " + " | ".join(str(construction.lattice.generator[i, j]) for j in range(construction.lattice.d)))

    scan = m_scan(construction.lattice, 3)
    print(f"Admissibility scan, D=3: M = {scan.m_hat}, witness h = {[str(h) for h in scan.witness]}")

    factor = ShrinkFactor.parse(construction.lattice.ctx, "x^3,x^3", construction.lattice.d)
    predicted = predicted_quality(b, n, factor)
    print(f"Predicted: m = {predicted.m}, t <= {predicted.t_bound}")

    _, points = explicit_net(b, n, factor)
    report = duality_check(points, t_bound=predicted.t_bound)
    print(f"Net: {points.size} points, t = {report.exact_t}, delta = {report.delta}, strength = {report.strength}")

    result = star_discrepancy_exact(points, t=report.exact_t)
    print(
        f"D* = {result.value} (~{float(result.value):.5f}), "
        f"bound shape {discrepancy_bound(points.m, report.exact_t, points.d, b):.5f}"
    )


if __name__ == "__main__":
    main()

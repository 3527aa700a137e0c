"""Smoke test for the conedido_py extension module.

Builds the cdylib with cargo if needed, loads it directly from the target
directory, and checks a handful of closed-form identities end to end.

Run from the repository root:  python3 python/smoke_test.py
"""

import math
import shutil
import subprocess
import sys
from pathlib import Path

ROOT = Path(__file__).resolve().parent.parent


def load_module():
    lib = ROOT / "target" / "debug" / "libconedido_py.so"
    if not lib.exists():
        subprocess.run(
            ["cargo", "build", "-p", "conedido-py"], cwd=ROOT, check=True
        )
    staged = lib.parent / "conedido_py.so"
    if not staged.exists() or staged.stat().st_mtime < lib.stat().st_mtime:
        shutil.copy2(lib, staged)
    sys.path.insert(0, str(lib.parent))
    import conedido_py

    return conedido_py


def main():
    m = load_module()

    # classical half-plane: I(tau) = sqrt(2 pi tau)
    d0 = m.Density(k=0.0, c=0.0)
    for tau in (0.5, 1.0, 2.0):
        assert abs(d0.isoperimetric_profile(tau) - math.sqrt(2 * math.pi * tau)) < 1e-10
    assert abs(d0.half_ball_measure(1.0) - math.pi / 2) < 1e-10

    # profile consistency for a weighted density
    d = m.Density(k=1.0, c=0.5)
    mu = d.half_ball_measure(1.3)
    assert abs(d.isoperimetric_profile(mu) - d.half_ball_perimeter(1.3)) < 1e-8
    assert abs(d.star_radius(mu) - 1.3) < 1e-9
    assert abs(d.stability_rhs(1.0) - 1.0) < 1e-12

    # half-disk is isoperimetric; a perturbed profile is worse
    n = 128
    flat = [1.0] * (n + 1)
    wavy = [
        1.0 + 0.2 * math.sin(2 * math.pi * j / n) for j in range(n + 1)
    ]
    assert abs(m.isoperimetric_margin(d, flat)) < 1e-8
    assert m.isoperimetric_margin(d, wavy) > 0.0

    # the flow recovers the half-disk from the perturbed start
    res = m.minimize_perimeter(d, wavy)
    assert res["converged"]
    rstar = d.star_radius(res["measure"])
    assert max(abs(r - rstar) for r in res["rho"]) < 1e-3 * rstar

    # star rearrangement of a radial decreasing function is itself
    radii, angles, r_d = 64, 64, 1.0
    vals = []
    for i in range(radii + 1):
        r = i * r_d / radii
        vals.extend([1.0 - r * r] * (angles + 1))
    sv, sradii, sangles, rstar = m.star_rearrangement(d0, vals, radii, angles, r_d)
    assert abs(rstar - r_d) < 1e-9
    for i in range(sradii + 1):
        r = i * rstar / sradii
        assert abs(sv[i * (sangles + 1)] - (1.0 - r * r)) < 1e-2
    e = m.gradient_qnorm(d0, vals, radii, angles, r_d, 2.0)
    es = m.gradient_qnorm(d0, sv, sradii, sangles, rstar, 2.0)
    assert es <= e * (1.0 + 1e-3)

    # torsion value at the center of the unit half-disk
    u0, pointwise, qnorms = m.pde_compare(d0, grid=96)
    assert abs(u0 - 0.25) < 1e-3
    assert pointwise >= -1e-3
    assert all(margin >= -1e-3 for _, margin in qnorms)

    # weighted Neumann eigenvalue 1 + k and the sharp Hardy constant
    lam, vec = m.neumann_eigenvalue(2.5, nodes=1024)
    assert abs(lam - 3.5) < 1e-3
    assert len(vec) == 1024
    assert m.hardy_constant(2, 0.0, 0) == 1.0
    assert m.hardy_constant(3, 1.0, 2) == 7.0
    q = m.hardy_test_sequence(3, 1.0, 2, 32)
    assert 7.0 <= q <= 7.0 * 1.10

    print("smoke test passed")


if __name__ == "__main__":
    main()

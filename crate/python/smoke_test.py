"""Smoke test for the forcefree_py extension module."""

import math
import os
import tempfile

import forcefree_py as ff


def main():
    c = ff.first_positive_root(1.5)
    assert abs(c - 4.4934) < 1e-3, c
    assert abs(ff.bessel_j(1.5, c)) < 1e-12

    p = ff.FieldParams(1.0, 1.0)
    r = p.radius()
    assert abs(r - c) < 1e-14
    assert abs(ff.phi_c(0.6 * r, 0.8 * r, p)) < 1e-10

    grid = ff.HalfPlaneGrid.centered(4 * r, 4 * r, 129, 65)
    field = ff.ClebschField.chandrasekhar(grid, p)
    hc = ff.helicity_constant_hc(p)
    h = ff.gen_helicity(field, p)
    assert abs(h - hc) / hc < 1e-2, (h, hc)
    assert ff.gen_helicity(field.with_negated_swirl(), p) == -h
    assert len(field.phi) == grid.nz and len(field.phi[0]) == grid.nr

    with tempfile.TemporaryDirectory() as d:
        path = os.path.join(d, "field.dump")
        ff.write_dump(path, field, p)
        back, bp = ff.read_dump(path)
        assert back.phi == field.phi and back.g == field.g
        assert (bp.w, bp.lam, bp.gamma) == (1.0, 1.0, 0.0)

    rep = ff.minimize(p, 65, 65)
    assert rep["converged"], rep
    assert abs(rep["mu"] - 1.0) < 5e-2, rep["mu"]
    shift, dist = ff.orbit_distance(rep["field"], p, ff.ClebschField.chandrasekhar(rep["field"].grid, p), p)
    assert dist < 0.05 and math.isfinite(shift), dist

    p2 = ff.FieldParams(2.0, 4.4934094579090642**2)
    g2 = ff.HalfPlaneGrid.centered(3.0, 3.0, 49, 25)
    tr = ff.simulate(p2, ff.ClebschField.chandrasekhar(g2, p2), 0.0, 0.5)
    assert all(x == 0.0 for x in tr["res_H"] + tr["res_M"])

    try:
        ff.FieldParams(-1.0, 1.0)
    except ValueError:
        pass
    else:
        raise AssertionError("negative W accepted")

    print("smoke test passed")


if __name__ == "__main__":
    main()

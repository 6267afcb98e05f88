"""Smoke test for the lensfield extension module.

    pip install maturin
    maturin build --release -m crates/python/Cargo.toml -o dist
    pip install dist/lensfield-*.whl
    python python/smoke_test.py
"""

import math

import lensfield as lf


def close(a, b, tol):
    return abs(a - b) <= tol


def main():
    # displacement is tangent to the circle and has length c
    c, theta = 1.5, 0.7
    x1, x2 = lf.point_on_circle(c, theta)
    assert close(lf.circle_of_point(x1, x2), c, 1e-12)
    u1, u2 = lf.displacement(x1, x2)
    assert close(math.hypot(u1, u2), c, 1e-12)
    assert close(lf.cusp_jump(2.0, 1.0), 1.0, 1e-6)
    assert abs(lf.circle_dilatation(c, theta)) < 1e-12

    # shear stress vanishes on theta = pi/4
    s11, s12, s22 = lf.stress(1.0, 1.0, k=1.0)
    assert abs(s12) < 1e-12
    assert lf.lame(1.0, 0.5, k=0.0)["mu"] > 0.0
    assert lf.equilibrium_residual(1.0, 0.5, k=1.0) < 1e-6
    assert lf.general_j_derivative_check(2) < 1e-4

    t1, t2 = lf.traction(1.0, 0.0, k=4.0)
    assert (t1, t2) == (0.0, 4.0)
    assert close(lf.moment_density(1.0, 0.0, k=2.0), 6.0, 1e-12)

    dom = lf.LensDomain(2.0, k=1.0)
    assert dom.classify(2.0, 0.0) == "inner-boundary"
    assert dom.classify(1.0, 0.0) == "exterior"
    assert dom.classify(0.0, 0.0) == "cusp"
    assert dom.contains(3.0, 0.5)

    force = dom.total_force(0.5)
    assert close(force["t2"]["quadrature_value"], force["t2"]["closed_form_value"], 1e-8)
    energy = dom.boundary_energy(0.3)
    assert close(dom.area_energy(0.3), energy["total"] / 2.0, 1e-4 * abs(energy["energy"]))

    report = dom.limit_report()
    assert close(report["energy_fit"]["singular_coeff"], 2.0, 1e-3)
    assert abs(report["t2_fit"]["constant_term"]) < 1e-6
    print("gamma limit", report["gamma_fit"]["constant_term"], "quoted", report["gamma_quoted"])

    scan = lf.LensDomain(2.0).ellipticity_scan(64)
    assert scan["min_margin"] < 0.0 < scan["k_threshold"]

    try:
        lf.LensDomain(1.0)
    except lf.LensfieldError as e:
        assert isinstance(e, ValueError)
    else:
        raise AssertionError("R = 1 should be rejected")

    try:
        lf.displacement(0.0, 0.0)
    except lf.LensfieldError:
        pass
    else:
        raise AssertionError("the cusp should be rejected")

    print("smoke test passed")


if __name__ == "__main__":
    main()

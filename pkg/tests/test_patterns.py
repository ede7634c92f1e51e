import math
from fractions import Fraction

import numpy as np
import pytest

from patres.patterns import (
    Kind,
    PatternError,
    PatternSpec,
    WindowError,
    check_consistency,
    delone_check,
    gamma,
    generate,
    label_period,
    lipschitz_bound,
    shift_relabel,
    tau,
)


def spec_I(alpha, r=0.4, omega=0.0):
    return PatternSpec(kind=Kind.EXAMPLE_I, alpha=(alpha,), r=r, omega=(omega,))


# ---------------------------------------------------------------------------
# spec validation


def test_spec_rejects_large_r():
    with pytest.raises(PatternError):
        spec_I(0.3, r=0.5)


def test_spec_rejects_alpha_outside_unit():
    with pytest.raises(PatternError):
        spec_I(1.25)


def test_omega_reduced_mod_circumference():
    s = spec_I(0.3, omega=2 * math.pi + 0.25)
    assert s.omega[0] == pytest.approx(0.25, abs=1e-12)
    s2 = PatternSpec(kind=Kind.EXAMPLE_II, alpha=(0.4,), omega=(1.4 + 0.3,))
    assert s2.omega[0] == pytest.approx(0.3, abs=1e-12)


def test_cut_project_requires_positive_spacings():
    with pytest.raises(PatternError):
        PatternSpec(kind=Kind.CUT_PROJECT, alpha=(0.5,), spacing_a=0.0)


# ---------------------------------------------------------------------------
# gamma


def test_gamma_periodic_case_is_unit_step():
    # alpha = 0: the sine contributions cancel for any omega
    for w in (0.0, 0.3, 5.1):
        assert gamma(spec_I(0.0, omega=w), 1)[0] == pytest.approx(1.0, abs=0)


def test_gamma_quarter_rotation():
    # alpha = 1/4, omega = 0: 1 + 0.4*sin(pi/2) = 1.4
    val = gamma(spec_I(0.25, r=0.4, omega=0.0), 1)
    assert val[0] == pytest.approx(1.4, abs=1e-15)


def test_gamma_2d_periodic_case():
    s = PatternSpec(kind=Kind.EXAMPLE_III, alpha=(0.0, 0.0), r=0.3)
    assert np.allclose(gamma(s, 1), [1.0, 0.0], atol=0)
    assert np.allclose(gamma(s, 2), [0.0, 1.0], atol=0)


def test_gamma_inverse_relation_exact():
    s = spec_I(0.37, r=0.3, omega=0.11)
    w = (0.9,)
    back = tau(s, (-1,), w)
    assert gamma(s, -1, w)[0] == -gamma(s, 1, back)[0]


def test_gamma_rejects_bad_generator():
    with pytest.raises(PatternError):
        gamma(spec_I(0.3), 2)
    with pytest.raises(PatternError):
        gamma(spec_I(0.3), 0)


# ---------------------------------------------------------------------------
# consistency


@pytest.mark.parametrize(
    "spec",
    [
        spec_I(1 / math.sqrt(3)),
        PatternSpec(kind=Kind.EXAMPLE_II, alpha=(1 / math.sqrt(7),), g=0.1, delta=0.2),
        PatternSpec(kind=Kind.EXAMPLE_III, alpha=(Fraction(1, 3), Fraction(2, 5)), r=0.4),
        PatternSpec(kind=Kind.EXAMPLE_IV, alpha=(Fraction(1, 3), Fraction(1, 3)), g=0.1),
        PatternSpec(kind=Kind.CUT_PROJECT, alpha=((3 - math.sqrt(5)) / 2,)),
        PatternSpec(kind=Kind.IDEAL_BILAYER, alpha=(1 / math.sqrt(6),), delta=0.25),
    ],
    ids=lambda s: s.kind.value,
)
def test_consistency_all_kinds(spec):
    report = check_consistency(spec, samples=24)
    assert report.max_residual < 1e-12
    assert report.passed


def test_consistency_single_generator_exact_zero():
    report = check_consistency(spec_I(0.613), samples=12)
    assert report.max_residual == 0.0


# ---------------------------------------------------------------------------
# generate


def test_generate_periodic_chain_is_integer_lattice():
    pat = generate(spec_I(0.0), (-3, 3))
    for n in range(-3, 4):
        assert pat.point(n)[0] == float(n)


def test_generate_seeds_origin():
    pat = generate(spec_I(1 / math.sqrt(2), omega=0.37), (-5, 9))
    assert pat.point(0)[0] == 0.0


def test_generate_window_must_contain_zero():
    with pytest.raises(WindowError):
        generate(spec_I(0.3), (2, 5))


def test_cut_project_matches_sturmian_oracle():
    alpha = (3 - math.sqrt(5)) / 2
    spec = PatternSpec(kind=Kind.CUT_PROJECT, alpha=(alpha,),
                       spacing_a=1.0, spacing_b=0.618)
    pat = generate(spec, (0, 5))
    # oracle: cumulative sums of spacings chosen by the rotation bits
    pos = 0.0
    for n in range(0, 6):
        assert pat.point(n)[0] == pytest.approx(pos, abs=1e-12)
        bit = math.floor((n + 1) * alpha) - math.floor(n * alpha)
        pos += 0.618 if bit else 1.0


def test_generate_matches_generator_path():
    # walking the generators step by step must reproduce the generated points
    for spec in (
        spec_I(0.537, r=0.35, omega=0.2),
        PatternSpec(kind=Kind.EXAMPLE_II, alpha=(0.43,), g=0.05, omega=(0.9,)),
        PatternSpec(kind=Kind.IDEAL_BILAYER, alpha=(0.38,), omega=(0.51,)),
    ):
        pat = generate(spec, (-20, 20))
        p = np.zeros(spec.dim_space)
        w = spec.omega
        for n in range(0, 20):
            p = p + gamma(spec, 1, w)
            w = tau(spec, (1,), w)
            assert np.max(np.abs(pat.point(n + 1) - p)) < 1e-12
        p = np.zeros(spec.dim_space)
        w = spec.omega
        for n in range(0, 20):
            p = p + gamma(spec, -1, w)
            w = tau(spec, (-1,), w)
            assert np.max(np.abs(pat.point(-n - 1) - p)) < 1e-12


def test_generate_2d_path_independence():
    spec = PatternSpec(kind=Kind.EXAMPLE_IV, alpha=(0.41, 0.33), g=0.08,
                       delta=0.2, delta_prime=0.15, omega=(0.3, 0.8))
    pat = generate(spec, ((-4, 4), (-4, 4)))
    # axis-1-then-axis-2 versus axis-2-then-axis-1 walks to label (3, -2)
    target = (3, -2)
    for order in ((1, 2), (2, 1)):
        p = np.zeros(3)
        w = spec.omega
        for e in order:
            axis = e - 1
            count = target[axis]
            sign = 1 if count >= 0 else -1
            for _ in range(abs(count)):
                p = p + gamma(spec, sign * e, w)
                shift = tuple(sign if i == axis else 0 for i in range(2))
                w = tau(spec, shift, w)
        assert np.max(np.abs(pat.point(target) - p)) < 1e-12


def test_rational_periodicity_exact():
    # alpha = p/q makes the chain exactly q-periodic: p_{n+q} = p_n + q
    spec = spec_I(Fraction(1, 2), r=0.4, omega=0.0)
    pat = generate(spec, (-5, 5))
    for n in range(-5, 1):
        assert pat.point(n + 2)[0] == pat.point(n)[0] + 2


def test_rational_periodicity_tolerance_wide_window():
    spec = spec_I(Fraction(21, 34), r=0.4, omega=0.3)
    pat = generate(spec, (-200, 200))
    xs = pat.coords[:, 0]
    assert np.max(np.abs(xs[34:] - xs[:-34] - 34.0)) < 1e-12


def test_example2_rational_closes_periodically():
    # circumference 1 + p/q: orbit closes after p + q steps, advancing x by p
    alpha = Fraction(2, 5)
    spec = PatternSpec(kind=Kind.EXAMPLE_II, alpha=(alpha,), g=0.05, omega=(0.13,))
    assert label_period(spec) == 7
    pat = generate(spec, (0, 21))
    for n in range(0, 15):
        step = pat.point(n + 7) - pat.point(n)
        assert step[0] == pytest.approx(2.0, abs=1e-12)
        assert step[1] == pytest.approx(0.0, abs=1e-12)


def test_ideal_bilayer_two_heights():
    spec = PatternSpec(kind=Kind.IDEAL_BILAYER, alpha=(0.38,), delta=0.2, omega=(0.7,))
    pat = generate(spec, (0, 50))
    y = pat.coords[:, 1] - pat.coords[0, 1]
    levels = np.unique(np.round(y - y.min(), 12))
    assert len(levels) == 2
    assert levels[1] - levels[0] == pytest.approx(0.2, abs=1e-12)


# ---------------------------------------------------------------------------
# shift_relabel


def test_shift_identity():
    pat = generate(spec_I(0.3, omega=0.1), (-4, 4))
    same = shift_relabel(pat, 0)
    assert np.array_equal(same.coords, pat.coords)
    assert same.window == pat.window


def test_shift_example_value():
    pat = generate(spec_I(0.25, r=0.4, omega=0.0), (-3, 3))
    shifted = shift_relabel(pat, 1)
    assert shifted.point(0)[0] == 0.0
    assert shifted.point(-1)[0] == pytest.approx(-1.4, abs=1e-15)


def test_shift_then_unshift_is_bitwise_exact():
    pat = generate(spec_I(1 / math.sqrt(3), r=0.45, omega=0.77), (-30, 30))
    back = shift_relabel(shift_relabel(pat, 7), -7)
    assert np.array_equal(back.coords, pat.coords)
    assert back.window == pat.window


def test_shift_carries_advanced_seed():
    spec = spec_I(0.3, omega=0.2)
    pat = generate(spec, (-6, 6))
    shifted = shift_relabel(pat, 2)
    assert shifted.spec.omega[0] == pytest.approx(tau(spec, (2,))[0], abs=1e-12)


def test_shift_covariance_matches_regenerated_pattern():
    spec = spec_I(1 / math.sqrt(5), r=0.3, omega=0.4)
    pat = generate(spec, (-20, 20))
    shifted = shift_relabel(pat, 6)
    regen = generate(shifted.spec, shifted.window)
    assert np.max(np.abs(shifted.coords - regen.coords)) < 1e-12


def test_shift_underflow_raises():
    pat = generate(spec_I(0.3), (-3, 3))
    with pytest.raises(WindowError):
        shift_relabel(pat, 4)


# ---------------------------------------------------------------------------
# delone_check


def test_delone_integer_lattice():
    cert = delone_check(generate(spec_I(0.0), (-50, 50)))
    assert cert.r_min == 1.0
    assert cert.r_max == 1.0
    assert cert.ok


def test_delone_bounds_example1():
    # consecutive spacings lie in [1 - 2r, 1 + 2r]
    cert = delone_check(generate(spec_I(1 / math.sqrt(2), r=0.4, omega=0.15), (-800, 800)))
    assert cert.r_min >= 0.2 - 1e-9
    assert cert.r_max <= 1.8 + 1e-9


def test_delone_cut_project_two_letter():
    spec = PatternSpec(kind=Kind.CUT_PROJECT, alpha=((3 - math.sqrt(5)) / 2,),
                       spacing_a=1.0, spacing_b=0.618)
    cert = delone_check(generate(spec, (0, 400)))
    assert cert.r_min == pytest.approx(0.618, abs=1e-12)
    assert cert.r_max == pytest.approx(1.0, abs=1e-12)


def test_delone_2d():
    spec = PatternSpec(kind=Kind.EXAMPLE_III, alpha=(0.41, 0.59), r=0.3,
                       omega=(0.2, 0.9))
    cert = delone_check(generate(spec, ((-15, 15), (-15, 15))))
    assert cert.r_min >= 1.0 - 2 * 0.3 - 1e-9
    assert cert.ok


# ---------------------------------------------------------------------------
# structural properties


def test_lipschitz_bound_holds():
    for spec in (
        spec_I(0.437, r=0.4, omega=0.3),
        PatternSpec(kind=Kind.EXAMPLE_II, alpha=(0.38,), g=0.02, omega=(0.6,)),
    ):
        bound = lipschitz_bound(spec) + 1e-9
        pat = generate(spec, (-60, 60))
        coords = pat.coords
        for m in (1, 2, 5, 17):
            sep = np.linalg.norm(coords[m:] - coords[:-m], axis=-1)
            assert np.max(sep) <= bound * m

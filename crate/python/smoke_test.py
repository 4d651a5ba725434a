"""Smoke test for the pyeulersum extension module.

Build and install first, e.g. `maturin build -m crates/python/Cargo.toml -o dist`
then `pip install dist/pyeulersum-*.whl`.
"""
from fractions import Fraction

import mpmath

import pyeulersum as es

mpmath.mp.dps = 40


def close(text, expected, digits=25):
    return abs(mpmath.mpf(text) - expected) < mpmath.mpf(10) ** (-digits)


assert es.a_numbers(3) == ["1/2", "7/24", "1/16"]
assert Fraction(es.a_number(5)) == Fraction(-1, 1152)
assert Fraction(es.bernoulli(12)) == Fraction(-691, 2730)
assert Fraction(es.h_neg_even_exact(2)) == Fraction(-1, 80)

assert close(es.zeta("3", 40), mpmath.zeta(3))
assert close(es.digamma("0.3", 40), mpmath.digamma(mpmath.mpf("0.3")))
assert close(es.euler_gamma(40), mpmath.euler)
assert close(es.h_series("2", 40), 2 * mpmath.zeta(3))
assert close(es.h("-2", 30), mpmath.mpf(1) / 24, 20)
assert close(es.f_at_nonpositive_integer(2, 40), mpmath.mpf(7) / 24)

lx = es.laurent_at("0", 2, 30)
assert lx.pole_order == 1
assert close(lx.coefficient(-1), mpmath.mpf("0.5"), 18)
assert close(lx.coefficient(0), (1 + mpmath.euler) / 2, 18)

try:
    es.h_continued("0", 20)
except es.PoleError:
    pass
else:
    raise AssertionError("expected PoleError at s = 0")

cfg = es.RunConfig(precision=30, tolerance_exponent=18, max_m=2)
reports = es.verify("cor1", cfg)
assert reports and all(r.passed for r in reports), reports
assert {r.identity_id for r in reports} == {"cor1-2.4", "eq-2.10", "eq-2.9"}
cfg.format = "csv"
assert es.verify_rendered("eq-2.10", cfg).startswith("identity_id,inputs,lhs,rhs")

print("smoke test passed:", len(reports), "reports,", lx)

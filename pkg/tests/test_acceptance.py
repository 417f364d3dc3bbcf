"""Exit criteria 1-8, each recorded for the terminal summary."""

import contextlib
import json
import random
import time

import pytest

from sepnorm.fields import FieldDescriptor
from sepnorm.normalize import (
    Config,
    FieldTwist,
    HypersurfaceInput,
    PrecisionExhausted,
    Shear,
    TransformationLog,
    WitnessVanishesToPrecision,
    certify_factor,
    field_twist,
    plan_step1,
    replay,
    run,
)
from sepnorm.oracle import DensePoly, agree, dense_substitute
from sepnorm.series import SeriesRing
from sepnorm.weierstrass import prepare, reduce_mod

import oracle_corpus
from conftest import ACCEPTANCE
from corpus_tool import cases, structured
from helpers import make_ring, random_distinguished_terms, random_poly, random_step1_poly, random_unit

pytestmark = pytest.mark.acceptance


@contextlib.contextmanager
def criterion(n):
    """Record pass/fail for criterion ``n``; the body may set ``info['detail']``."""
    info = {"detail": ""}
    try:
        yield info
    except BaseException as exc:
        ACCEPTANCE[n] = (False, f"{info['detail']} [{type(exc).__name__}: {exc}]".strip())
        raise
    ACCEPTANCE[n] = (True, info["detail"])


def flagship_input(p):
    return HypersurfaceInput.from_strings(FieldDescriptor(p, "Fp(t)"), ("X", "Y"), [f"t*X^{p}+Y^{p}"])


def dense(f):
    return DensePoly.from_terms(f.field, f.nvars, f.terms())


def test_criterion_1_flagship():
    with criterion(1) as info:
        times = []
        for p in (2, 3):
            start = time.perf_counter()
            result = run(flagship_input(p), Config(precision=24))
            times.append(time.perf_counter() - start)
            R = result.factors[0].ring
            twists = [m for m in result.log if isinstance(m, FieldTwist)]
            assert len(twists) == 1 and len(result.log) == 1
            assert twists[0].delta == R.field(1)
            expected = R.parse(f"t*X^{p}+X^{p + 1}+Y^{p}")
            assert result.factors[0] == expected
            assert field_twist(R.parse(f"t*X^{p}+Y^{p}"), R.field(1)) == expected
            (cert,) = result.certificates
            assert cert.var == 0 and cert.degree == p
            assert not cert.coefficient.is_zero()
            assert times[-1] < 1.0
        info["detail"] = "p=2,3 one twist, degree p, witness nonzero; max %.3f s" % max(times)


def test_criterion_2_inseparability_without_twist():
    with criterion(2) as info:
        R = SeriesRing(FieldDescriptor(2, "Fp(t)"), 2, 24, ("X", "Y"))
        f = R.parse("t*X^2+Y^2")
        # w = X: prepare in Y; w = Y: prepare in X
        for var in (1, 0):
            with pytest.raises(WitnessVanishesToPrecision):
                certify_factor(f, 0, var)
        inp = HypersurfaceInput.from_strings(R.field, R.names, ["t*X^2+Y^2"])
        fixed = Config(precision=24, max_precision=24)
        sheared = {
            # w = X+Y: Y <- Y + X makes the Y slot w, prepare in X
            "X+Y": (Shear(1, 0, 1), 0),
            # w = X+Y^2: X <- X + Y^2 makes the X slot w, prepare in Y
            "X+Y^2": (Shear(0, 1, 2), 1),
        }
        for w, (move, var) in sheared.items():
            with pytest.raises(PrecisionExhausted) as exc_info:
                replay(inp, TransformationLog([move]), fixed, var=var)
            assert isinstance(exc_info.value.__cause__, WitnessVanishesToPrecision), w
        # the twist is what makes it certify
        assert replay(inp, TransformationLog([FieldTwist(R.field(1))]), fixed).certificates
        info["detail"] = "w in {X, Y, X+Y, X+Y^2}: no witness below N=24 without a twist"


def test_criterion_3_derivative_vanishes_in_quotient():
    with criterion(3) as info:
        for p in (2, 3, 5):
            R = SeriesRing(FieldDescriptor(p, "Fp(t)"), 2, 24, ("X", "Y"))
            f = R.parse(f"(X^{p}+t*Y^{p})*(X+1)")
            d = f.partial_derivative(0)
            assert d == R.parse(f"X^{p}+t*Y^{p}")
            g = prepare(f, 0).distinguished
            assert reduce_mod(d, g).is_zero()
        info["detail"] = "p=2,3,5: df/dX = X^p+tY^p and reduces to 0"


def test_criterion_4_weierstrass_roundtrip():
    with criterion(4) as info:
        start = time.perf_counter()
        count = 0
        for p in (2, 3, 5):
            rng = random.Random(f"criterion-4-{p}")
            for k in range(200):
                nvars = 2 + k % 2
                R = make_ring(p, nvars, precision=24, rational=k % 4 >= 2)
                r = nvars - 1
                u = random_unit(rng, R, max_deg=4)
                g, _ = random_distinguished_terms(rng, R, r, rng.randint(1, 3), coeff_deg=4)
                w = prepare(u * g, r)
                assert w.unit == u and w.distinguished.as_series() == g
                hi = prepare(u.with_precision(48) * g.with_precision(48), r)
                assert hi.unit.agrees_with(w.unit)
                assert hi.distinguished.as_series().agrees_with(w.distinguished.as_series())
                count += 1
        elapsed = time.perf_counter() - start
        assert elapsed < 30.0
        info["detail"] = f"{count} instances recovered, N=24/48 agree; {elapsed:.2f} s"


def test_criterion_5_step1_identity():
    with criterion(5) as info:
        checked = 0
        for k in range(100):
            p = (2, 3)[k % 2]
            rng = random.Random(f"criterion-5-{k}")
            f = random_step1_poly(rng, p, 2 + k % 3 // 2)
            assert f.partial_derivative(0).is_zero()
            plan = plan_step1(0, [f], {})
            assert plan is not None and plan.b0 % p
            src = dense(f.ring.gen(plan.j) + f.ring.gen(0) ** plan.n)
            oracle = dense_substitute(dense(f), plan.j, src)
            sheared = Shear(plan.j, 0, plan.n).apply(f)
            assert agree(sheared, oracle, f.precision)
            column = [e for e in f.terms() if e[0] == plan.a0 and e[plan.j] == plan.b0]
            assert column
            for e in column:
                target = list(e)
                target[0] += plan.n
                target[plan.j] -= 1
                expected = f.coefficient(e) * plan.b0
                assert not expected.is_zero()
                assert oracle.terms().get(tuple(target), f.field(0)) == expected
            checked += 1
        info["detail"] = f"{checked} inputs over F_2, F_3 match the oracle"


def _twist_inputs(field, count):
    rng = random.Random(f"criterion-6-{field.p}")
    for _ in range(count):
        R = SeriesRing(field, rng.randint(1, 3), 20)
        f = random_poly(rng, R, 5, 5)
        g = random_poly(rng, R, 5, 5)
        delta = field.wrap(field.raw_poly([rng.randrange(field.p) for _ in range(3)]))
        c1, c2 = field(rng.randrange(field.p)), field(rng.randrange(field.p))
        yield R, f, g, delta, c1, c2


def test_criterion_6_twist_laws():
    with criterion(6) as info:
        n = 0
        for field in (FieldDescriptor(2, "Fp(t)"), FieldDescriptor(3, "Fp(t)")):
            p = field.p
            for R, f, g, delta, c1, c2 in _twist_inputs(field, 200):
                assert field_twist(f * g, delta) == field_twist(f, delta) * field_twist(g, delta)
                assert field_twist(f + g, delta) == field_twist(f, delta) + field_twist(g, delta)
                # composition is checked for delta in F_p, where t + delta*X1 is fixed by the twist
                assert field_twist(field_twist(f, c1), c2) == field_twist(f, c1 + c2)
                assert field_twist(f, field(0)) == f
                for c in list(f.terms().values())[:3]:
                    for e in field_twist(R.constant(c**p), delta).raw_terms:
                        assert e[0] % p == 0
                n += 1
        info["detail"] = f"{n} inputs: homomorphism, composition (delta in F_p), identity, eta-vanishing"


def test_criterion_7_oracle_agreement():
    with criterion(7) as info:
        failures = {op: oracle_corpus.run(op, 1000) for op in oracle_corpus.OPERATIONS}
        bad = {op: idx[:5] for op, idx in failures.items() if idx}
        info["detail"] = f"{len(oracle_corpus.OPERATIONS)} x 1000 cases"
        assert not bad, bad


def test_criterion_8_corpus():
    with criterion(8) as info:
        start = time.perf_counter()
        corpus = cases()
        assert len({c["name"] for c in corpus}) >= 12
        for case in corpus:
            code, out = structured(case)
            assert code == case["exit"], case["id"]
            assert out == case["golden"].read_text(), case["id"]
            assert structured(case) == (code, out), case["id"]
            data = json.loads(out)
            if code == 0:
                assert [m["kind"] for m in data["log"]] == case["moves"], case["id"]
            else:
                assert data["error"] == case["error"], case["id"]
        elapsed = time.perf_counter() - start
        assert elapsed < 60.0
        info["detail"] = f"{len(corpus)} runs match goldens and are byte-stable; {elapsed:.2f} s"

"""Driver that makes a hypersurface generically separable over a coordinate subring.

Given factors ``f_1, ..., f_r`` of a hypersurface in ``k[[X_1, ..., X_{d+1}]]``
(``k = F_p`` or ``F_p(t)``), the driver changes coordinates and the
coefficient field until every factor has ``d f_i / d X_1 != 0``, then
certifies that each factor, prepared as a distinguished polynomial in
``X_1``, is separable over ``k[[X_2, ..., X_{d+1}]]``.

Two kinds of move are used:

* :class:`Shear` ``X_target <- X_target + X_source^m`` (a coordinate change);
* :class:`FieldTwist` ``t <- t + delta * X_1`` (a change of coefficient field).

Variable indices are 0-based throughout: ``X_1`` is index 0 and the
initially distinguished variable ``X_{d+1}`` is index ``nvars - 1``.

All work happens on factors truncated at the working precision ``N``.  Every
move is degree non-decreasing, so truncated factors stay exact below ``N``
and any recorded log can be replayed from the original input at a higher
precision.
"""

from dataclasses import dataclass, field as dc_field
from itertools import combinations, product

from .fields import DomainError, FieldElem, pdivmod, pgcd, pmul, ptaylor
from .series import DEFAULT_PRECISION, SeriesRing, TruncatedSeries, graded_key
from .weierstrass import NotRegular, prepare, reduce_mod, weierstrass_order

# precision used to hold the (polynomial) input factors exactly
EXACT_PRECISION = 1 << 16


# -- errors ------------------------------------------------------------------


class NormalizationError(Exception):
    """Base class for driver failures."""


class ValidationError(NormalizationError):
    """The input does not describe a reduced hypersurface in normal form."""


class InvalidFactor(ValidationError):
    pass


class NotReduced(ValidationError):
    """A factor has a repeated non-unit factor."""

    def __init__(self, index, message=None):
        super().__init__(message or f"factor {index + 1} has a repeated non-unit factor; not reduced")
        self.index = index


class PthPowerFactor(NotReduced):
    def __init__(self, index, message=None):
        super().__init__(index, message or f"factor {index + 1} is a p-th power")


class AxisDegenerate(ValidationError):
    def __init__(self, axis, name=None):
        label = name or f"X{axis + 1}"
        super().__init__(f"the product vanishes on the {label}-axis")
        self.axis = axis


class NotCoprime(ValidationError):
    def __init__(self, i, j):
        super().__init__(f"factors {i + 1} and {j + 1} share a non-unit common factor")
        self.pair = (i, j)


class SearchExhausted(NormalizationError):
    """A bounded search ran out of candidates."""


class RepairFailed(SearchExhausted):
    pass


class NoDeltaFound(SearchExhausted):
    pass


class PrecisionExhausted(SearchExhausted):
    pass


class PrecisionProblem(NormalizationError):
    """A check was inconclusive at the current precision; escalation may help."""


class AssertionFailed(PrecisionProblem):
    pass


class WitnessVanishesToPrecision(PrecisionProblem):
    pass


class NotRationalFunctionField(PrecisionProblem):
    """Step 2 was reached over a perfect field (only possible through truncation)."""


class RetryDelta(NormalizationError):
    """A twist destroyed an earlier witness; the next delta should be tried."""


# -- configuration and records -----------------------------------------------


@dataclass(frozen=True)
class Config:
    precision: int = DEFAULT_PRECISION
    max_precision: int = 96
    delta_attempts: int = 64
    shear_bound: int = 64


@dataclass(frozen=True)
class HypersurfaceInput:
    """Factors of a hypersurface; each factor is a polynomial held exactly."""

    ring: SeriesRing
    factors: tuple
    squarefree_attested: bool = False

    def __post_init__(self):
        if not self.factors:
            raise InvalidFactor("at least one factor is required")
        factors = []
        for f in self.factors:
            if not f.ring.compatible(self.ring):
                raise InvalidFactor("factor lives in a different ring")
            factors.append(TruncatedSeries(self.ring, f.raw_terms))
        object.__setattr__(self, "factors", tuple(factors))

    @classmethod
    def from_strings(cls, field, names, texts, squarefree_attested=False):
        """Parse factor expressions; denominators in ``t`` are cleared per factor."""
        ring = SeriesRing(field, len(names), EXACT_PRECISION, tuple(names))
        factors = tuple(clear_denominators(ring.parse(text)) for text in texts)
        return cls(ring, factors, squarefree_attested)

    @property
    def nvars(self):
        return self.ring.nvars

    def at_precision(self, precision):
        return [f.with_precision(precision) for f in self.factors]


@dataclass(frozen=True)
class DerivativeWitness:
    """A term ``X^c`` of a factor with nonzero coefficient and ``p`` not dividing ``c_1``."""

    index: int
    exponent: tuple
    coefficient: FieldElem


@dataclass(frozen=True)
class Step1Plan:
    s: int
    j: int
    b0: int
    a0: int
    q: int
    n: int
    p: int

    def bumped(self):
        q = self.q + 1
        return Step1Plan(self.s, self.j, self.b0, self.a0, q, q * self.p + 1, self.p)


@dataclass(frozen=True)
class Step2Plan:
    s: int
    exponent: tuple
    alpha: FieldElem
    delta: FieldElem


@dataclass
class StepOutcome:
    factors: list
    distinguished: list
    move: object


@dataclass(frozen=True)
class SeparabilityCertificate:
    index: int
    var: int
    unit: TruncatedSeries
    distinguished: object
    exponent: tuple
    coefficient: FieldElem

    @property
    def degree(self):
        return self.distinguished.degree


@dataclass
class Diagnostics:
    precision: int = DEFAULT_PRECISION
    escalations: int = 0
    delta_attempts: int = 0
    shear_attempts: int = 0
    step1_moves: int = 0
    step2_moves: int = 0
    repair_moves: int = 0

    def as_dict(self):
        return dict(self.__dict__)


@dataclass
class NormalizationResult:
    log: "TransformationLog"
    factors: list
    parameters: list
    coefficient_field: str
    certificates: list
    diagnostics: Diagnostics = dc_field(default_factory=Diagnostics)
    var: int = 0


# -- moves -------------------------------------------------------------------


@dataclass(frozen=True)
class Shear:
    """``X_target <- X_target + X_source^exponent``."""

    target: int
    source: int
    exponent: int

    kind = "shear"

    def __post_init__(self):
        if self.target == self.source or self.exponent < 1:
            raise DomainError("a shear needs distinct variables and a positive exponent")

    def apply(self, f):
        ring = f.ring
        image = ring.gen(self.target) + ring.gen(self.source) ** self.exponent
        return f.substitute(self.target, image)

    def to_record(self):
        return {"kind": self.kind, "target": self.target, "source": self.source, "exponent": self.exponent}

    def describe(self, names):
        t, s = names[self.target], names[self.source]
        src = s if self.exponent == 1 else f"{s}^{self.exponent}"
        return f"{t} <- {t} + {src}"


@dataclass(frozen=True)
class FieldTwist:
    """``t <- t + delta * X_1`` on every coefficient."""

    delta: FieldElem

    kind = "twist"

    def __post_init__(self):
        f = self.delta.field
        if f.is_prime_field:
            raise NotRationalFunctionField("a field twist needs the rational function field")
        if self.delta.is_zero() or not f.is_polynomial(self.delta.raw):
            raise DomainError("delta must be a nonzero polynomial in t")

    def apply(self, f):
        return field_twist(f, self.delta)

    def to_record(self):
        return {"kind": self.kind, "delta": str(self.delta)}

    def describe(self, names):
        field = self.delta.field
        g = field.generator
        if field.is_one(self.delta.raw):
            return f"{g} <- {g} + {names[0]}"
        d = str(self.delta)
        if field.needs_parens(self.delta.raw):
            d = f"({d})"
        return f"{g} <- {g} + {d}*{names[0]}"


def move_from_record(record, field):
    kind = record.get("kind")
    if kind == Shear.kind:
        return Shear(int(record["target"]), int(record["source"]), int(record["exponent"]))
    if kind == FieldTwist.kind:
        return FieldTwist(field.parse(str(record["delta"])))
    raise DomainError(f"unknown move kind {kind!r}")


class TransformationLog:
    """Ordered list of moves; replaying it on the input reproduces the factors."""

    def __init__(self, moves=()):
        self.moves = list(moves)

    def append(self, move):
        self.moves.append(move)

    def __iter__(self):
        return iter(self.moves)

    def __len__(self):
        return len(self.moves)

    def __eq__(self, other):
        return isinstance(other, TransformationLog) and self.moves == other.moves

    def copy(self):
        return TransformationLog(self.moves)

    def replay(self, factors):
        factors = list(factors)
        for move in self.moves:
            factors = [move.apply(f) for f in factors]
        return factors

    def twists(self):
        return [m for m in self.moves if isinstance(m, FieldTwist)]

    def to_records(self):
        return [m.to_record() for m in self.moves]

    @classmethod
    def from_records(cls, records, field):
        return cls(move_from_record(r, field) for r in records)

    def coordinates(self, ring):
        """Images of the current variables as polynomials in the original ones."""
        exact = ring.with_precision(EXACT_PRECISION)
        exprs = list(exact.gens())
        for move in self.moves:
            if isinstance(move, Shear):
                exprs[move.target] = exprs[move.target] - exprs[move.source] ** move.exponent
        return exprs

    def parameters(self, ring, var=0):
        exprs = self.coordinates(ring)
        return [e for i, e in enumerate(exprs) if i != var]

    def coefficient_field(self, ring):
        """Describe the generator of the current coefficient field in original terms."""
        field = ring.field
        if field.is_prime_field:
            return str(field)
        exact = ring.with_precision(EXACT_PRECISION)
        exprs = list(exact.gens())
        s = exact.constant(field.gen())
        twisted = False
        for move in self.moves:
            if isinstance(move, Shear):
                exprs[move.target] = exprs[move.target] - exprs[move.source] ** move.exponent
            else:
                twisted = True
                s = s - _evaluate_poly(move.delta, s) * exprs[0]
        if not twisted:
            return field.generator
        return f"s = {s}"


def _evaluate_poly(delta, s):
    """``delta(s)`` for a polynomial ``delta`` in t and a series ``s``."""
    field = delta.field
    ring = s.ring
    acc = ring.zero()
    for c in reversed(delta.raw[0]):
        acc = acc * s + ring.constant(c)
    return acc


# -- coefficient-field twist -------------------------------------------------


def _twist_coefficient(field, c, delta, count):
    """Coefficients of ``c(t + delta*h)`` as a series in ``h``, first ``count`` terms."""
    p = field.p
    num, den = c
    powers = [field.one]
    for _ in range(1, count):
        powers.append(field.mul(powers[-1], delta))

    def expand(poly):
        out = []
        for k, h in enumerate(ptaylor(poly, p)[:count]):
            out.append(field.mul(field.raw_poly(h), powers[k]) if h else field.zero)
        out.extend([field.zero] * (count - len(out)))
        return out

    top = expand(num)
    if den == (1,):
        return top
    bot = expand(den)
    inv0 = field.inv(bot[0])
    out = []
    for k in range(count):
        acc = top[k]
        for i in range(1, k + 1):
            if not field.is_zero(bot[i]):
                acc = field.sub(acc, field.mul(bot[i], out[k - i]))
        out.append(field.mul(acc, inv0))
    return out


def field_twist(f, delta):
    """Apply ``t <- t + delta * X_1`` to every coefficient of ``f`` (truncated at its precision).

    Rational coefficients are expanded as power series in ``X_1``.
    """
    field = f.field
    if field.is_prime_field:
        raise NotRationalFunctionField("F_p has no p-basis to twist")
    delta = field(delta)
    N = f.precision
    acc = {}
    for e, c in f.raw_terms.items():
        room = N - sum(e)
        if room <= 0:
            continue
        series = _twist_coefficient(field, c, delta.raw, room) if not delta.is_zero() else [c]
        for k, v in enumerate(series):
            if field.is_zero(v):
                continue
            ne = (e[0] + k,) + e[1:]
            old = acc.get(ne)
            acc[ne] = v if old is None else field.add(old, v)
    return TruncatedSeries(f.ring, {e: c for e, c in acc.items() if not field.is_zero(c)})


# -- validation --------------------------------------------------------------


def clear_denominators(f):
    """Scale ``f`` by a unit of k so every coefficient is a polynomial in t."""
    field = f.field
    if field.is_prime_field:
        return f
    p = field.p
    lcm = (1,)
    for _, den in f.raw_terms.values():
        g = pgcd(lcm, den, p)
        lcm = pmul(lcm, pdivmod(den, g, p)[0], p)
    if lcm == (1,):
        return f
    return f.scale(field.wrap((lcm, (1,))))


def axes_ok(factors):
    """Index of the first axis on which some factor vanishes, or ``None``."""
    nv = factors[0].nvars
    for j in range(nv):
        for f in factors:
            if f.axis_restriction(j).is_zero():
                return j
    return None


def _poly_dict(f):
    """Exponent dict of ``f`` as a polynomial over F_p (``t`` first over F_p(t))."""
    field = f.field
    data = {}
    for e, c in f.raw_terms.items():
        if field.is_prime_field:
            data[e] = c
        else:
            for i, a in enumerate(c[0]):
                if a:
                    data[(i,) + e] = a
    return data


def _dict_derivative(data, k, p):
    out = {}
    for e, c in data.items():
        c = c * e[k] % p
        if c:
            out[e[:k] + (e[k] - 1,) + e[k + 1 :]] = c
    return out


def _sympy_setup(factors):
    from sympy import symbols

    field = factors[0].field
    nv = factors[0].nvars
    xs = symbols(f"x0:{nv}")
    gens = xs if field.is_prime_field else (symbols("t_"),) + tuple(xs)
    offset = 0 if field.is_prime_field else 1
    return gens, offset, [_poly_dict(f) for f in factors]


def _vanishes_at_origin(poly, offset):
    """True iff every term involves some X variable (a non-unit of R)."""
    return all(any(e[offset:]) for e in poly.as_dict())


def _check_coprime(factors):
    from sympy import Poly

    p = factors[0].field.p
    gens, offset, dicts = _sympy_setup(factors)
    polys = [Poly.from_dict(d, gens, modulus=p) for d in dicts]
    for i in range(len(polys)):
        for j in range(i + 1, len(polys)):
            g = polys[i].gcd(polys[j])
            # a common factor with nonzero value at the origin is a unit of R
            if _vanishes_at_origin(g, offset):
                raise NotCoprime(i, j)


def _check_reduced(factors):
    """Reject factors with a repeated non-unit factor.

    Over the perfect field F_p, ``h^2 | f`` for an irreducible ``h`` exactly
    when ``h`` divides ``f`` and all its partial derivatives (``t``
    included), so it suffices to test whether that gcd vanishes at the origin.
    """
    from sympy import Poly

    p = factors[0].field.p
    gens, offset, dicts = _sympy_setup(factors)
    for i, data in enumerate(dicts):
        g = Poly.from_dict(data, gens, modulus=p)
        for k in range(len(gens)):
            d = _dict_derivative(data, k, p)
            if not d:
                continue
            g = g.gcd(Poly.from_dict(d, gens, modulus=p))
            if not _vanishes_at_origin(g, offset):
                break
        else:
            raise NotReduced(i)


def validate(inp, check_axes=True):
    """Check the input; raises a :class:`ValidationError` subclass on failure."""
    field = inp.ring.field
    p = field.p
    zero = (0,) * inp.nvars
    for i, f in enumerate(inp.factors):
        if f.is_zero():
            raise InvalidFactor(f"factor {i + 1} is zero")
        if zero in f.raw_terms:
            raise InvalidFactor(f"factor {i + 1} has a nonzero constant term (it is a unit)")
        if not field.is_prime_field and not all(field.is_polynomial(c) for c in f.raw_terms.values()):
            raise InvalidFactor(f"factor {i + 1} has coefficients that are not polynomials in {field.generator}")
        if f.is_pth_power() is not None:
            raise PthPowerFactor(i)
        if inp.nvars == 1:
            n = f.order()
            if n % p == 0:
                raise PthPowerFactor(i, f"factor {i + 1} is a unit times X^{n} with p | {n}; not reduced")
            if n > 1:
                raise NotReduced(i, f"factor {i + 1} is a unit times X^{n}; not reduced")
    if not inp.squarefree_attested:
        if inp.nvars > 1:
            _check_reduced(inp.factors)
        if len(inp.factors) > 1:
            _check_coprime(inp.factors)
    if check_axes:
        j = axes_ok(list(inp.factors))
        if j is not None:
            raise AxisDegenerate(j, inp.ring.names[j])
    return inp


def _restricted_after(f, j, shifts):
    """Axis-``j`` restriction of ``f`` after ``X_i <- X_i + X_j^m`` for ``(i, m)`` in ``shifts``.

    Only the variables in ``shifts`` survive on the axis, as ``X_j^m``, so the
    restriction is the univariate polynomial collected here.
    """
    field = f.field
    shifted = dict(shifts)
    out = {}
    for e, c in f.raw_terms.items():
        k = e[j]
        ok = True
        for i, x in enumerate(e):
            if i == j or not x:
                continue
            m = shifted.get(i)
            if m is None:
                ok = False
                break
            k += m * x
        if ok:
            old = out.get(k)
            out[k] = c if old is None else field.add(old, c)
    return any(not field.is_zero(c) for c in out.values())


def _shift_candidates(others, p, bound):
    """Shift assignments ``((i, m), ...)``: fewer shifted variables first, then smaller exponents."""
    admissible = [m for m in range(1, bound + 1) if m % p]
    for size in range(1, len(others) + 1):
        for subset in combinations(others, size):
            tuples = sorted(product(admissible, repeat=size), key=lambda ms: (sum(ms), ms))
            for ms in tuples:
                yield tuple(zip(subset, ms))


def ensure_condition1(inp, config=None):
    """Repair degenerate axes with shears; returns ``(new_input, moves)``.

    An axis ``j`` on which some factor vanishes is repaired by shears
    ``X_i <- X_i + X_j^m`` with ``i != j`` and ``p`` not dividing ``m``.  Such
    shears leave every other axis restriction unchanged.  Single shears are
    tried first, then several variables shifted together; the latter always
    succeed for polynomial factors once the exponents are spread far enough.
    """
    config = config or Config()
    p = inp.ring.field.p
    factors = list(inp.factors)
    moves = []
    nv = inp.nvars
    while True:
        j = axes_ok(factors)
        if j is None:
            break
        if nv == 1:
            raise RepairFailed("a single variable admits no shear")
        others = [i for i in range(nv) if i != j]
        for shifts in _shift_candidates(others, p, config.shear_bound):
            if all(_restricted_after(f, j, shifts) for f in factors):
                for i, m in shifts:
                    move = Shear(i, j, m)
                    factors = [move.apply(f) for f in factors]
                    moves.append(move)
                break
        else:
            raise RepairFailed(f"no shear up to exponent {config.shear_bound} repairs axis {j + 1}")
    return HypersurfaceInput(inp.ring, tuple(factors), inp.squarefree_attested), moves


# -- the step machinery ------------------------------------------------------


def make_distinguished(factors, var=None, precision=None):
    """Weierstrass-prepare every factor with respect to ``var`` (default: last variable)."""
    out = []
    for f in factors:
        r = f.nvars - 1 if var is None else var
        out.append(prepare(f, r, precision))
    return out


def _distinguished_series(factors):
    try:
        return [w.distinguished.as_series() for w in make_distinguished(factors)]
    except NotRegular as exc:
        raise AssertionFailed(str(exc)) from exc


def find_witness(f, index=0):
    """First (graded-lex) term of ``df/dX_1``, as a witness on ``f``; ``None`` if zero to precision."""
    if f.precision < 2:
        return None
    lead = f.partial_derivative(0).leading_term()
    if lead is None:
        return None
    e = lead[0]
    c = (e[0] + 1,) + e[1:]
    return DerivativeWitness(index, c, f.coefficient(c))


def _check_witnesses(dists, witnesses, skip=None):
    """Indices of recorded witnesses whose coefficient vanished."""
    bad = []
    for i, w in witnesses.items():
        if i == skip:
            continue
        if dists[i].coefficient(w.exponent).is_zero():
            bad.append(i)
    return bad


def _refresh_witnesses(dists, witnesses):
    for i, w in list(witnesses.items()):
        witnesses[i] = DerivativeWitness(i, w.exponent, dists[i].coefficient(w.exponent))


def plan_step1(s, dists, witnesses):
    """Plan a shear ``X_j <- X_j + X_1^n`` for factor ``s``; ``None`` if every partial vanishes."""
    f = dists[s]
    N = f.precision
    p = f.field.p
    nv = f.nvars
    window = {e: c for e, c in f.raw_terms.items() if sum(e) < N - 1}
    for j in range(1, nv):
        if f.partial_derivative(j).is_zero():
            continue
        bs = [e[j] for e in window if e[j] % p]
        if not bs:
            continue
        b0 = min(bs)
        a0 = min(e[0] for e in window if e[j] == b0)
        bound = max([a0] + [w.exponent[0] for i, w in witnesses.items() if i != s])
        q = 1
        while q * p + 1 <= bound:
            q += 1
        return Step1Plan(s, j, b0, a0, q, q * p + 1, p)
    return None


def _column(f, a, j, b):
    """Coefficient of ``X_1^a X_j^b`` as a dict over the remaining monomials."""
    out = {}
    for e, c in f.raw_terms.items():
        if e[0] == a and e[j] == b:
            rest = list(e)
            rest[0] = 0
            rest[j] = 0
            out[tuple(rest)] = c
    return out


def apply_step1(plan, factors, dists, witnesses, log):
    """Shear every factor by ``plan``; verify the coefficient identity and old witnesses."""
    move = Shear(plan.j, 0, plan.n)
    new_factors = [move.apply(f) for f in factors]
    if axes_ok(new_factors) is not None:
        raise _AxisLost(plan)
    new_dists = _distinguished_series(new_factors)
    field = factors[0].field
    N = new_dists[plan.s].precision
    room = N - 1 - (plan.a0 + plan.n + plan.b0 - 1)
    before = {m: c for m, c in _column(dists[plan.s], plan.a0, plan.j, plan.b0).items() if sum(m) < room}
    after = {m: c for m, c in _column(new_dists[plan.s], plan.a0 + plan.n, plan.j, plan.b0 - 1).items() if sum(m) < room}
    expected = {m: field.scale_int(c, plan.b0) for m, c in before.items()}
    if not expected:
        raise AssertionFailed("the shear coefficient identity falls outside the precision window")
    if after != expected:
        raise AssertionFailed("post-shear coefficient differs from b0 * F[a0, b0]")
    if _check_witnesses(new_dists, witnesses, skip=plan.s):
        raise AssertionFailed("a shear destroyed an earlier witness")
    log.append(move)
    _refresh_witnesses(new_dists, witnesses)
    return StepOutcome(new_factors, new_dists, move)


class _AxisLost(Exception):
    def __init__(self, plan):
        super().__init__("shear made an axis restriction vanish")
        self.plan = plan


def delta_candidate(field, k):
    """The ``k``-th twist parameter (``k >= 1``): base-p digits of ``k`` as a polynomial in t."""
    digits = []
    while k:
        k, d = divmod(k, field.p)
        digits.append(d)
    return field.wrap(field.raw_poly(digits))


def _step2_target(f):
    field = f.field
    N = f.precision
    bad = [e for e, c in f.raw_terms.items() if sum(e) < N - 1 and field.root(c) is None]
    if not bad:
        return None
    e = min(bad, key=graded_key)
    return e, field.wrap(f.raw_terms[e])


def apply_step2(plan, factors, dists, witnesses, log):
    """Twist every coefficient by ``t <- t + delta X_1`` and check the new witness."""
    move = FieldTwist(plan.delta)
    new_factors = [move.apply(f) for f in factors]
    new_dists = _distinguished_series(new_factors)
    target = (plan.exponent[0] + 1,) + plan.exponent[1:]
    expected = plan.delta * plan.alpha.derivative()
    if new_dists[plan.s].coefficient(target) != expected:
        raise AssertionFailed("twisted coefficient differs from delta * d(alpha)/dt")
    if _check_witnesses(new_dists, witnesses, skip=plan.s):
        raise RetryDelta(f"delta = {plan.delta} kills an earlier witness")
    if axes_ok(new_factors) is not None:
        raise AssertionFailed("a twist made an axis restriction vanish")
    log.append(move)
    _refresh_witnesses(new_dists, witnesses)
    return StepOutcome(new_factors, new_dists, move)


def plan_step2(s, factors, dists, witnesses, log, config=None, diagnostics=None):
    """Choose the offending coefficient and the first delta that passes ``apply_step2``.

    Returns ``(plan, outcome)``.
    """
    config = config or Config()
    f = dists[s]
    field = f.field
    if field.is_prime_field:
        raise NotRationalFunctionField(f"factor {s + 1} has vanishing partials over a perfect field")
    target = _step2_target(f)
    if target is None:
        raise WitnessVanishesToPrecision(f"factor {s + 1} looks like a p-th power below precision {f.precision}")
    exponent, alpha = target
    for k in range(1, config.delta_attempts + 1):
        plan = Step2Plan(s, exponent, alpha, delta_candidate(field, k))
        if diagnostics is not None:
            diagnostics.delta_attempts += 1
        try:
            return plan, apply_step2(plan, factors, dists, witnesses, log)
        except RetryDelta:
            continue
    raise NoDeltaFound(f"no delta among {config.delta_attempts} candidates keeps every witness")


def _step1(s, factors, dists, witnesses, log, config, diagnostics):
    plan = plan_step1(s, dists, witnesses)
    if plan is None:
        return None
    tried = []
    for _ in range(config.shear_bound):
        diagnostics.shear_attempts += 1
        try:
            return apply_step1(plan, factors, dists, witnesses, log)
        except _AxisLost:
            tried.append(plan.q)
            plan = plan.bumped()
    span = f"q in {tried[0]}..{tried[-1]}" if tried else "no q tried"
    raise RepairFailed(f"no shear keeps every axis after {config.shear_bound} attempts ({span})")


def search(factors, log, config=None, diagnostics=None):
    """Apply moves until every factor has a derivative witness; returns (factors, witnesses)."""
    config = config or Config()
    diagnostics = diagnostics or Diagnostics()
    factors = list(factors)
    dists = _distinguished_series(factors)
    witnesses = {}
    for s in range(len(factors)):
        w = find_witness(dists[s], s)
        while w is None:
            outcome = _step1(s, factors, dists, witnesses, log, config, diagnostics)
            if outcome is None:
                _, outcome = plan_step2(s, factors, dists, witnesses, log, config, diagnostics)
                diagnostics.step2_moves += 1
            else:
                diagnostics.step1_moves += 1
            factors, dists = outcome.factors, outcome.distinguished
            w = find_witness(dists[s], s)
            if w is None:
                raise AssertionFailed(f"factor {s + 1} still has no witness after a move")
        witnesses[s] = w
    return factors, witnesses


# -- certification -----------------------------------------------------------


def certify_factor(f, index=0, var=0):
    if weierstrass_order(f, var) is None:
        raise WitnessVanishesToPrecision(f"factor {index + 1} is not regular in variable {var + 1}")
    try:
        w = prepare(f, var)
    except NotRegular as exc:
        raise WitnessVanishesToPrecision(str(exc)) from exc
    g = w.distinguished
    reduced = reduce_mod(g.as_series().partial_derivative(var), g)
    lead = reduced.leading_term()
    if lead is None:
        raise WitnessVanishesToPrecision(f"derivative of factor {index + 1} vanishes below precision {f.precision}")
    return SeparabilityCertificate(index, var, w.unit, g, lead[0], lead[1])


def certify(factors, log=None, var=0, diagnostics=None):
    """Certify every factor as separable in ``X_{var+1}``; returns a :class:`NormalizationResult`."""
    log = log if log is not None else TransformationLog()
    certs = [certify_factor(f, i, var) for i, f in enumerate(factors)]
    ring = factors[0].ring
    diagnostics = diagnostics or Diagnostics(precision=ring.precision)
    return NormalizationResult(
        log=log,
        factors=list(factors),
        parameters=log.parameters(ring, var),
        coefficient_field=log.coefficient_field(ring),
        certificates=certs,
        diagnostics=diagnostics,
        var=var,
    )


def _precisions(config):
    N = config.precision
    out = [N]
    while N < config.max_precision:
        N = min(2 * N, config.max_precision)
        out.append(N)
    return out


def run(inp, config=None):
    """Validate, repair, search for moves and certify, escalating precision as needed."""
    config = config or Config()
    validate(inp, check_axes=False)
    prefix = []
    if axes_ok(list(inp.factors)) is not None:
        _, prefix = ensure_condition1(inp, config)
    log = TransformationLog(prefix)
    diagnostics = Diagnostics(repair_moves=len(prefix))
    last = None
    for i, N in enumerate(_precisions(config)):
        diagnostics.precision = N
        diagnostics.escalations = i
        try:
            factors = log.replay(inp.at_precision(N))
            factors, _ = search(factors, log, config, diagnostics)
            return certify(factors, log, 0, diagnostics)
        except PrecisionProblem as exc:
            last = exc
    raise PrecisionExhausted(f"inconclusive up to precision {config.max_precision}: {last}") from last


def replay(inp, log, config=None, var=0):
    """Re-apply a saved log and certify, escalating precision but never searching."""
    config = config or Config()
    validate(inp, check_axes=False)
    last = None
    for i, N in enumerate(_precisions(config)):
        factors = log.replay(inp.at_precision(N))
        try:
            if axes_ok(factors) is not None:
                raise AssertionFailed("replayed factors violate the axis condition")
            return certify(factors, log, var, Diagnostics(precision=N, escalations=i))
        except PrecisionProblem as exc:
            last = exc
    raise PrecisionExhausted(f"replayed log does not certify up to precision {config.max_precision}: {last}") from last


__all__ = [
    "AssertionFailed",
    "AxisDegenerate",
    "Config",
    "DerivativeWitness",
    "Diagnostics",
    "FieldTwist",
    "HypersurfaceInput",
    "InvalidFactor",
    "NoDeltaFound",
    "NormalizationError",
    "NormalizationResult",
    "NotCoprime",
    "NotRationalFunctionField",
    "NotReduced",
    "PrecisionExhausted",
    "PrecisionProblem",
    "PthPowerFactor",
    "RepairFailed",
    "RetryDelta",
    "SearchExhausted",
    "SeparabilityCertificate",
    "Shear",
    "Step1Plan",
    "Step2Plan",
    "StepOutcome",
    "TransformationLog",
    "ValidationError",
    "WitnessVanishesToPrecision",
    "apply_step1",
    "apply_step2",
    "certify",
    "certify_factor",
    "clear_denominators",
    "delta_candidate",
    "ensure_condition1",
    "field_twist",
    "find_witness",
    "make_distinguished",
    "plan_step1",
    "plan_step2",
    "replay",
    "run",
    "search",
    "validate",
]

"""States on the free algebra as exact measures.

Four state builders are available: Lebesgue, Farey counting (uniform mass
on the points of fixed denominator d), finite mixtures, and push-forwards
along validated homeomorphisms.  Every evaluation is an exact rational.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass

from gmpy2 import mpq

from .rationals import QONE, QZERO, q, qstr
from . import pwl
from .homeo import McNaughtonHomeo, PwlMap, apply_map, as_homeo


@dataclass(frozen=True)
class StateSpec:
    kind: str  # "lebesgue" | "farey" | "mixture" | "pushforward"
    d: int = 0
    parts: tuple = ()  # ((weight, StateSpec), ...) for mixtures
    base: object = None
    map: object = None  # validated McNaughtonHomeo for push-forwards

    def __post_init__(self):
        if self.kind == "farey" and self.d < 1:
            raise ValueError("farey denominator must be >= 1")
        if self.kind == "mixture":
            parts = tuple((mpq(w), s) for w, s in self.parts)
            if sum((w for w, _ in parts), QZERO) != QONE:
                raise ValueError("mixture weights must sum to 1")
            if any(w < 0 or w > 1 for w, _ in parts):
                raise ValueError("mixture weights must lie in [0,1]")
            object.__setattr__(self, "parts", parts)
        if self.kind == "pushforward" and not isinstance(self.map,
                                                         McNaughtonHomeo):
            raise ValueError("push-forward requires a validated homeomorphism")

    def describe(self) -> str:
        if self.kind == "lebesgue":
            return "lebesgue"
        if self.kind == "farey":
            return "farey(%d)" % self.d
        if self.kind == "mixture":
            return "mixture(%s)" % ", ".join(
                "%s*%s" % (qstr(w), s.describe()) for w, s in self.parts
            )
        return "pushforward(%s)" % self.base.describe()


def lebesgue() -> StateSpec:
    return StateSpec("lebesgue")


def farey(d: int) -> StateSpec:
    return StateSpec("farey", d=d)


def mixture(parts) -> StateSpec:
    return StateSpec("mixture", parts=tuple(parts))


def pushforward(base: StateSpec, homeo: McNaughtonHomeo) -> StateSpec:
    return StateSpec("pushforward", base=base, map=homeo)


def mix_state(d: int) -> StateSpec:
    """The half-and-half mixture of Lebesgue with counting on denominator d."""
    half = q(1, 2)
    return mixture(((half, lebesgue()), (half, farey(d))))


def farey_points(n: int, d: int):
    """All points of [0,1]^n with denominator exactly d, lexicographic."""
    if d < 1:
        raise ValueError("d must be >= 1")
    out = []
    for nums in itertools.product(range(d + 1), repeat=n):
        if math.gcd(d, *nums) == 1:
            out.append(tuple(q(a, d) for a in nums))
    return out


def state_eval(spec: StateSpec, f: pwl.PwlFunction):
    """The value the state assigns to f, as an exact rational."""
    return _eval(spec, f, ())


def _eval(spec, f, maps):
    # maps = (m_1, ..., m_k) pending from enclosing push-forwards,
    # standing for the composite f o m_1 o ... o m_k (m_k acts first)
    if spec.kind == "lebesgue":
        if not maps:
            return pwl.integrate(f)
        total = maps[0]
        for m in maps[1:]:
            from .homeo import compose_maps
            total = compose_maps(total, m)
        return pwl.integrate_composed(f, _as_map(total))
    if spec.kind == "farey":
        pts = farey_points(f.n, spec.d)
        total = QZERO
        for p in pts:
            for m in reversed(maps):
                p = apply_map(m, p)
            total += f.eval(p)
        return total / len(pts)
    if spec.kind == "mixture":
        return sum(
            (w * _eval(s, f, maps) for w, s in spec.parts), QZERO
        )
    if spec.kind == "pushforward":
        return _eval(spec.base, f, maps + (spec.map,))
    raise ValueError("unknown state kind %r" % spec.kind)


def _as_map(m):
    return m.pwl_map if isinstance(m, McNaughtonHomeo) else m


@dataclass(frozen=True)
class InvarianceReport:
    state: StateSpec
    map_label: str
    values: tuple  # ((base value, push-forward value), ...)
    all_equal: bool

    def summary(self):
        status = "invariant" if self.all_equal else "NOT invariant"
        return "%s under %s: %s (%d functions)" % (
            self.state.describe(), self.map_label, status, len(self.values)
        )


def invariance_check(spec: StateSpec, homeo: McNaughtonHomeo,
                     fs) -> InvarianceReport:
    """Compare the state with its push-forward on each test function."""
    pushed = pushforward(spec, homeo)
    pairs = []
    for f in fs:
        pairs.append((state_eval(spec, f), state_eval(pushed, f)))
    label = "map[%d pieces]" % len(_as_map(homeo).matrices)
    return InvarianceReport(
        spec, label, tuple(pairs), all(a == b for a, b in pairs)
    )


@dataclass(frozen=True)
class CoherenceReport:
    value_n: mpq
    value_n_plus_1: mpq
    coherent: bool


def coherence_check(d: int, f: pwl.PwlFunction,
                    use_lebesgue: bool = False) -> CoherenceReport:
    """Compare the n-variable state with the projected (n+1)-variable one.

    The projection push-forward acts on functions as the cylinder
    embedding, so the two sides are state values of f and cylinder(f).
    """
    n = f.n
    spec_n = lebesgue() if use_lebesgue else mix_state(d)
    spec_m = spec_n
    lifted = pwl.cylinder(f, n + 1)
    a = state_eval(spec_n, f)
    b = state_eval(spec_m, lifted)
    return CoherenceReport(a, b, a == b)


@dataclass(frozen=True)
class FaithfulnessReport:
    values: tuple  # ((is_zero_function, value), ...)
    passed: bool


def faithfulness_check(spec: StateSpec, fs) -> FaithfulnessReport:
    """Every nonzero test function must get strictly positive mass."""
    rows = []
    ok = True
    for f in fs:
        zero = f.is_zero_function()
        val = state_eval(spec, f)
        rows.append((zero, val))
        if not zero and val <= 0:
            ok = False
    return FaithfulnessReport(tuple(rows), ok)


def state_to_json(spec: StateSpec):
    if spec.kind == "lebesgue":
        return {"kind": "lebesgue"}
    if spec.kind == "farey":
        return {"kind": "farey", "d": spec.d}
    if spec.kind == "mixture":
        return {"kind": "mixture",
                "parts": [[qstr(w), state_to_json(s)] for w, s in spec.parts]}
    return {"kind": "pushforward",
            "base": state_to_json(spec.base),
            "map": spec.map.pwl_map.to_json()}


def state_from_json(data) -> StateSpec:
    kind = data["kind"]
    if kind == "lebesgue":
        return lebesgue()
    if kind == "farey":
        return farey(int(data["d"]))
    if kind == "mixture":
        return mixture(tuple(
            (q(w), state_from_json(s)) for w, s in data["parts"]
        ))
    if kind == "pushforward":
        base = state_from_json(data["base"])
        homeo = as_homeo(PwlMap.from_json(data["map"]), check_tiling=False)
        return pushforward(base, homeo)
    raise ValueError("unknown state kind %r" % kind)

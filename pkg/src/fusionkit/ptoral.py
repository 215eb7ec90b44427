"""Truncated discrete p-toral groups.

A truncated group is the extension ``(Z/p^l)^r . pi`` with elements
``(t, w)``, multiplied by

    (t1, w1)(t2, w2) = (t1 + phi(w1) t2 + c(w1, w2), w1 w2).

The complement ``pi`` is a finite abelian p-group written as a product of
cyclic groups; its elements are tuples of exponents of the chosen generators.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from itertools import product

from .groups import FiniteGroup, PreconditionError, Subgroup, is_power_of, is_prime

Matrix = tuple[tuple[int, ...], ...]


def mat_mul(a: Matrix, b: Matrix, n: int) -> Matrix:
    r = len(a)
    return tuple(tuple(sum(a[i][k] * b[k][j] for k in range(r)) % n for j in range(r))
                 for i in range(r))


def mat_vec(a: Matrix, v: tuple[int, ...], n: int) -> tuple[int, ...]:
    return tuple(sum(a[i][k] * v[k] for k in range(len(v))) % n for i in range(len(a)))


def identity_matrix(r: int) -> Matrix:
    return tuple(tuple(int(i == j) for j in range(r)) for i in range(r))


def _reduce(m, n: int) -> Matrix:
    return tuple(tuple(int(x) % n for x in row) for row in m)


@dataclass(frozen=True)
class TruncationSpec:
    """Input data for :func:`make_truncation`.

    ``complement`` lists the orders of the cyclic factors of pi (empty for a
    trivial complement), ``action`` gives one integer matrix per factor
    generator, and ``cocycle`` maps pairs of complement elements to torus
    vectors; missing pairs are zero.
    """

    p: int
    rank: int
    level: int
    complement: tuple[int, ...] = ()
    action: tuple = ()
    cocycle: dict = field(default_factory=dict, compare=False, hash=False)

    @property
    def modulus(self) -> int:
        return self.p ** self.level

    def complement_elements(self) -> list[tuple[int, ...]]:
        return list(product(*(range(m) for m in self.complement)))

    def comp_mul(self, a: tuple[int, ...], b: tuple[int, ...]) -> tuple[int, ...]:
        return tuple((x + y) % m for x, y, m in zip(a, b, self.complement))

    def phi(self, w: tuple[int, ...]) -> Matrix:
        n = self.modulus
        m = identity_matrix(self.rank)
        for gen, k in zip(self.action, w):
            g = _reduce(gen, n)
            for _ in range(k):
                m = mat_mul(m, g, n)
        return m

    def c(self, w1, w2) -> tuple[int, ...]:
        v = self.cocycle.get((tuple(w1), tuple(w2)))
        if v is None:
            return (0,) * self.rank
        return tuple(int(x) % self.modulus for x in v)

    def at_level(self, level: int) -> "TruncationSpec":
        """Same integer data at another level; the cocycle scales by powers of p."""
        shift = level - self.level
        coc = {}
        for k, v in self.cocycle.items():
            if shift >= 0:
                coc[k] = tuple(int(x) * self.p ** shift for x in v)
            else:
                d = self.p ** (-shift)
                if any(int(x) % d for x in v):
                    raise PreconditionError("cocycle does not descend to a lower level")
                coc[k] = tuple(int(x) // d for x in v)
        return TruncationSpec(self.p, self.rank, level, self.complement, self.action, coc)

    # JSON ---------------------------------------------------------------

    def to_json(self) -> dict:
        n = self.modulus
        if len(self.complement) == 1:
            comp = {"kind": "cyclic", "order": self.complement[0]}
        elif not self.complement:
            comp = {"kind": "trivial"}
        else:
            comp = {"kind": "abelian", "orders": list(self.complement)}
        doc = {
            "p": self.p,
            "rank": self.rank,
            "level": self.level,
            "complement": comp,
            "action": [[[str(int(x) % n) for x in row] for row in m] for m in self.action],
        }
        coc = []
        for (w1, w2), v in sorted(self.cocycle.items()):
            vec = [str(int(x) % n) for x in v]
            if any(x != "0" for x in vec):
                coc.append([_w_json(w1), _w_json(w2), vec])
        if coc:
            doc["cocycle"] = coc
        return doc

    @classmethod
    def from_json(cls, doc: dict) -> "TruncationSpec":
        comp = doc.get("complement", {"kind": "trivial"})
        kind = comp.get("kind")
        if kind == "cyclic":
            orders = (int(comp["order"]),)
        elif kind == "trivial":
            orders = ()
        elif kind == "abelian":
            orders = tuple(int(x) for x in comp["orders"])
        else:
            raise PreconditionError(f"unknown complement kind {kind!r}")
        action = tuple(tuple(tuple(int(x) for x in row) for row in m) for m in doc.get("action", []))
        coc = {}
        for w1, w2, vec in doc.get("cocycle", []):
            coc[(_w_parse(w1, len(orders)), _w_parse(w2, len(orders)))] = tuple(int(x) for x in vec)
        return cls(int(doc["p"]), int(doc["rank"]), int(doc["level"]), orders, action, coc)

    def dumps(self) -> str:
        return json.dumps(self.to_json(), sort_keys=True)


def _w_json(w):
    return w[0] if len(w) == 1 else list(w)


def _w_parse(w, k: int) -> tuple[int, ...]:
    if isinstance(w, list):
        return tuple(int(x) for x in w)
    if k != 1:
        raise PreconditionError("complement element must be a list for a non-cyclic complement")
    return (int(w),)


def validate_spec(spec: TruncationSpec) -> None:
    if not is_prime(spec.p):
        raise PreconditionError(f"p = {spec.p} is not prime")
    if spec.rank < 0 or spec.level < 1:
        raise PreconditionError("rank must be >= 0 and level >= 1")
    if len(spec.action) != len(spec.complement):
        raise PreconditionError("one action matrix per complement generator is required")
    for m in spec.complement:
        if not is_power_of(m, spec.p) or m < 2:
            raise PreconditionError(f"complement factor of order {m} is not a nontrivial p-group")
    n = spec.modulus
    ident = identity_matrix(spec.rank)
    mats = [_reduce(a, n) for a in spec.action]
    for a in mats:
        if len(a) != spec.rank or any(len(row) != spec.rank for row in a):
            raise PreconditionError("action matrix has the wrong shape")
    # phi must be a homomorphism on Z/m1 x ... x Z/mk
    for a, m in zip(mats, spec.complement):
        power = ident
        for _ in range(m):
            power = mat_mul(power, a, n)
        if power != ident:
            raise PreconditionError("action is not a homomorphism: generator power is not the identity")
    for a, b in product(mats, repeat=2):
        if mat_mul(a, b, n) != mat_mul(b, a, n):
            raise PreconditionError("action is not a homomorphism: generator images do not commute")
    elems = spec.complement_elements()
    for w in elems:
        if spec.c(w, elems[0]) != (0,) * spec.rank or spec.c(elems[0], w) != (0,) * spec.rank:
            raise PreconditionError("cocycle is not normalized")
    for w1, w2, w3 in product(elems, repeat=3):
        lhs = mat_vec(spec.phi(w1), spec.c(w2, w3), n)
        a = spec.c(spec.comp_mul(w1, w2), w3)
        b = spec.c(w1, spec.comp_mul(w2, w3))
        d = spec.c(w1, w2)
        if any((x - y + z - u) % n for x, y, z, u in zip(lhs, a, b, d)):
            raise PreconditionError(f"cocycle identity fails at {(w1, w2, w3)}")


class TruncatedPToralGroup(FiniteGroup):
    """Finite group ``(Z/p^l)^r . pi`` with its distinguished torus."""

    def __init__(self, spec: TruncationSpec, names: dict[str, tuple] | None = None):
        validate_spec(spec)
        self.spec = spec
        self.p = spec.p
        self.rank = spec.rank
        self.level = spec.level
        n = spec.modulus
        tori = list(product(range(n), repeat=spec.rank))
        comps = spec.complement_elements()
        phis = {w: spec.phi(w) for w in comps}
        cocs = {(a, b): spec.c(a, b) for a in comps for b in comps}

        def mul(x, y):
            t1, w1 = x
            t2, w2 = y
            u = mat_vec(phis[w1], t2, n)
            c = cocs[(w1, w2)]
            return (tuple((a + b + d) % n for a, b, d in zip(t1, u, c)), spec.comp_mul(w1, w2))

        labels = [(t, w) for t in tori for w in comps]
        zero = ((0,) * spec.rank, (0,) * len(spec.complement))
        super().__init__(labels, mul, zero, name=f"S(p={spec.p},r={spec.rank},l={spec.level})")
        self.torus = Subgroup(self, frozenset(self.index[(t, zero[1])] for t in tori))
        self.names: dict[str, int] = {}
        for key, lab in (names or {}).items():
            self.names[key] = self.index[lab]

    def element_at(self, t, w=None) -> int:
        if w is None:
            w = (0,) * len(self.spec.complement)
        n = self.spec.modulus
        return self.index[(tuple(int(x) % n for x in t), tuple(w))]

    def torus_part(self, a: int) -> tuple[int, ...]:
        return self.labels[a][0]

    def complement_part(self, a: int) -> tuple[int, ...]:
        return self.labels[a][1]

    def lookup(self, token: str) -> int:
        """Element from a symbolic name, or from ``t=(..);w=(..)`` / integer index syntax."""
        token = token.strip()
        if token in self.names:
            return self.names[token]
        if token.isdigit():
            k = int(token)
            if k >= self.order:
                raise PreconditionError(f"element index {k} out of range")
            return k
        raise PreconditionError(f"unknown element name {token!r}")

    def name_of(self, a: int) -> str:
        for k, v in sorted(self.names.items()):
            if v == a:
                return k
        t, w = self.labels[a]
        return f"({','.join(map(str, t))}|{','.join(map(str, w))})"

    def rank_at_level(self, P: Subgroup) -> int:
        """Number of cyclic factors of ``P cap T``."""
        Q = P.intersect(self.torus)
        count = sum(1 for a in Q.elements if self.pow(a, self.p) == self.identity)
        r = 0
        while count > 1:
            count //= self.p
            r += 1
        return r

    def describe(self) -> dict:
        return {
            "spec": self.spec.to_json(),
            "order": self.order,
            "torus_order": self.torus.order,
            "names": {k: [list(x) for x in self.labels[v]] for k, v in sorted(self.names.items())},
        }


def make_truncation(spec: TruncationSpec, names: dict[str, tuple] | None = None) -> TruncatedPToralGroup:
    return TruncatedPToralGroup(spec, names)


def level_inclusion(small: TruncatedPToralGroup, big: TruncatedPToralGroup) -> list[int]:
    """Index map of the canonical inclusion ``(t, w) -> (p t, w)`` between consecutive levels."""
    if big.level != small.level + 1 or big.p != small.p or big.rank != small.rank:
        raise PreconditionError("levels must be consecutive with equal prime and rank")
    p = small.p
    out = []
    for t, w in small.labels:
        out.append(big.index[(tuple(p * x for x in t), w)])
    t = small.table
    bt = big.table
    for a in range(small.order):
        for b in range(small.order):
            if out[t[a][b]] != bt[out[a]][out[b]]:
                raise PreconditionError("level data are not compatible with the inclusion")
    return out

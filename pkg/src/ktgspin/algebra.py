"""Finite quandles, G-families of quandles and their associated quandles.

Tables are plain nested lists over ``range(m)``.  Verification is
exhaustive, so carriers are capped at ``MAX_CARRIER`` elements.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field

MAX_CARRIER = 64


class AlgebraError(ValueError):
    pass


def _check_square(table, m=None):
    m = len(table) if m is None else m
    if len(table) != m or any(len(row) != m for row in table):
        raise AlgebraError(f"table is not {m}x{m}")
    for row in table:
        for v in row:
            if not isinstance(v, int) or not 0 <= v < m:
                raise AlgebraError(f"entry {v!r} outside 0..{m - 1}")
    if m > MAX_CARRIER:
        raise AlgebraError(f"carrier size {m} exceeds {MAX_CARRIER}")
    return m


def verify_quandle(table) -> list:
    """All violations of the quandle axioms for ``x◁y = table[x][y]``."""
    m = _check_square(table)
    out = []
    for x in range(m):
        if table[x][x] != x:
            out.append(f"idempotence: {x}◁{x} = {table[x][x]} != {x}")
    for y in range(m):
        col = {table[x][y] for x in range(m)}
        if len(col) != m:
            out.append(f"right translation not bijective: x ↦ x◁{y}")
    for x, y, z in itertools.product(range(m), repeat=3):
        lhs = table[table[x][y]][z]
        rhs = table[table[x][z]][table[y][z]]
        if lhs != rhs:
            out.append(f"self-distributivity: ({x}◁{y})◁{z} = {lhs} != {rhs}")
    return out


@dataclass(frozen=True)
class FiniteQuandle:
    table: tuple

    def __post_init__(self):
        errs = verify_quandle(self.table)
        if errs:
            raise AlgebraError("not a quandle: " + errs[0])

    @property
    def size(self) -> int:
        return len(self.table)

    def op(self, x, y):
        return self.table[x][y]

    @property
    def inverse_table(self) -> tuple:
        inv = [[0] * self.size for _ in range(self.size)]
        for x in range(self.size):
            for y in range(self.size):
                inv[self.table[x][y]][y] = x
        return tuple(tuple(r) for r in inv)

    def op_inverse(self, x, y):
        return op_inverse(self, x, y)

    def is_involutory(self) -> bool:
        return all(self.table[self.table[x][y]][y] == x for x in range(self.size) for y in range(self.size))


def op_inverse(q: FiniteQuandle, x, y):
    """The unique z with z◁y = x."""
    for z in range(q.size):
        if q.table[z][y] == x:
            return z
    raise AlgebraError(f"no preimage of {x} under ◁{y}")


@dataclass(frozen=True)
class FiniteGroup:
    mul: tuple
    identity: int = 0
    name: str = ""

    def __post_init__(self):
        errs = verify_group(self.mul, self.identity)
        if errs:
            raise AlgebraError("not a group: " + errs[0])

    @property
    def order(self) -> int:
        return len(self.mul)

    def inv(self, g):
        for h in range(self.order):
            if self.mul[g][h] == self.identity:
                return h
        raise AlgebraError(f"{g} has no inverse")

    def conj(self, g, h):
        """h⁻¹ g h."""
        return self.mul[self.mul[self.inv(h)][g]][h]


def verify_group(mul, identity=0) -> list:
    k = _check_square(mul)
    out = []
    for g in range(k):
        if mul[identity][g] != g or mul[g][identity] != g:
            out.append(f"identity: {identity} is not neutral for {g}")
        if identity not in mul[g]:
            out.append(f"inverse: {g} has no right inverse")
    for a, b, c in itertools.product(range(k), repeat=3):
        if mul[mul[a][b]][c] != mul[a][mul[b][c]]:
            out.append(f"associativity fails at ({a},{b},{c})")
            break
    return out


def cyclic_group(k: int) -> FiniteGroup:
    return FiniteGroup(tuple(tuple((a + b) % k for b in range(k)) for a in range(k)), 0, f"Z/{k}")


def symmetric_group_3() -> FiniteGroup:
    perms = sorted(itertools.permutations(range(3)))
    idx = {p: i for i, p in enumerate(perms)}
    # (p*q)(i) = q(p(i)): act by p first
    mul = tuple(tuple(idx[tuple(q[p[i]] for i in range(3))] for q in perms) for p in perms)
    return FiniteGroup(mul, idx[(0, 1, 2)], "S3")


@dataclass(frozen=True)
class GFamily:
    """A set ``range(m)`` with one operation table per group element."""

    m: int
    group: FiniteGroup
    ops: tuple  # ops[g][x][y] = x ◁_g y
    name: str = ""

    def op(self, g, x, y):
        return self.ops[g][x][y]


def verify_gfamily(gf: GFamily) -> list:
    """Exhaustively check the four G-family axioms."""
    G = gf.group
    k, m = G.order, gf.m
    if len(gf.ops) != k:
        raise AlgebraError(f"need {k} operation tables, got {len(gf.ops)}")
    for t in gf.ops:
        _check_square(t, m)
    if m * m * m * k * k > MAX_CARRIER ** 3 * 16:
        raise AlgebraError("family too large for exhaustive verification")
    ops = gf.ops
    e = G.identity
    out = []
    for g in range(k):
        for x in range(m):
            if ops[g][x][x] != x:
                out.append(f"(i) x◁_g x = x fails: g={g}, x={x}")
    for g, h in itertools.product(range(k), repeat=2):
        gh = G.mul[g][h]
        for x, y in itertools.product(range(m), repeat=2):
            if ops[h][ops[g][x][y]][y] != ops[gh][x][y]:
                out.append(f"(ii) (x◁_g y)◁_h y = x◁_gh y fails: g={g}, h={h}, x={x}, y={y}")
    for x, y in itertools.product(range(m), repeat=2):
        if ops[e][x][y] != x:
            out.append(f"(iii) x◁_1 y = x fails: x={x}, y={y}")
    for g, h in itertools.product(range(k), repeat=2):
        c = G.conj(g, h)
        oh = ops[h]
        for x, y, z in itertools.product(range(m), repeat=3):
            if oh[ops[g][x][y]][z] != ops[c][oh[x][z]][oh[y][z]]:
                out.append(f"(iv) distributivity fails: g={g}, h={h}, x={x}, y={y}, z={z}")
    return out


@dataclass(frozen=True)
class AssociatedQuandle(FiniteQuandle):
    """Quandle on X×G; element ``(x, g)`` has index ``x * |G| + g``."""

    family: GFamily = field(default=None, compare=False)

    @property
    def m(self) -> int:
        return self.family.m

    @property
    def k(self) -> int:
        return self.family.group.order

    def pair(self, idx) -> tuple:
        return divmod(idx, self.k)

    def index(self, x, g) -> int:
        return x * self.k + g

    def x_of(self, idx) -> int:
        return idx // self.k

    def g_of(self, idx) -> int:
        return idx % self.k


def associated_quandle(gf: GFamily) -> AssociatedQuandle:
    """(x,g)◁(y,h) = (x ◁_h y, h⁻¹gh) on X×G."""
    errs = verify_gfamily(gf)
    if errs:
        raise AlgebraError("invalid G-family: " + errs[0])
    G = gf.group
    k = G.order
    n = gf.m * k
    table = [[0] * n for _ in range(n)]
    for a in range(n):
        x, g = divmod(a, k)
        for b in range(n):
            y, h = divmod(b, k)
            table[a][b] = gf.ops[h][x][y] * k + G.conj(g, h)
    return AssociatedQuandle(tuple(tuple(r) for r in table), family=gf)


def dihedral_gfamily(n: int) -> GFamily:
    """Z/n with ◁_0 trivial and x ◁_1 y = 2y - x, over G = Z/2."""
    if n < 2:
        raise AlgebraError("dihedral family needs n >= 2")
    triv = tuple(tuple(x for _ in range(n)) for x in range(n))
    refl = tuple(tuple((2 * y - x) % n for y in range(n)) for x in range(n))
    return GFamily(n, cyclic_group(2), (triv, refl), f"dihedral:{n}")


def conjugation_gfamily(G: FiniteGroup) -> GFamily:
    """X = G with x ◁_g y = y g⁻¹ y⁻¹ x g."""
    mul = G.mul
    k = G.order

    def prod(*xs):
        r = G.identity
        for v in xs:
            r = mul[r][v]
        return r

    ops = tuple(
        tuple(tuple(prod(y, G.inv(g), G.inv(y), x, g) for y in range(k)) for x in range(k))
        for g in range(k)
    )
    return GFamily(k, G, ops, f"conjugation:{G.name}")


def multiplicative_group(p: int) -> FiniteGroup:
    """Units of Z/p for prime p; element index i stands for the unit i + 1."""
    if p < 2 or any(p % r == 0 for r in range(2, int(p ** 0.5) + 1)):
        raise AlgebraError(f"{p} is not prime")
    mul = tuple(tuple(((a + 1) * (b + 1)) % p - 1 for b in range(p - 1)) for a in range(p - 1))
    return FiniteGroup(mul, 0, f"(Z/{p})*")


def alexander_gfamily(p: int) -> GFamily:
    """Z/p with x ◁_t y = t·x + (1 − t)·y over the unit group of Z/p."""
    G = multiplicative_group(p)
    ops = tuple(
        tuple(tuple(((g + 1) * x + (1 - (g + 1)) * y) % p for y in range(p)) for x in range(p))
        for g in range(p - 1)
    )
    return GFamily(p, G, ops, f"alexander:{p}")


def trivial_quandle(m: int) -> FiniteQuandle:
    return FiniteQuandle(tuple(tuple(x for _ in range(m)) for x in range(m)))


def family_from_spec(spec: str) -> GFamily:
    """Parse ``dihedral:N``, ``alexander:P``, ``conjugation:S3`` or ``conjugation:Z/K``."""
    kind, _, arg = spec.partition(":")
    try:
        if kind == "dihedral":
            return dihedral_gfamily(int(arg))
        if kind == "alexander":
            return alexander_gfamily(int(arg))
    except ValueError as exc:
        raise AlgebraError(f"bad family {spec!r}: {exc}") from None
    if kind == "conjugation":
        if arg == "S3":
            return conjugation_gfamily(symmetric_group_3())
        if arg.startswith("Z/"):
            return conjugation_gfamily(cyclic_group(int(arg[2:])))
    raise AlgebraError(f"unknown family {spec!r}")

"""Exact exponent bookkeeping for the final balancing of error terms.

A term is a monomial in size symbols (N, t, T, Q, R, X, ...) times p to an
affine form a + b k + c lam.  Substitution rewrites the auxiliary symbols,
``balance`` sets T = t^theta, lam = rho k and N = (p^k t)^(3/2) and reads off
the exponent of p^k t in S(N)/N^(1/2), and ``optimize`` solves the minimax
over (theta, rho) exactly.  All arithmetic is in Fractions.
"""
from __future__ import annotations

import itertools
import re
from dataclasses import dataclass, field
from fractions import Fraction
from importlib import resources

import numpy as np

from .errors import EmptyLedger, UnknownSymbol

THETA3 = Fraction(5, 14)  # exponent toward Ramanujan used by the Cauchy-Schwarz step; recorded only
BASIS = ("N", "t", "T")
RHO_MAX = Fraction(2, 3)


@dataclass(frozen=True)
class PAffine:
    """a + b k + c lam."""

    a: Fraction = Fraction(0)
    b: Fraction = Fraction(0)
    c: Fraction = Fraction(0)

    def __add__(self, other: "PAffine") -> "PAffine":
        return PAffine(self.a + other.a, self.b + other.b, self.c + other.c)

    def scale(self, s: Fraction) -> "PAffine":
        return PAffine(self.a * s, self.b * s, self.c * s)

    def __str__(self) -> str:
        parts = []
        for coef, sym in ((self.b, "k"), (self.c, "lam"), (self.a, "")):
            if coef:
                parts.append(f"{coef}{sym}" if sym else f"{coef}")
        return " + ".join(parts).replace("+ -", "- ") or "0"


@dataclass(frozen=True)
class ExponentTerm:
    label: str
    mono: tuple[tuple[str, Fraction], ...]  # sorted (symbol, exponent) pairs, zero exponents dropped
    p: PAffine = PAffine()

    @classmethod
    def make(cls, label: str, mono: dict, p: PAffine = PAffine()) -> "ExponentTerm":
        clean = tuple(sorted((s, Fraction(e)) for s, e in mono.items() if Fraction(e) != 0))
        return cls(label, clean, p)

    def exponent(self, symbol: str) -> Fraction:
        return dict(self.mono).get(symbol, Fraction(0))

    @property
    def eN(self) -> Fraction:
        return self.exponent("N")

    @property
    def et(self) -> Fraction:
        return self.exponent("t")

    @property
    def eT(self) -> Fraction:
        return self.exponent("T")

    def __mul__(self, other: "ExponentTerm") -> "ExponentTerm":
        mono = dict(self.mono)
        for s, e in other.mono:
            mono[s] = mono.get(s, Fraction(0)) + e
        return ExponentTerm.make(f"{self.label}*{other.label}", mono, self.p + other.p)

    def power(self, s: Fraction) -> "ExponentTerm":
        return ExponentTerm.make(self.label, {k: e * s for k, e in self.mono}, self.p.scale(s))

    def monomial_str(self) -> str:
        return " ".join(f"{s}^{{{e}}}" for s, e in self.mono) or "1"


# -- parsing ------------------------------------------------------------------------

_MONO_TOKEN = re.compile(r"^([A-Za-z]\w*)(?:\^(?:\{([^}]*)\}|(-?\d+(?:/\d+)?)))?$")
_AFFINE_TOKEN = re.compile(r"([+-]?)\s*(\d*)\s*(k|lam|λ)?\s*(?:/\s*(\d+))?")


def parse_monomial(text: str) -> dict[str, Fraction]:
    mono: dict[str, Fraction] = {}
    for tok in text.split():
        m = _MONO_TOKEN.match(tok)
        if not m:
            raise ValueError(f"bad monomial token {tok!r}")
        sym, braced, bare = m.groups()
        e = Fraction(braced or bare or 1)
        mono[sym] = mono.get(sym, Fraction(0)) + e
    return mono


def parse_affine(text: str) -> PAffine:
    """Parse forms like '3lam/4', 'k/2 - 5lam/4 + 3/4', 'λ', '0'."""
    s = text.replace(" ", "")
    if not s:
        raise ValueError("empty p-exponent")
    coef = {"": Fraction(0), "k": Fraction(0), "lam": Fraction(0)}
    pos = 0
    while pos < len(s):
        m = _AFFINE_TOKEN.match(s, pos)
        if not m or m.end() == pos:
            raise ValueError(f"bad p-exponent {text!r}")
        sign, num, sym, den = m.groups()
        if not num and not sym:
            raise ValueError(f"bad p-exponent {text!r}")
        val = Fraction(int(num) if num else 1, int(den) if den else 1)
        coef["lam" if sym == "λ" else (sym or "")] += -val if sign == "-" else val
        pos = m.end()
    return PAffine(coef[""], coef["k"], coef["lam"])


def parse_ledger(text: str) -> list[ExponentTerm]:
    terms = []
    for line in text.splitlines():
        line = line.strip()
        if not line or line.startswith("#"):
            continue
        parts = [x.strip() for x in line.split("|")]
        if len(parts) != 3:
            raise ValueError(f"ledger line needs 'label | monomial | p-exponent': {line!r}")
        terms.append(ExponentTerm.make(parts[0], parse_monomial(parts[1]), parse_affine(parts[2])))
    return terms


def load_ledger(name: str) -> list[ExponentTerm]:
    """Bundled ledgers: 'final_terms' and 'upstream_terms'."""
    return parse_ledger(resources.files("gl3twist.data").joinpath(f"{name}.txt").read_text(encoding="utf-8"))


# -- substitution ------------------------------------------------------------------

@dataclass(frozen=True)
class SubstitutionRules:
    """symbol -> (monomial over other symbols, p-exponent); applied until only the basis remains."""

    rules: dict = field(default_factory=dict)

    @classmethod
    def standard(cls, T_power=Fraction(1)) -> "SubstitutionRules":
        """Q = R = N^(1/2) p^(-lam/2) T^(-T_power), X = 1."""
        half = Fraction(1, 2)
        q_rule = ({"N": half, "T": -Fraction(T_power)}, PAffine(c=-half))
        return cls({"Q": q_rule, "R": q_rule, "X": ({}, PAffine())})

    @classmethod
    def identity(cls) -> "SubstitutionRules":
        return cls({})


def substitute(term: ExponentTerm, rules: SubstitutionRules, basis=BASIS) -> ExponentTerm:
    mono: dict[str, Fraction] = {}
    p = term.p
    pending = list(term.mono)
    depth = 0
    while pending:
        depth += 1
        if depth > 1000:
            raise UnknownSymbol("substitution rules are cyclic")
        sym, e = pending.pop()
        if sym in rules.rules:
            rmono, rp = rules.rules[sym]
            pending.extend((s, Fraction(x) * e) for s, x in rmono.items())
            p = p + rp.scale(e)
        elif sym in basis:
            mono[sym] = mono.get(sym, Fraction(0)) + e
        else:
            raise UnknownSymbol(f"no rule for symbol {sym!r}")
    return ExponentTerm.make(term.label, mono, p)


# -- balancing -----------------------------------------------------------------------

@dataclass(frozen=True)
class TermExponents:
    label: str
    e_t: Fraction  # exponent of t in the term / N^(1/2)
    e_pk: Fraction  # exponent of p^k
    p_const: Fraction

    @property
    def worst(self) -> Fraction:
        return max(self.e_t, self.e_pk)


def _affine_parts(term: ExponentTerm) -> tuple[tuple[Fraction, Fraction], tuple[Fraction, Fraction]]:
    """(e_t = u0 + u1 theta, e_pk = v0 + v1 rho) after N = (p^k t)^(3/2)."""
    extra = set(s for s, _ in term.mono) - set(BASIS)
    if extra:
        raise UnknownSymbol(f"balance needs terms over N, t, T; found {sorted(extra)}")
    base = Fraction(3, 2) * term.eN - Fraction(3, 4)
    return (base + term.et, term.eT), (base + term.p.b, term.p.c)


def term_exponents(term: ExponentTerm, theta, rho) -> TermExponents:
    (u0, u1), (v0, v1) = _affine_parts(term)
    theta, rho = Fraction(theta), Fraction(rho)
    return TermExponents(term.label, u0 + u1 * theta, v0 + v1 * rho, term.p.a)


@dataclass(frozen=True)
class BalanceResult:
    theta: Fraction
    rho: Fraction
    exponent: Fraction
    dominant: tuple[str, ...]  # every term attaining the exponent (ties included)
    per_term: tuple[TermExponents, ...]
    p_slack: Fraction  # largest constant power of p left over
    floor_slack: Fraction  # extra power of p from lam = floor(rho k) + 1 instead of rho k


def balance(terms: list[ExponentTerm], theta, rho) -> BalanceResult:
    if not terms:
        raise EmptyLedger("no terms to balance")
    theta, rho = Fraction(theta), Fraction(rho)
    if not (0 <= theta <= 1 and 0 <= rho <= RHO_MAX):
        raise ValueError("need 0 <= theta <= 1 and 0 <= rho <= 2/3")
    per = tuple(term_exponents(t, theta, rho) for t in terms)
    top = max(x.worst for x in per)
    dominant = tuple(x.label for x in per if x.worst == top)
    p_slack = max(t.p.a for t in terms)
    floor_slack = max(abs(t.p.c) for t in terms)
    return BalanceResult(theta, rho, top, dominant, per, p_slack, floor_slack)


def _objective_grid(terms: list[ExponentTerm], thetas: np.ndarray, rhos: np.ndarray) -> np.ndarray:
    parts = [_affine_parts(t) for t in terms]
    et = np.max([float(u0) + float(u1) * thetas for (u0, u1), _ in parts], axis=0)
    ep = np.max([float(v0) + float(v1) * rhos for _, (v0, v1) in parts], axis=0)
    return np.maximum(et[:, None], ep[None, :])


def grid_search(terms: list[ExponentTerm], thetas, rhos) -> tuple[float, float, float]:
    """(theta, rho, value) minimizing the max exponent over the grid; first minimum in row-major order."""
    if not terms:
        raise EmptyLedger("no terms to optimize")
    thetas, rhos = np.asarray(thetas, dtype=float), np.asarray(rhos, dtype=float)
    vals = _objective_grid(terms, thetas, rhos)
    i, j = np.unravel_index(int(np.argmin(vals)), vals.shape)
    return float(thetas[i]), float(rhos[j]), float(vals[i, j])


@dataclass(frozen=True)
class OptimizeResult:
    theta: Fraction
    rho: Fraction
    exponent: Fraction
    active: tuple[str, ...]
    grid_theta: float
    grid_rho: float
    grid_value: float


def _solve3(rows: list[tuple[Fraction, Fraction, Fraction, Fraction]]):
    """Solve a 3x3 system given as rows (x, y, z, rhs) exactly; None if singular."""
    m = [list(r) for r in rows]
    for col in range(3):
        piv = next((r for r in range(col, 3) if m[r][col] != 0), None)
        if piv is None:
            return None
        m[col], m[piv] = m[piv], m[col]
        for r in range(3):
            if r != col and m[r][col] != 0:
                f = m[r][col] / m[col][col]
                m[r] = [a - f * b for a, b in zip(m[r], m[col])]
    return tuple(m[i][3] / m[i][i] for i in range(3))


def optimize(terms: list[ExponentTerm], step: float = 1e-3) -> OptimizeResult:
    """Minimize max_i max(e_t, e_pk) over 0 <= theta <= 1, 0 <= rho <= 2/3.

    A grid pass at ``step`` locates the basin; the exact optimum is then the
    best vertex of the arrangement of planes z = e(theta, rho) and box faces,
    each vertex solved in rationals.  Among equal minima the vertex closest to
    the grid point wins.
    """
    if not terms:
        raise EmptyLedger("no terms to optimize")
    thetas = np.arange(0.0, 1.0 + step / 2, step)
    rhos = np.arange(0.0, float(RHO_MAX) + step / 2, step)
    gt, gr, gv = grid_search(terms, thetas, rhos)

    planes = []  # (x, y, z, rhs) meaning x theta + y rho + z w = rhs
    for t in terms:
        (u0, u1), (v0, v1) = _affine_parts(t)
        planes.append((-u1, Fraction(0), Fraction(1), u0))
        planes.append((Fraction(0), -v1, Fraction(1), v0))
    box = [(Fraction(1), Fraction(0), Fraction(0), Fraction(0)), (Fraction(1), Fraction(0), Fraction(0), Fraction(1)),
           (Fraction(0), Fraction(1), Fraction(0), Fraction(0)), (Fraction(0), Fraction(1), Fraction(0), RHO_MAX)]
    best = None
    for combo in itertools.combinations(sorted(set(planes)) + box, 3):
        sol = _solve3(list(combo))
        if sol is None:
            continue
        th, rh, _ = sol
        if not (0 <= th <= 1 and 0 <= rh <= RHO_MAX):
            continue
        val = balance(terms, th, rh).exponent
        key = (val, (float(th) - gt) ** 2 + (float(rh) - gr) ** 2, th, rh)
        if best is None or key < best:
            best = key
    val, _, th, rh = best
    res = balance(terms, th, rh)
    return OptimizeResult(th, rh, val, res.dominant, gt, gr, gv)


# -- cross-check of the upstream ledger against the final list ------------------------

@dataclass(frozen=True)
class CrossCheckRecord:
    upstream: str
    derived: str  # monomial and p-exponent after substitution
    closest: str | None
    status: str  # "match", "differs" or "absent"
    differences: tuple[str, ...]


def _signature(term: ExponentTerm) -> dict[str, Fraction]:
    return {"N": term.eN, "t": term.et, "T": term.eT, "p": term.p.a, "p^k": term.p.b, "p^lam": term.p.c}


def cross_check(upstream: list[ExponentTerm], final: list[ExponentTerm],
                rules: SubstitutionRules | None = None) -> list[CrossCheckRecord]:
    """Substitute each upstream term and compare it with the closest final term.

    Disagreements are reported with both values; nothing is corrected.
    """
    rules = SubstitutionRules.standard() if rules is None else rules
    out = []
    for term in upstream:
        d = substitute(term, rules)
        ds = _signature(d)
        desc = f"{d.monomial_str()} p^({d.p})"
        scored = []
        for f in final:
            fs = _signature(f)
            diffs = tuple(f"{k}: derived {ds[k]}, listed {fs[k]}" for k in ds if ds[k] != fs[k])
            scored.append((len(diffs), f.label, diffs))
        n, label, diffs = min(scored)
        if n == 0:
            out.append(CrossCheckRecord(term.label, desc, label, "match", ()))
        elif n <= 2:
            out.append(CrossCheckRecord(term.label, desc, label, "differs", diffs))
        else:
            out.append(CrossCheckRecord(term.label, desc, None, "absent", ()))
    return out

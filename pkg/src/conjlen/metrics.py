"""Word-length machinery: exact Cayley balls and distortion measurements.

The breadth-first ball is the ground-truth metric oracle for the whole
package: every length assertion ultimately reduces to a lookup here.  The
expansion loop is specialised per family so that the 10^6-element balls
used by the verification harness stay cheap; the resulting table is
deterministic (level order, then a fixed generator order) no matter how
the frontier is scheduled.
"""

from __future__ import annotations

import csv
import math
from dataclasses import dataclass, field
from itertools import product
from typing import Optional

import numpy as np

from .errors import BeyondRadius, CapExceeded, DomainError, HypothesisViolated
from .groups import (
    GmElement,
    SdElement,
    canonical_str,
    generators,
    identity,
    inv,
    mul,
    parse_canonical,
    phi_of,
    _m_pow,
    _strip_m,
)

DEFAULT_CAP = 5_000_000


class Ball:
    """Radius-R Cayley ball with exact geodesic lengths.

    ``table`` maps each canonical element to ``(length, step)`` where
    ``step`` is the (generator index, sign) used to discover it, or None
    for the identity (and for imported balls).  ``order`` lists elements
    in discovery order: by length, then by the fixed generator order.
    """

    __slots__ = ("cfg", "radius", "table", "order", "sphere_sizes")

    def __init__(self, cfg, radius, table, order, sphere_sizes):
        self.cfg = cfg
        self.radius = radius
        self.table = table
        self.order = order
        self.sphere_sizes = sphere_sizes

    def __len__(self):
        return len(self.table)

    def __contains__(self, el):
        return el in self.table

    def length(self, el):
        try:
            return self.table[el][0]
        except KeyError:
            raise BeyondRadius(f"element {canonical_str(el)} outside radius {self.radius}")

    def geodesic_word(self, el):
        """A geodesic letter sequence for el, recovered from discovery steps."""
        gens = [g for _, g in generators(self.cfg)]
        ident = identity(self.cfg)
        letters = []
        cur = el
        while cur != ident:
            entry = self.table.get(cur)
            if entry is None:
                raise BeyondRadius(f"element {canonical_str(cur)} outside radius {self.radius}")
            _, step = entry
            if step is None:
                raise BeyondRadius("ball was imported without discovery steps")
            idx, sign = step
            letters.append(step)
            g = gens[idx]
            cur = mul(self.cfg, cur, inv(self.cfg, g) if sign > 0 else g)
        return tuple(reversed(letters))

    def elements(self):
        """Iterate (element, length) in discovery order."""
        for el in self.order:
            yield el, self.table[el][0]

    def to_csv(self, path):
        with open(path, "w", newline="", encoding="utf-8") as fh:
            writer = csv.writer(fh)
            writer.writerow(["element", "length"])
            for el in self.order:
                writer.writerow([canonical_str(el), self.table[el][0]])

    @classmethod
    def from_csv(cls, cfg, path):
        table = {}
        order = []
        radius = 0
        with open(path, "r", newline="", encoding="utf-8") as fh:
            reader = csv.reader(fh)
            header = next(reader)
            if header != ["element", "length"]:
                raise ValueError("unexpected ball CSV header")
            for text, length in reader:
                el = parse_canonical(cfg, text)
                table[el] = (int(length), None)
                order.append(el)
                radius = max(radius, int(length))
        return cls(cfg, radius, table, order, [])


def _gm_steps(cfg):
    """Right-multiplication closures for each (generator, sign) letter."""
    d = cfg.d
    strip = _strip_m

    def a_step(i, sign):
        def step(el):
            p, w, s = el
            pp = max(p, -s)
            if pp != p:
                w = _m_pow(cfg, pp - p).mul_vec(w)
            col = _m_pow(cfg, pp + s).column(i)
            w = tuple(a + sign * b for a, b in zip(w, col))
            if all(c == 0 for c in w):
                return GmElement(0, (0,) * d, s)
            while pp > 0:
                reduced = strip(cfg, w)
                if reduced is None:
                    break
                w = reduced
                pp -= 1
            return GmElement(pp, w, s)

        return step

    def t_step(sign):
        def step(el):
            return GmElement(el.p, el.w, el.s + sign)

        return step

    steps = []
    for i in range(d):
        steps.append(((i, 1), a_step(i, 1)))
        steps.append(((i, -1), a_step(i, -1)))
    steps.append(((d, 1), t_step(1)))
    steps.append(((d, -1), t_step(-1)))
    return steps


def _sd_steps(cfg):
    d, k = cfg.d, cfg.k

    def a_step(i, sign):
        def step(el):
            col = phi_of(cfg, el.y).column(i)
            return SdElement(tuple(a + sign * b for a, b in zip(el.x, col)), el.y)

        return step

    def t_step(j, sign):
        def step(el):
            y = list(el.y)
            y[j] += sign
            return SdElement(el.x, tuple(y))

        return step

    steps = []
    for i in range(d):
        steps.append(((i, 1), a_step(i, 1)))
        steps.append(((i, -1), a_step(i, -1)))
    for j in range(k):
        steps.append(((d + j, 1), t_step(j, 1)))
        steps.append(((d + j, -1), t_step(j, -1)))
    return steps


def bfs_ball(cfg, radius, cap=DEFAULT_CAP) -> Ball:
    """Exact ball of the given radius; raises CapExceeded past ``cap`` entries."""
    if radius < 0:
        raise DomainError("radius must be nonnegative")
    steps = _sd_steps(cfg) if cfg.family == "semidirect" else _gm_steps(cfg)
    ident = identity(cfg)
    table = {ident: (0, None)}
    order = [ident]
    sphere_sizes = [1]
    frontier = [ident]
    for r in range(1, radius + 1):
        nxt = []
        # one shared value tuple per (radius, step): keeps big tables lean
        entries = [(code, step, (r, code)) for code, step in steps]
        for el in frontier:
            for _, step, entry in entries:
                other = step(el)
                if other not in table:
                    table[other] = entry
                    nxt.append(other)
        if len(table) > cap:
            raise CapExceeded(f"ball of radius {r} exceeds cap {cap}")
        order.extend(nxt)
        sphere_sizes.append(len(nxt))
        frontier = nxt
    return Ball(cfg, radius, table, order, sphere_sizes)


def word_length(ball: Ball, el) -> int:
    """Exact geodesic length of el; BeyondRadius when outside the ball."""
    return ball.length(el)


def bs_length_bounds(r, m):
    """Closed-form bracket for |a^r| in BS(1, m): lower and upper bound."""
    if r == 0:
        raise DomainError("r must be nonzero")
    if m < 2:
        raise DomainError("m must be at least 2")
    lg = math.log(abs(r), m)
    return 0.5 * lg, (m + 2) * lg + m / 2 + 1


# -- subgroup distortion -------------------------------------------------------

@dataclass
class DistortionTable:
    """Rows (n, delta, ldist, invdist, certified) for the coordinate subgroup."""

    metric: str
    rows: list = field(default_factory=list)

    def to_csv(self, path):
        with open(path, "w", newline="", encoding="utf-8") as fh:
            writer = csv.writer(fh)
            writer.writerow(["n", "delta", "ldist", "invdist", "certified"])
            for n, delta, ldist, invdist, certified in self.rows:
                writer.writerow([n, delta, ldist, invdist, int(certified)])


def _kernel_part(cfg, el):
    """The coordinate vector when el lies in <a_1..a_d>, else None."""
    if cfg.family == "semidirect":
        return el.x if all(c == 0 for c in el.y) else None
    return el.w if el.p == 0 and el.s == 0 else None


def _kernel_element(cfg, w):
    if cfg.family == "semidirect":
        return SdElement(tuple(w), (0,) * cfg.k)
    return GmElement(0, tuple(w), 0)


def _l1_sphere(d, n):
    """All integer vectors of l1 norm exactly n, lexicographic order."""
    if d == 0:
        return [()] if n == 0 else []
    if d == 1:
        return [(n,), (-n,)] if n else [(0,)]
    out = []
    for first in range(-n, n + 1):
        for rest in _l1_sphere(d - 1, n - abs(first)):
            out.append((first,) + rest)
    return out


def distortion_table(cfg, subgroup_metric, n_max, cap=DEFAULT_CAP, ball=None) -> DistortionTable:
    """Distortion data for F = <a_1..a_d> inside the ambient group.

    ``subgroup_metric`` selects |.|_F: "a_word" uses the word metric on the
    a-generators (the l1 norm of the coordinate vector), "ambient" restricts
    the ambient word metric to F.  All three functions are computed
    exhaustively from a radius-n_max ball, so every row is certified unless
    the enumeration cap interferes.
    """
    if subgroup_metric not in ("a_word", "ambient"):
        raise ValueError("subgroup_metric must be 'a_word' or 'ambient'")
    if ball is None:
        ball = bfs_ball(cfg, n_max, cap)
    elif ball.radius < n_max:
        raise DomainError("supplied ball is smaller than n_max")

    # intrinsic length of the F-elements found in the ball
    in_f = {}
    for el, length in ball.elements():
        w = _kernel_part(cfg, el)
        if w is None:
            continue
        in_f[el] = length

    def intrinsic(el):
        if subgroup_metric == "a_word":
            return sum(abs(c) for c in _kernel_part(cfg, el))
        return in_f[el]

    table = DistortionTable(metric=subgroup_metric)
    deltas = {}
    ldists = {}
    best = 0
    for n in range(0, n_max + 1):
        vals = [intrinsic(el) for el, length in in_f.items() if length <= n]
        best = max(best, max(vals, default=0))
        deltas[n] = best

    if subgroup_metric == "ambient":
        # min ambient length >= n realized by an F-element; the ball decides
        # exactly whenever a candidate exists inside it
        for n in range(0, n_max + 1):
            ldists[n] = min((l for l in in_f.values() if l >= n), default=None)
    else:
        # walk F-spheres outward; leaving the ball certifies |f| > radius >= n
        for n in range(0, n_max + 1):
            found = None
            budget = cap
            norm = 0
            while found is None:
                for w in _l1_sphere(cfg.d, norm):
                    el = _kernel_element(cfg, w)
                    entry = ball.table.get(el)
                    ambient = entry[0] if entry is not None else ball.radius + 1
                    if ambient >= n:
                        found = norm
                        break
                    budget -= 1
                    if budget <= 0:
                        raise CapExceeded("ldist sphere enumeration exceeded cap")
                norm += 1
            ldists[n] = found

    for n in range(0, n_max + 1):
        invdist = next(
            (k for k in range(0, n_max + 1) if ldists[k] is not None and ldists[k] >= n),
            None,
        )
        certified = ldists[n] is not None and invdist is not None
        table.rows.append((n, deltas[n], ldists[n], invdist, certified))
    return table


# -- horocycle-path distance on the continuous model ---------------------------

def dl_distance(cfg, g, h, tol=1e-12) -> float:
    """Two-stage vertical/horizontal path length between points of R^d x| R.

    Points are pairs (vector, height).  Requires the expanding flag and a
    real positive eigenbasis; this is a float estimator, never a ground
    truth for word lengths.
    """
    if not cfg.spectral.expanding:
        raise HypothesisViolated("dl_distance requires every eigenvalue modulus > 1")
    mat = np.array(cfg.matrix_m.data, dtype=float)
    lam, vecs = np.linalg.eig(mat)
    if np.max(np.abs(np.imag(lam))) > 1e-9 or np.min(np.real(lam)) <= 0:
        raise HypothesisViolated("dl_distance needs real positive eigenvalues")
    lam = np.real(lam)
    vinv = np.linalg.inv(vecs)

    (a, ta), (b, tb) = (np.array(g[0], dtype=float), float(g[1])), (
        np.array(h[0], dtype=float),
        float(h[1]),
    )

    coeff = vinv @ (b - a)

    def separation(t):
        return float(np.sum(np.abs(vecs @ (coeff * lam ** (-t)))))

    top = max(ta, tb)
    if separation(top) <= 1.0 + tol:
        return abs(ta - tb) + separation(top)

    lo, hi = top, top + 1.0
    while separation(hi) > 1.0:
        hi = top + 2 * (hi - top)
    for _ in range(200):
        mid = 0.5 * (lo + hi)
        if separation(mid) > 1.0:
            lo = mid
        else:
            hi = mid
        if hi - lo < tol:
            break
    t0 = hi
    return (t0 - ta) + (t0 - tb) + 1.0

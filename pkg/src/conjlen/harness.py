"""Empirical growth measurement for conjugator lengths.

Builds exhaustive desk-scale tables: the conjugacy partition of a Cayley
ball, the max-min conjugator length per total input length, and fitted
bound constants.  Every table row is backed by exact solver decisions and
BFS-certified minimal conjugators; rows that depended on an exhausted
search or an out-of-ball conjugator are visibly flagged instead of being
extrapolated.
"""

from __future__ import annotations

import csv
import json
import math
import os
import tempfile
from dataclasses import dataclass, field
from itertools import product
from typing import Optional

from .errors import CapExceeded, EmptyTable
from .groups import canonical_str, config_to_dict, to_word, word_str
from .intlinalg import IntMatrix
from .metrics import DEFAULT_CAP, _l1_sphere, bfs_ball
from .solvers import (
    DEFAULT_CAPS,
    conjugacy_report,
    min_conjugator,
    min_conjugator_via_coset,
    minimize_twisted_witness,
    twisted_conj_abelian,
)


@dataclass
class ClfRow:
    n: int
    value: int
    u: Optional[object]
    v: Optional[object]
    conjugator: Optional[object]
    certified: bool


@dataclass
class ClfTable:
    kind: str
    rows: list = field(default_factory=list)
    meta: dict = field(default_factory=dict)

    def values(self):
        return [(row.n, row.value) for row in self.rows]

    def to_csv(self, path, cfg=None):
        def text(el):
            if el is None:
                return ""
            if isinstance(el, tuple) and cfg is None:
                return canonical_str(el) if hasattr(el, "_fields") else str(el)
            return word_str(cfg, to_word(cfg, el)) if cfg is not None else str(el)

        rows = [
            [row.n, row.value, text(row.u), text(row.v), text(row.conjugator),
             int(row.certified)]
            for row in self.rows
        ]
        _atomic_csv(path, ["n", "clf", "u_word", "v_word", "conjugator_word", "certified"], rows)


@dataclass(frozen=True)
class FitResult:
    model: str
    constant: float
    max_residual: float


def _atomic_csv(path, header, rows):
    directory = os.path.dirname(os.path.abspath(path))
    fd, tmp = tempfile.mkstemp(dir=directory, suffix=".tmp")
    try:
        with os.fdopen(fd, "w", newline="", encoding="utf-8") as fh:
            writer = csv.writer(fh)
            writer.writerow(header)
            writer.writerows(rows)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def write_json(path, obj):
    directory = os.path.dirname(os.path.abspath(path))
    fd, tmp = tempfile.mkstemp(dir=directory, suffix=".tmp")
    try:
        with os.fdopen(fd, "w", encoding="utf-8") as fh:
            json.dump(obj, fh, indent=2, sort_keys=True)
            fh.write("\n")
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def _quotient_part(cfg, el):
    return el.y if cfg.family == "semidirect" else el.s


def _gm_kernel_core(cfg, w):
    """Fully M-reduced exponent vector; a complete conjugacy invariant on
    the kernel (two kernel elements are conjugate iff one is an M-power
    shift of the other iff their cores agree)."""
    from .groups import _strip_m

    if all(c == 0 for c in w):
        return w
    while True:
        reduced = _strip_m(cfg, w)
        if reduced is None:
            return w
        w = reduced


def conjugacy_partition(cfg, elements, caps=DEFAULT_CAPS):
    """Partition elements into conjugacy classes using the exact solvers.

    The quotient invariant buckets first.  Kernel elements of the HNN
    families are classified in constant time by their M-reduced core;
    everything else compares against one representative per known class.
    Returns (classes, exhausted) where ``exhausted`` lists elements whose
    comparison ended in an uncertified search.
    """
    buckets = {}
    for el in elements:
        buckets.setdefault(_quotient_part(cfg, el), []).append(el)
    classes = []
    exhausted = []
    for key in sorted(buckets, key=lambda k: (k,) if not isinstance(k, tuple) else k):
        if cfg.family in ("bs", "gamma_m") and key == 0:
            cores = {}
            for el in buckets[key]:
                cores.setdefault(_gm_kernel_core(cfg, el.w), []).append(el)
            classes.extend(cores[c] for c in sorted(cores))
            continue
        reps = []
        for el in buckets[key]:
            placed = False
            uncertain = False
            for rep, members in reps:
                report = conjugacy_report(cfg, rep, el, caps)
                if report.conjugate:
                    members.append(el)
                    placed = True
                    break
                if report.search_exhausted:
                    uncertain = True
            if not placed:
                reps.append((el, [el]))
                if uncertain:
                    exhausted.append(el)
        classes.extend(members for _, members in reps)
    return classes, exhausted


def empirical_clf(
    cfg,
    n_max,
    ball_radius=None,
    conjugator_radius=None,
    caps=DEFAULT_CAPS,
    cap=DEFAULT_CAP,
) -> ClfTable:
    """Exhaustive conjugacy length table over the radius-n_max ball.

    For every conjugate pair u, v with |u| + |v| <= n_max the minimal
    conjugator is located by scanning the conjugator ball; the row at n is
    the running maximum over pairs of total length at most n.  A row is
    certified when every contributing pair had a BFS-certified minimal
    conjugator and no partition step was left exhausted.
    """
    if ball_radius is None:
        ball_radius = n_max
    if ball_radius < n_max:
        raise ValueError("ball_radius must cover n_max")
    if conjugator_radius is None:
        conjugator_radius = 4 * n_max
    ball = bfs_ball(cfg, ball_radius, cap)
    conj_ball = (
        ball if conjugator_radius == ball_radius else bfs_ball(cfg, conjugator_radius, cap)
    )

    elements = [el for el, length in ball.elements() if length <= n_max]
    classes, exhausted = conjugacy_partition(cfg, elements, caps)
    exhausted_lengths = {ball.length(el) for el in exhausted}
    class_of = {}
    for idx, members in enumerate(classes):
        for el in members:
            class_of[el] = idx

    pairs = []  # (n, length, u, v, conjugator, certified)
    for members in classes:
        members = sorted(members, key=lambda e: (ball.length(e), canonical_str(e)))
        for i, u in enumerate(members):
            lu = ball.length(u)
            if 2 * lu > n_max:
                break
            for v in members[i:]:
                n = lu + ball.length(v)
                if n > n_max:
                    continue
                found = min_conjugator_via_coset(cfg, u, v, conj_ball, caps)
                if found is None:
                    pairs.append((n, None, u, v, None, False))
                else:
                    g, length = found
                    pairs.append((n, length, u, v, g, True))

    by_n = {}
    uncertified_from = None
    for pn, length, u, v, g, ok in pairs:
        if not ok:
            uncertified_from = pn if uncertified_from is None else min(uncertified_from, pn)
            continue
        by_n.setdefault(pn, []).append((length, u, v, g))
    if exhausted_lengths:
        first = min(exhausted_lengths)
        uncertified_from = first if uncertified_from is None else min(uncertified_from, first)

    table = ClfTable(kind="clf")
    value, best_u, best_v, best_g = 0, None, None, None
    for n in range(n_max + 1):
        for length, u, v, g in by_n.get(n, ()):
            key = (canonical_str(u), canonical_str(v))
            if length > value or (
                length == value
                and (best_u is None or key < (canonical_str(best_u), canonical_str(best_v)))
            ):
                value, best_u, best_v, best_g = length, u, v, g
        certified = uncertified_from is None or n < uncertified_from
        table.rows.append(ClfRow(n, value, best_u, best_v, best_g, certified))
    table.meta = {
        "n_max": n_max,
        "ball_radius": ball_radius,
        "conjugator_radius": conjugator_radius,
        "ball_size": len(ball),
        "pairs": len(pairs),
    }
    return table


def empirical_tclf(d, phi, n_max, cap=DEFAULT_CAP) -> ClfTable:
    """Max-min twisted conjugator norms over the l1 ball of radius n_max.

    For each twisted-conjugate pair u, v the minimal witness norm over the
    whole solution coset is computed exactly; row n holds the maximum over
    pairs with |u| + |v| <= n.
    """
    phi = phi if isinstance(phi, IntMatrix) else IntMatrix(phi)
    vectors = []
    for norm in range(n_max + 1):
        vectors.extend(_l1_sphere(d, norm))
    if len(vectors) ** 2 > cap:
        raise CapExceeded("too many vector pairs")
    pairs = []
    for u in vectors:
        nu = sum(abs(c) for c in u)
        for v in vectors:
            n = nu + sum(abs(c) for c in v)
            if n > n_max:
                continue
            wit = twisted_conj_abelian(u, v, phi)
            if wit is None:
                continue
            gamma = minimize_twisted_witness(wit)
            pairs.append((n, sum(abs(c) for c in gamma), u, v, gamma))
    table = ClfTable(kind="tclf")
    best = ClfRow(0, 0, None, None, None, True)
    for n in range(n_max + 1):
        row = ClfRow(n, best.value, best.u, best.v, best.conjugator, True)
        for pn, norm, u, v, gamma in pairs:
            if pn <= n and (
                norm > row.value
                or (norm == row.value and (row.u is None or (u, v) < (row.u, row.v)))
            ):
                row.value, row.u, row.v, row.conjugator = norm, u, v, gamma
        best = row
        table.rows.append(row)
    table.meta = {"d": d, "n_max": n_max, "phi": [list(r) for r in phi.data]}
    return table


def empirical_rclf_bs(m, r_max, ball=None, cap=DEFAULT_CAP) -> ClfTable:
    """Restricted conjugacy lengths for kernel powers a^r in BS(1, m).

    Tabulates the minimal BFS-certified conjugator length for conjugate
    pairs (a^r, a^s) with |r|, |s| <= r_max against n = |a^r| + |a^s|.
    Rows are emitted only up to the total length where the r_max window
    provably contains every conjugate kernel pair, so each reported row is
    a faithful restriction-to-kernel value.
    """
    from .groups import bs_config, GmElement

    cfg = bs_config(m)
    powers = {}

    def element(r):
        return GmElement(0, (r,), 0)

    if ball is None:
        radius = 10
        while True:
            ball = bfs_ball(cfg, radius, cap)
            if all(element(r) in ball for r in range(1, r_max + 1)):
                break
            radius += 2
    for r in range(1, r_max + 1):
        powers[r] = ball.length(element(r))
        powers[-r] = ball.length(element(-r))

    j_max = int(math.floor(math.log(r_max, m)))
    n_cut = 2 * j_max + 2

    pairs = []
    for r in range(-r_max, r_max + 1):
        if r == 0:
            continue
        s = r
        j = 0
        while abs(s) <= r_max:
            n = powers[r] + powers[s]
            if n <= n_cut:
                found = min_conjugator(cfg, element(r), element(s), ball)
                if found is None:
                    raise CapExceeded("conjugator outside the supplied ball")
                g, length = found
                pairs.append((n, length, element(r), element(s), g))
            s *= m
            j += 1

    table = ClfTable(kind="rclf")
    best = ClfRow(0, 0, None, None, None, True)
    start = min(pn for pn, *_ in pairs)
    for n in range(start, n_cut + 1):
        row = ClfRow(n, best.value, best.u, best.v, best.conjugator, True)
        for pn, length, u, v, g in pairs:
            if pn <= n and (
                length > row.value
                or (
                    length == row.value
                    and (
                        row.u is None
                        or (canonical_str(u), canonical_str(v))
                        < (canonical_str(row.u), canonical_str(row.v))
                    )
                )
            ):
                row.value, row.u, row.v, row.conjugator = length, u, v, g
        best = row
        table.rows.append(row)
    table.meta = {"m": m, "r_max": r_max, "n_cut": n_cut, "ball_radius": ball.radius}
    return table


def fit_bound(table: ClfTable, model: str) -> FitResult:
    """Smallest constant making clf(n) <= C n (linear) or <= C^n (exponential)."""
    rows = [(row.n, row.value) for row in table.rows if row.certified and row.n >= 1]
    if not table.rows:
        raise EmptyTable("cannot fit an empty table")
    if model == "linear":
        constant = max((v / n for n, v in rows), default=0.0)
        residual = max((constant * n - v for n, v in rows), default=0.0)
        return FitResult("linear", constant, residual)
    if model == "exponential":
        constant = max((v ** (1.0 / n) for n, v in rows if v >= 1), default=0.0)
        residual = max((constant ** n - v for n, v in rows), default=0.0)
        return FitResult("exponential", constant, residual)
    raise ValueError("model must be 'linear' or 'exponential'")


def clf_metadata(cfg, table: ClfTable, fits, caps=DEFAULT_CAPS, seed=None):
    """JSON-ready run description accompanying a CSV table."""
    return {
        "config": config_to_dict(cfg),
        "table": table.meta,
        "kind": table.kind,
        "caps": {
            "b_window": caps.b_window,
            "residue_cap": caps.residue_cap,
            "orbit_cap": caps.orbit_cap,
            "box_min": caps.box_min,
        },
        "seed": seed,
        "fits": {
            name: {"model": f.model, "constant": f.constant, "max_residual": f.max_residual}
            for name, f in fits.items()
        },
    }

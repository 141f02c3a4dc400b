"""Group families, exact element arithmetic and canonical normal forms.

Three families are supported, all through the same small API:

* ``bs``         solvable Baumslag-Solitar groups <a, b | b a b^-1 = a^m>,
                 handled internally as the 1-dimensional ascending case;
* ``gamma_m``    ascending HNN extensions of Z^d determined by an integer
                 matrix M with det(M) != 0, presented by
                 <t, a_1..a_d | [a_i,a_j] = 1, t a_i t^-1 = phi_M(a_i)>;
* ``semidirect`` split extensions Z^d x| Z^k where Z^k acts through a
                 commuting family of unimodular integer matrices.

Elements are plain named tuples in a unique canonical form, so equality,
hashing and dict keying are structural.  All group arithmetic is exact;
floating point appears only in the advisory spectral metadata attached to
a configuration.
"""

from __future__ import annotations

import json
import re
from dataclasses import dataclass
from functools import lru_cache
from typing import NamedTuple, Optional

import numpy as np

from .errors import ConfigError, WordParseError
from .intlinalg import IntMatrix, mat_pow_int

_SPECTRAL_TOL = 1e-9


@dataclass(frozen=True)
class Spectral:
    """Float eigenvalue metadata; advisory only, never on the element path."""

    lambda_max: float
    lambda_min: float
    expanding: bool
    r_split: bool


@dataclass(frozen=True)
class GroupConfig:
    family: str
    d: int
    k: int
    m: Optional[int]
    matrix_m: Optional[IntMatrix]
    phi_gens: tuple
    generator_names: tuple
    spectral: Spectral

    def __post_init__(self):
        if len(self.generator_names) != self.d + self.k:
            raise ConfigError("need one name per generator")
        if len(set(self.generator_names)) != len(self.generator_names):
            raise ConfigError("duplicate generator names")


class GmElement(NamedTuple):
    """Canonical form (p, w, s) meaning (M^-p w) t^s, i.e. t^-p w t^(p+s).

    Invariants: p >= 0; if p > 0 then w is not in M Z^d; if w = 0 then p = 0.
    """

    p: int
    w: tuple
    s: int


class SdElement(NamedTuple):
    """Pair (x, y) in Z^d x| Z^k."""

    x: tuple
    y: tuple


def _eig_metadata(mats, d):
    """Common spectral data for a commuting family (single matrix allowed)."""
    if not mats:
        return Spectral(1.0, 1.0, False, True)
    arrays = [np.array(m.data, dtype=float) for m in mats]
    weights = [1.0]
    for _ in range(len(arrays) - 1):
        weights.append(weights[-1] * 0.6180339887498949)
    combo = sum(w * a for w, a in zip(weights, arrays))
    eigvals, vecs = np.linalg.eig(combo)
    r_split = True
    moduli = []
    try:
        vinv = np.linalg.inv(vecs)
    except np.linalg.LinAlgError:
        vinv = None
        r_split = False
    for a in arrays:
        if vinv is not None:
            diag = vinv @ a @ vecs
            off = diag - np.diag(np.diag(diag))
            if np.max(np.abs(off)) > 1e-6 * max(1.0, np.max(np.abs(diag))):
                r_split = False
            lam = np.diag(diag)
        else:
            lam = np.linalg.eigvals(a)
        if np.max(np.abs(np.imag(lam))) > 1e-7 or np.min(np.real(lam)) <= 0:
            r_split = False
        moduli.extend(np.abs(lam))
    return Spectral(
        lambda_max=float(max(moduli)),
        lambda_min=float(min(moduli)),
        expanding=bool(min(moduli) > 1.0 + _SPECTRAL_TOL),
        r_split=r_split,
    )


def bs_config(m, names=("a", "b")):
    """BS(1, m) = <a, b | b a b^-1 = a^m> for m >= 2."""
    m = int(m)
    if m < 2:
        raise ConfigError("bs family requires m >= 2")
    mat = IntMatrix(((m,),))
    return GroupConfig(
        family="bs",
        d=1,
        k=1,
        m=m,
        matrix_m=mat,
        phi_gens=(),
        generator_names=tuple(names),
        spectral=_eig_metadata([mat], 1),
    )


def gamma_m_config(matrix, names=None):
    """Ascending HNN extension of Z^d defined by an integer matrix."""
    mat = matrix if isinstance(matrix, IntMatrix) else IntMatrix(matrix)
    if mat.rows != mat.cols:
        raise ConfigError("matrix must be square")
    if mat.det() == 0:
        raise ConfigError("matrix must have nonzero determinant")
    d = mat.rows
    if names is None:
        names = tuple(f"a{i+1}" for i in range(d)) + ("t",)
    return GroupConfig(
        family="gamma_m",
        d=d,
        k=1,
        m=None,
        matrix_m=mat,
        phi_gens=(),
        generator_names=tuple(names),
        spectral=_eig_metadata([mat], d),
    )


def semidirect_config(phi_gens, d=None, names=None):
    """Z^d x| Z^k with the action generated by commuting unimodular matrices."""
    mats = tuple(m if isinstance(m, IntMatrix) else IntMatrix(m) for m in phi_gens)
    if mats:
        d = mats[0].rows
        for m in mats:
            if m.rows != m.cols or m.rows != d:
                raise ConfigError("action matrices must be square of equal size")
            if abs(m.det()) != 1:
                raise ConfigError("action matrices must have determinant +-1")
        for i in range(len(mats)):
            for j in range(i + 1, len(mats)):
                if mats[i] * mats[j] != mats[j] * mats[i]:
                    raise ConfigError("action matrices must commute")
    elif d is None:
        raise ConfigError("k = 0 requires an explicit dimension d")
    k = len(mats)
    if names is None:
        names = tuple(f"a{i+1}" for i in range(d)) + tuple(f"t{j+1}" for j in range(k))
    return GroupConfig(
        family="semidirect",
        d=d,
        k=k,
        m=None,
        matrix_m=None,
        phi_gens=mats,
        generator_names=tuple(names),
        spectral=_eig_metadata(list(mats), d),
    )


def load_config(source):
    """Build a GroupConfig from a JSON document (dict, JSON text, or path)."""
    if isinstance(source, str):
        text = source
        if not source.lstrip().startswith("{"):
            with open(source, "r", encoding="utf-8") as fh:
                text = fh.read()
        obj = json.loads(text)
    else:
        obj = source
    if not isinstance(obj, dict) or "family" not in obj:
        raise ConfigError("config must be an object with a 'family' field")
    family = obj["family"]
    names = tuple(obj["generator_names"]) if "generator_names" in obj else None
    if family == "bs":
        if "m" not in obj:
            raise ConfigError("bs config needs 'm'")
        return bs_config(obj["m"], names=names or ("a", "b"))
    if family == "gamma_m":
        if "matrix_m" not in obj:
            raise ConfigError("gamma_m config needs 'matrix_m'")
        return gamma_m_config(obj["matrix_m"], names=names)
    if family == "semidirect":
        if "phi_gens" not in obj:
            raise ConfigError("semidirect config needs 'phi_gens'")
        return semidirect_config(obj["phi_gens"], d=obj.get("d"), names=names)
    raise ConfigError(f"unknown family {family!r}")


def config_to_dict(cfg):
    out = {"family": cfg.family, "generator_names": list(cfg.generator_names)}
    if cfg.family == "bs":
        out["m"] = cfg.m
    elif cfg.family == "gamma_m":
        out["matrix_m"] = [list(r) for r in cfg.matrix_m.data]
    else:
        out["phi_gens"] = [[list(r) for r in g.data] for g in cfg.phi_gens]
        out["d"] = cfg.d
    return out


# -- gamma_m / bs arithmetic -------------------------------------------------

@lru_cache(maxsize=None)
def _m_pow(cfg, e):
    return mat_pow_int(cfg.matrix_m, e)


@lru_cache(maxsize=None)
def _m_div_data(cfg):
    """(adjugate, det) of M, used to strip one M-factor from a vector."""
    m = cfg.matrix_m
    d = m.rows
    if d == 1:
        return IntMatrix(((1,),)), m[0, 0]
    inv = m.to_rat().inverse()
    dd = m.det()
    adj = IntMatrix(tuple(tuple(int(x * dd) for x in row) for row in inv.data))
    return adj, dd


def _strip_m(cfg, w):
    """w / M if w lies in M Z^d, else None."""
    adj, dd = _m_div_data(cfg)
    out = adj.mul_vec(w)
    if any(c % dd for c in out):
        return None
    return tuple(c // dd for c in out)


def gm_normalize(cfg, p, w, s) -> GmElement:
    """Canonical form for the coset datum (M^-p w) t^s."""
    p = int(p)
    w = tuple(int(x) for x in w)
    if p < 0:
        raise ValueError("p must be nonnegative")
    if all(x == 0 for x in w):
        return GmElement(0, (0,) * cfg.d, int(s))
    while p > 0:
        reduced = _strip_m(cfg, w)
        if reduced is None:
            break
        w = reduced
        p -= 1
    return GmElement(p, w, int(s))


def gm_mul(cfg, a: GmElement, b: GmElement) -> GmElement:
    p = max(a.p, b.p - a.s)
    if p < 0:
        p = 0
    wa = _m_pow(cfg, p - a.p).mul_vec(a.w)
    wb = _m_pow(cfg, p - b.p + a.s).mul_vec(b.w)
    return gm_normalize(cfg, p, tuple(x + y for x, y in zip(wa, wb)), a.s + b.s)


def gm_inv(cfg, a: GmElement) -> GmElement:
    q = a.p + a.s
    if q >= 0:
        return gm_normalize(cfg, q, tuple(-x for x in a.w), -a.s)
    w = _m_pow(cfg, -q).mul_vec(a.w)
    return gm_normalize(cfg, 0, tuple(-x for x in w), -a.s)


# -- semidirect arithmetic ----------------------------------------------------

@lru_cache(maxsize=None)
def _phi_gen_pow(cfg, i, e):
    """phi(e_i)^e for any integer e; inverses are exact (det = +-1)."""
    g = cfg.phi_gens[i]
    if e >= 0:
        return mat_pow_int(g, e)
    ginv = g.to_rat().inverse().to_int()
    return mat_pow_int(ginv, -e)


@lru_cache(maxsize=200_000)
def phi_of(cfg, y) -> IntMatrix:
    """The action matrix phi(y) = phi_1^{y_1} ... phi_k^{y_k}."""
    out = IntMatrix.identity(cfg.d)
    for i, e in enumerate(y):
        if e:
            out = out * _phi_gen_pow(cfg, i, e)
    return out


def sd_mul(cfg, a: SdElement, b: SdElement) -> SdElement:
    moved = phi_of(cfg, a.y).mul_vec(b.x)
    return SdElement(
        tuple(p + q for p, q in zip(a.x, moved)),
        tuple(p + q for p, q in zip(a.y, b.y)),
    )


def sd_inv(cfg, a: SdElement) -> SdElement:
    ny = tuple(-c for c in a.y)
    moved = phi_of(cfg, ny).mul_vec(a.x)
    return SdElement(tuple(-c for c in moved), ny)


# -- family dispatch ----------------------------------------------------------

def identity(cfg):
    if cfg.family == "semidirect":
        return SdElement((0,) * cfg.d, (0,) * cfg.k)
    return GmElement(0, (0,) * cfg.d, 0)


def mul(cfg, a, b):
    if cfg.family == "semidirect":
        return sd_mul(cfg, a, b)
    return gm_mul(cfg, a, b)


def inv(cfg, a):
    if cfg.family == "semidirect":
        return sd_inv(cfg, a)
    return gm_inv(cfg, a)


def conj(cfg, g, u):
    """g^-1 u g; the witness convention used everywhere in this package."""
    return mul(cfg, inv(cfg, g), mul(cfg, u, g))


def generators(cfg):
    """Pairs (name, element) in the fixed generator order: a's then t's."""
    out = []
    if cfg.family == "semidirect":
        for i in range(cfg.d):
            x = tuple(int(i == j) for j in range(cfg.d))
            out.append((cfg.generator_names[i], SdElement(x, (0,) * cfg.k)))
        for j in range(cfg.k):
            y = tuple(int(j == i) for i in range(cfg.k))
            out.append((cfg.generator_names[cfg.d + j], SdElement((0,) * cfg.d, y)))
    else:
        for i in range(cfg.d):
            w = tuple(int(i == j) for j in range(cfg.d))
            out.append((cfg.generator_names[i], GmElement(0, w, 0)))
        out.append((cfg.generator_names[cfg.d], GmElement(0, (0,) * cfg.d, 1)))
    return out


_TOKEN_RE = re.compile(r"^([A-Za-z_][A-Za-z0-9_]*)(?:\^(-?\d+))?$")


def parse_word(cfg, text):
    """Parse "a1 t^-2 a2^3" into a letter sequence ((index, sign), ...)."""
    name_to_index = {name: i for i, name in enumerate(cfg.generator_names)}
    letters = []
    for pos, token in enumerate(text.split()):
        m = _TOKEN_RE.match(token)
        if not m:
            raise WordParseError(f"token {pos + 1}: cannot parse {token!r}", position=pos)
        name, exp = m.group(1), m.group(2)
        if name not in name_to_index:
            raise WordParseError(f"token {pos + 1}: unknown generator {name!r}", position=pos)
        e = int(exp) if exp is not None else 1
        sign = 1 if e > 0 else -1
        letters.extend(((name_to_index[name], sign),) * abs(e))
    return tuple(letters)


def word_str(cfg, word):
    """Compact string for a letter sequence, merging runs into powers."""
    if not word:
        return ""
    parts = []
    run_idx, run_sign, run_len = word[0][0], word[0][1], 0
    for idx, sign in word:
        if idx == run_idx and sign == run_sign:
            run_len += 1
        else:
            parts.append(_power_token(cfg, run_idx, run_sign * run_len))
            run_idx, run_sign, run_len = idx, sign, 1
    parts.append(_power_token(cfg, run_idx, run_sign * run_len))
    return " ".join(parts)


def _power_token(cfg, idx, e):
    name = cfg.generator_names[idx]
    return name if e == 1 else f"{name}^{e}"


def eval_word(cfg, word):
    """Left-to-right product of generator letters; empty word is the identity."""
    gens = [el for _, el in generators(cfg)]
    out = identity(cfg)
    for idx, sign in word:
        g = gens[idx]
        out = mul(cfg, out, g if sign > 0 else inv(cfg, g))
    return out


def to_word(cfg, el):
    """Some word evaluating to el (not geodesic)."""
    letters = []
    if cfg.family == "semidirect":
        for i, c in enumerate(el.x):
            letters.extend(((i, 1 if c > 0 else -1),) * abs(c))
        for j, c in enumerate(el.y):
            letters.extend(((cfg.d + j, 1 if c > 0 else -1),) * abs(c))
    else:
        t = cfg.d
        letters.extend(((t, -1),) * el.p)
        for i, c in enumerate(el.w):
            letters.extend(((i, 1 if c > 0 else -1),) * abs(c))
        q = el.p + el.s
        letters.extend(((t, 1 if q > 0 else -1),) * abs(q))
    return tuple(letters)


def canonical_str(el):
    """Stable one-token text form used in CSV output."""
    if isinstance(el, SdElement):
        return f"{','.join(map(str, el.x))}|{','.join(map(str, el.y))}"
    return f"{el.p}|{','.join(map(str, el.w))}|{el.s}"


def parse_canonical(cfg, text):
    parts = text.split("|")
    if cfg.family == "semidirect":
        if len(parts) != 2:
            raise ValueError(f"bad element text {text!r}")
        x = tuple(int(c) for c in parts[0].split(",") if c != "")
        y = tuple(int(c) for c in parts[1].split(",") if c != "")
        return SdElement(x, y)
    if len(parts) != 3:
        raise ValueError(f"bad element text {text!r}")
    w = tuple(int(c) for c in parts[1].split(","))
    return GmElement(int(parts[0]), w, int(parts[2]))

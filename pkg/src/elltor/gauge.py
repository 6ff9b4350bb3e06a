"""Instanton series of the Jordan-quiver gauge theories and their free-field cross-checks.

Counting variables (𝔮, 𝔮_M) are formal tags: coefficients are stored per
charge and never multiplied by the tag.  Absolute constants built from
infinite products with purely rational arguments are not truncatable, so
every cross-check compares quantities normalized by the all-empty term.
"""

from __future__ import annotations

import csv
import io
import json
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Callable, Iterable, Sequence

from gmpy2 import mpq

from ._num import ONE, to_q
from .fock import (ModeAlgebra, build_phi, build_psi_star, empty_trace, ope_closed_form,
                   ope_scalar, t_block, trace_qd, vacuum_pair)
from .nekrasov import (block_normalization, c_factor, c_factor_elliptic, nekrasov_5d,
                       nekrasov_theta, z_affine)
from .partition import EMPTY, Partition, enumerate_partitions, enumerate_tuples
from .qseries.params import ParamPoint
from .qseries.series import Ring, Series, SeriesError
from .qseries.special import pochhammer, pochhammer_inv

__all__ = ["InstantonSeries", "chi_y_u1", "elliptic_genus_u1", "chi_y_uM", "elliptic_genus_uM",
           "ratio_names", "genus_ring", "cross_factor", "tt_cross_check", "tt6d_cross_check",
           "trace_cross_check", "empty_trace_check", "vn_independence_check",
           "specialization_ladder", "swap_symmetry_check", "chi_y_u2_at", "vacuum_chain",
           "correlator_4pt", "correlator_2N2pt", "correlator_check", "trace_cross_part",
           "trace_correlator_check", "COUNTING_RELATIONS", "PREFACTOR_TAGS", "thread_count"]

COUNTING_RELATIONS = {
    "q_count": "p*^-1 p^(N-1) (t/q)^(1/2)",
    "q_count_M": "counting variable of the M-block product; q_count_M / q_count = p^-(M-1)",
}
PREFACTOR_TAGS = ("C", "C_M", "C_Q", "C_QM")


def thread_count() -> int:
    """Worker count from ELLTOR_THREADS (default 1)."""
    raw = os.environ.get("ELLTOR_THREADS", "1")
    try:
        n = int(raw)
    except ValueError:
        raise ValueError(f"ELLTOR_THREADS must be an integer, got {raw!r}") from None
    return max(1, n)


def _ordered_map(fn: Callable, items: Sequence) -> list:
    """Map in parallel but return results in input order."""
    n = thread_count()
    if n == 1 or len(items) < 2:
        return [fn(it) for it in items]
    with ThreadPoolExecutor(max_workers=n) as pool:
        return list(pool.map(fn, items))


# --- result container -------------------------------------------------------

@dataclass
class InstantonSeries:
    """Per-charge coefficients of a formal counting variable."""

    tag: str
    coefficients: list[Series]
    metadata: dict = field(default_factory=dict)

    @property
    def max_charge(self) -> int:
        return len(self.coefficients) - 1

    def coefficient(self, k: int) -> Series:
        return self.coefficients[k]

    def exact(self, orders: dict) -> bool:
        return all(c.covers(orders) for c in self.coefficients)

    def to_rows(self, orders: dict | None = None) -> list[tuple]:
        """(charge, exponent vector, numerator, denominator), inside the requested box."""
        rows = []
        for k, c in enumerate(self.coefficients):
            names = c.ring.names
            lim = dict(zip(names, c.ring.orders)) | dict(orders or {})
            for raw, val in c.raw_box_items():
                if any(e > lim[n] or (c.ring.kinds[i] == "spectral" and e < -lim[n])
                       for i, (n, e) in enumerate(zip(names, raw))):
                    continue
                rows.append((k, tuple(raw), int(val.numerator), int(val.denominator)))
        return rows

    def variables(self) -> list[str]:
        return list(self.coefficients[0].ring.names) if self.coefficients else []

    def to_json(self, orders: dict | None = None) -> str:
        doc = {"tag": self.tag, "variables": self.variables(),
               "metadata": _jsonable(self.metadata),
               "rows": [[k, list(e), str(n), str(d)] for k, e, n, d in self.to_rows(orders)]}
        return json.dumps(doc, sort_keys=True, indent=1, ensure_ascii=False) + "\n"

    def to_csv(self, orders: dict | None = None) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["charge", "exponents", "numerator", "denominator"])
        for k, e, n, d in self.to_rows(orders):
            w.writerow([k, " ".join(str(x) for x in e), n, d])
        return buf.getvalue()


def _jsonable(obj):
    if isinstance(obj, dict):
        return {str(k): _jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_jsonable(v) for v in obj]
    if isinstance(obj, (int, str, bool)) or obj is None:
        return obj
    return str(obj)


# --- rings ---------------------------------------------------------------

def ratio_names(rank: int) -> list[str]:
    """Spectral ratio variables x1 = u2/u1, x2 = u3/u2, ..."""
    return [f"x{i}" for i in range(1, rank)]


def genus_ring(rank: int, p_order: int, x_order: int = 0, q_order: int | None = None) -> Ring:
    """Ring for rank-M sums.

    The ratios are the smallest variables (|x| < |p|, as for products of
    T-blocks), and with a trace nome Q the ordering is Q ≪ p·x so that
    Q/(p x) and Q/x stay small.
    """
    xs = ratio_names(rank)
    nomes = {"p": p_order}
    ties: dict[str, list[str]] = {"p": list(xs)}
    if q_order is not None:
        nomes["Q"] = q_order
        ties["p"] += ["Q", "Q"]
        ties["Q"] = []
    for x in xs:
        ties[x] = ["Q"] if q_order is not None else []
    return Ring.make(nomes=nomes, spectral={x: x_order for x in xs}, ties=ties)


def _ratio_monomial(ring: Ring, i: int, j: int) -> Series:
    """u_i/u_j in terms of the consecutive ratios (1-based rows)."""
    out = ring.one()
    xs = ratio_names(max(i, j) + 1)
    if i < j:
        for k in range(i, j):
            out = out * ring.var(xs[k - 1])
        return out.invert()
    for k in range(j, i):
        out = out * ring.var(xs[k - 1])
    return out


def _kernel(lam: Partition, mu: Partition, arg: Series, params: ParamPoint, theta_nome):
    if theta_nome is None:
        return nekrasov_5d(lam, mu, arg, params)
    return nekrasov_theta(lam, mu, arg, theta_nome, params, arg.ring)


def cross_factor(lam: Partition, mu: Partition, u_ij: Series, params: ParamPoint,
                 theta_nome: str | None = None) -> Series:
    """N_λμ(pq u/t)/N_λμ(q u/t), or its N^θ(·;Q) version."""
    ring = u_ij.ring
    arg = u_ij.scale(params.power(1, -1))
    return (_kernel(lam, mu, arg * ring.var("p"), params, theta_nome)
            / _kernel(lam, mu, arg, params, theta_nome))


def _diag_factor(lam: Partition, ring: Ring, params: ParamPoint, theta_nome, route: str):
    if theta_nome is None:
        return z_affine(lam, params, ring, form=route)
    if route == "ratio":
        return cross_factor(lam, lam, ring.one(), params, theta_nome)
    p = ring.var("p")
    Q = ring.var(theta_nome)
    from .qseries.special import theta_ratio
    nums, dens = [], []
    for b in lam.boxes():
        a, l = lam.arm(b), lam.leg(b)
        w1, w2 = params.power(a + 1, l), params.power(-a, -l - 1)
        nums += [p.scale(w1), p.scale(w2)]
        dens += [ring.const(w1), ring.const(w2)]
    return theta_ratio(nums, dens, Q, ring)


def _tuple_weight(lams: Sequence[Partition], ring: Ring, params: ParamPoint, theta_nome,
                  route: str) -> Series:
    out = ring.one()
    for i, lam in enumerate(lams, start=1):
        out = out * _diag_factor(lam, ring, params, theta_nome, route)
        for j, mu in enumerate(lams, start=1):
            if i != j:
                out = out * cross_factor(lam, mu, _ratio_monomial(ring, i, j), params, theta_nome)
    return out


def _assemble(rank: int, k_max: int, ring: Ring, params: ParamPoint, theta_nome, route: str,
              orders: dict, tag: str, extra: dict) -> InstantonSeries:
    if k_max < 0:
        raise ValueError("k_max must be non-negative")

    def charge(k):
        total = ring.zero()
        for lams in enumerate_tuples(rank, k):
            total = total + _tuple_weight(lams, ring, params, theta_nome, route)
        return total

    coeffs = _ordered_map(charge, list(range(k_max + 1)))
    for k, c in enumerate(coeffs):
        if not c.covers(orders):
            raise SeriesError(f"window too small for charge {k}; raise the padding")
    meta = {"rank": rank, "max_charge": k_max, "orders": dict(orders), "route": route,
            "counting": COUNTING_RELATIONS["q_count" if rank == 1 else "q_count_M"],
            "prefactor": PREFACTOR_TAGS[(rank > 1) + 2 * (theta_nome is not None)],
            "params": params.describe()} | extra
    return InstantonSeries(tag, coeffs, meta)


# --- public instanton series -----------------------------------------------

def chi_y_u1(k_max: int, params: ParamPoint, p_order: int, route: str = "box") -> InstantonSeries:
    """Σ_{|λ|=k} Z_λ(t, q^{-1}, p) per charge k (χ_y-genus of the Hilbert scheme)."""
    ring = genus_ring(1, p_order)
    return _assemble(1, k_max, ring, params, None, route, {"p": p_order}, "q_count", {})


def elliptic_genus_u1(k_max: int, params: ParamPoint, p_order: int, q_order: int,
                      route: str = "ratio") -> InstantonSeries:
    """Σ_{|λ|=k} N^θ_λλ(pq/t;Q)/N^θ_λλ(q/t;Q) per charge k."""
    ring = genus_ring(1, p_order + q_order, q_order=q_order)
    return _assemble(1, k_max, ring, params, "Q", route, {"p": p_order, "Q": q_order},
                     "q_count", {})


def _pad(k_max: int) -> int:
    return k_max + 2


def chi_y_uM(rank: int, k_max: int, params: ParamPoint, p_order: int,
             x_order: int = 4, pad: int | None = None) -> InstantonSeries:
    """χ_p of rank-M charge-k instanton moduli, expanded in consecutive ratios x_i."""
    if rank < 1:
        raise ValueError("rank must be positive")
    pad = _pad(k_max) if pad is None else pad
    ring = genus_ring(rank, p_order + pad, x_order + pad)
    orders = {"p": p_order} | {x: x_order for x in ratio_names(rank)}
    return _assemble(rank, k_max, ring, params, None, "box", orders,
                     "q_count" if rank == 1 else "q_count_M", {"pad": pad})


def elliptic_genus_uM(rank: int, k_max: int, params: ParamPoint, p_order: int, q_order: int,
                      x_order: int = 4, pad: int | None = None) -> InstantonSeries:
    """Elliptic genus of rank-M charge-k instanton moduli (N → N^θ(·;Q))."""
    if rank < 1:
        raise ValueError("rank must be positive")
    pad = _pad(k_max) if pad is None else pad
    ring = genus_ring(rank, p_order + pad, x_order + pad, q_order + pad)
    orders = {"p": p_order, "Q": q_order} | {x: x_order for x in ratio_names(rank)}
    return _assemble(rank, k_max, ring, params, "Q", "ratio", orders,
                     "q_count" if rank == 1 else "q_count_M", {"pad": pad})


# --- free-field cross-checks -------------------------------------------------

def _compare(lhs: Series, rhs: Series, orders: dict) -> dict:
    ok, where = lhs.agree(rhs)
    exact = lhs.covers(orders) and rhs.covers(orders)
    return {"ok": bool(ok and exact), "agree": bool(ok), "exact": bool(exact),
            "mismatch": where}


def _pair_cross(lam: Partition, mu: Partition, ring: Ring, params: ParamPoint,
                theta_nome=None) -> Series:
    """Off-diagonal part of the rank-2 weight times p^{-(|λ|+|μ|)}."""
    x = ring.var("x1")
    val = (cross_factor(lam, mu, x.invert(), params, theta_nome)
           * cross_factor(mu, lam, x, params, theta_nome))
    return val * ring.var("p") ** (-(lam.size + mu.size))


def tt_cross_check(lam: Partition, mu: Partition, params: ParamPoint, x_order: int = 6,
                   p_order: int = 4, pad: int | None = None) -> dict:
    """Contraction of T_λ(1) T_μ(x1) over the empty blocks against the gauge cross factor."""
    pad = lam.size + mu.size + 2 if pad is None else pad
    ring = genus_ring(2, p_order + pad, x_order + pad)
    alg = ModeAlgebra(params, ring)
    one, x = ring.one(), ring.var("x1")
    base = ope_scalar(t_block(EMPTY, alg, one), t_block(EMPTY, alg, x))
    lhs = ope_scalar(t_block(lam, alg, one), t_block(mu, alg, x)) / base
    rhs = _pair_cross(lam, mu, ring, params)
    out = _compare(lhs, rhs, {"p": p_order, "x1": x_order})
    out.update(partitions=[list(lam.parts), list(mu.parts)])
    return out


def tt6d_cross_check(lam: Partition, mu: Partition, params: ParamPoint, x_order: int = 3,
                     p_order: int = 2, q_order: int = 2, pad: int | None = None) -> dict:
    """Graded trace of T_λ(1) T_μ(x1) over the empty blocks against the N^θ weight.

    Expected: p^{-(|λ|+|μ|)} times the N^θ cross factor times the Q-parts of
    the two diagonal factors (their Q → 0 limits cancel against the contraction).
    """
    pad = lam.size + mu.size + 3 if pad is None else pad
    ring = genus_ring(2, p_order + pad, x_order + pad, q_order + pad)
    alg = ModeAlgebra(params, ring)
    one, x = ring.one(), ring.var("x1")

    def full(a, b):
        first, second = t_block(a, alg, one), t_block(b, alg, x)
        return ope_scalar(first, second) * trace_qd([first, second]).q_factor

    lhs = full(lam, mu) / full(EMPTY, EMPTY)
    rhs = _pair_cross(lam, mu, ring, params, "Q")
    for nu in (lam, mu):
        rhs = rhs * _diag_q_part(nu, ring, params)
    out = _compare(lhs, rhs, {"p": p_order, "Q": q_order, "x1": x_order})
    out.update(partitions=[list(lam.parts), list(mu.parts)])
    return out


def _diag_q_part(lam: Partition, ring: Ring, params: ParamPoint) -> Series:
    """Elliptic diagonal weight divided by its Q → 0 value."""
    z = _diag_factor(lam, ring, params, "Q", "ratio")
    return z / z.substitute_zero("Q")


def trace_cross_check(lam: Partition, params: ParamPoint, p_order: int = 3, q_order: int = 3,
                      pad: int | None = None) -> dict:
    """Q-part of tr Q^d T_λ over that of T_∅ against the N^θ ratio over its Q → 0 part."""
    pad = q_order + lam.size + 1 if pad is None else pad
    ring = Ring.make(nomes={"p": p_order + pad, "Q": q_order + pad}, ties={"p": ["Q"]})
    alg = ModeAlgebra(params, ring)
    one = ring.one()
    base = trace_qd([t_block(EMPTY, alg, one)]).q_factor
    lhs = trace_qd([t_block(lam, alg, one)]).q_factor / base
    rhs = _diag_q_part(lam, ring, params)
    out = _compare(lhs, rhs, {"p": p_order, "Q": q_order})
    out.update(partition=list(lam.parts))
    return out


def empty_trace_check(params: ParamPoint, p_order: int = 3, q_order: int = 3) -> dict:
    """The bare trace is 1/(Q;Q)_∞ and tr Q^d T_∅ adds the Q-part of C_Q."""
    pad = q_order + 1
    ring = Ring.make(nomes={"p": p_order + pad, "Q": q_order + pad}, ties={"p": ["Q"]})
    Q, p = ring.var("Q"), ring.var("p")
    q, t = params.q, params.t
    bare = empty_trace(ring)
    expected_bare = pochhammer_inv(Q, [Q], ring)
    orders = {"p": p_order, "Q": q_order}
    bare_cmp = _compare(bare, expected_bare, orders)
    alg = ModeAlgebra(params, ring)
    block = trace_qd([t_block(EMPTY, alg, ring.one())]).q_factor
    bases = [q, t, Q]
    cq = (pochhammer(Q.scale(t) / p, bases, ring) * pochhammer((p * Q).scale(q), bases, ring)
          / (pochhammer(Q.scale(t), bases, ring) * pochhammer(Q.scale(q), bases, ring)))
    block_cmp = _compare(block, expected_bare * cq, orders)
    return {"ok": bare_cmp["ok"] and block_cmp["ok"], "bare": bare_cmp, "block": block_cmp}


# --- invariants ----------------------------------------------------------------

def vn_independence_check(k_max: int, params: ParamPoint, p_order: int,
                          choices: Iterable[tuple] = ((ONE, mpq(3, 7), 0), (mpq(5, 2), mpq(-2, 9), 3))
                          ) -> dict:
    """Per-charge weights Σ_λ t*·t·Z_λ / 𝔮^{|λ|} agree for two (u, v, N) builds.

    𝔮 = p*^{-1} p^{N-1} (t/q)^{1/2} is applied as an exact monomial here only.
    """
    ring = genus_ring(1, p_order + 2 * k_max)
    p = ring.var("p")
    q, t = params.q, params.t
    builds = []
    for u, v, n in choices:
        qcount = p ** (n - 2) * ring.const((t / q) * params.tq(1, denom=2))
        coeffs = []
        for k in range(k_max + 1):
            total = ring.zero()
            for lam in enumerate_partitions(k):
                rat, ppow = block_normalization(lam, to_q(u), to_q(v), n, params)
                total = total + z_affine(lam, params, ring).scale(rat) * p ** ppow
            coeffs.append(total / qcount ** k)
        builds.append(coeffs)
    ok = True
    where = None
    for k in range(k_max + 1):
        agree, mm = builds[0][k].agree(builds[1][k])
        if not agree:
            ok, where = False, {"charge": k, "at": mm}
            break
    return {"ok": ok, "mismatch": where, "choices": [[str(c) for c in ch] for ch in choices]}


def specialization_ladder(rank: int, k_max: int, params: ParamPoint, p_order: int = 2,
                          q_order: int = 1, x_order: int = 2, max_size: int = 4) -> dict:
    """elliptic(Q → 0) = χ_y for the given rank, rank 1 = U(1), c(p) at p^0 = c."""
    pad = _pad(k_max)
    six = elliptic_genus_uM(rank, k_max, params, p_order, q_order, x_order, pad=pad)
    # the 5d ring must equal the 6d ring with Q removed, so match its orders
    five = chi_y_uM(rank, k_max, params, p_order + q_order, x_order + q_order, pad=pad)
    steps = []
    for k in range(k_max + 1):
        reduced = six.coefficients[k].substitute_zero("Q").drop("Q")
        target = five.coefficients[k]
        if reduced.ring != target.ring:
            target = _rehome(target, reduced.ring)
        ok, where = reduced.agree(target)
        steps.append({"step": "Q->0", "charge": k, "ok": bool(ok), "mismatch": where})
    m1 = chi_y_uM(1, k_max, params, p_order)
    u1 = chi_y_u1(k_max, params, p_order)
    for k in range(k_max + 1):
        ok, where = m1.coefficients[k].agree(_rehome(u1.coefficients[k], m1.coefficients[k].ring))
        steps.append({"step": "M->1", "charge": k, "ok": bool(ok), "mismatch": where})
    ring0 = Ring.make(nomes={"p": 0})
    for n in range(max_size + 1):
        for lam in enumerate_partitions(n):
            for prime in (False, True):
                ell = c_factor_elliptic(lam, params, ring0, prime=prime).constant_term()
                ok = ell == c_factor(lam, params, prime=prime)
                steps.append({"step": "c(p)->c", "partition": list(lam.parts), "prime": prime,
                              "ok": bool(ok), "mismatch": None if ok else str(ell)})
    return {"ok": all(s["ok"] for s in steps), "steps": steps}


def _rehome(s: Series, ring: Ring) -> Series:
    """Copy the terms of ``s`` into ``ring`` (same variable names)."""
    terms = {}
    for raw, c in s.raw_items():
        terms[ring.to_eff(ring.raw_vector(dict(zip(s.ring.names, raw))))] = c
    win = []
    for n in ring.names:
        i = s.ring.index(n)
        win.append(s.window[i])
    return Series(ring, terms, tuple(min(w, b) for w, b in zip(win, ring.bounds)))


def chi_y_u2_at(k: int, ratio, params: ParamPoint, p_order: int) -> Series:
    """Rank-2 charge-k coefficient with u2/u1 fixed to a rational number (p-series)."""
    ring = Ring.make(nomes={"p": p_order})
    r = to_q(ratio)
    total = ring.zero()
    for lam, mu in enumerate_tuples(2, k):
        term = z_affine(lam, params, ring) * z_affine(mu, params, ring)
        term = term * _cross_at(lam, mu, ONE / r, ring, params)
        term = term * _cross_at(mu, lam, r, ring, params)
        total = total + term
    return total


def _cross_at(lam, mu, u, ring, params):
    c = u * params.power(1, -1)
    return nekrasov_5d(lam, mu, ring.var("p").scale(c), params).scale(
        ONE / nekrasov_5d(lam, mu, c, params))


def swap_symmetry_check(k_max: int, params: ParamPoint, p_order: int = 3,
                        points: Sequence = (mpq(7, 11), mpq(-5, 13))) -> dict:
    """χ_p(M_{k,2}) at u2/u1 = r equals its value at 1/r (u1 ↔ u2)."""
    bad = []
    for k in range(k_max + 1):
        for r in points:
            ok, where = chi_y_u2_at(k, r, params, p_order).agree(
                chi_y_u2_at(k, ONE / to_q(r), params, p_order))
            if not ok:
                bad.append({"charge": k, "ratio": str(r), "at": where})
    return {"ok": not bad, "mismatch": bad[0] if bad else None}


# --- correlators ---------------------------------------------------------------

_BUILDERS = {"Phi": build_phi, "Psi": build_psi_star}


def vacuum_chain(spec: Sequence[tuple], alg: ModeAlgebra, var: str = "z") -> tuple[Series, Series]:
    """⟨0| O_1 ⋯ O_k |0⟩ of operator parts by contraction and by closed-form pair products.

    ``spec`` lists (kind, partition, e) with kind in {"Phi", "Psi"} and the
    operator placed at z^e; exponents must increase left to right (radial order).
    """
    ring = alg.ring
    exps = [e for _, _, e in spec]
    if any(b <= a for a, b in zip(exps, exps[1:])):
        raise ValueError("positions must be radially ordered (strictly increasing exponents)")
    z = ring.var(var)
    ops = [_BUILDERS[kind](lam, alg, z ** e) for kind, lam, e in spec]
    contraction = vacuum_pair(ops)
    closed = ring.one()
    for i, (k1, l1, e1) in enumerate(spec):
        for k2, l2, e2 in spec[i + 1:]:
            closed = closed * ope_closed_form(k1 + k2, l1, l2, z ** (e2 - e1), alg.params,
                                              alg.nome)
    return contraction, closed


def _weight(lam: Partition, ring: Ring, params: ParamPoint) -> Series:
    """c_λ(p*)/c'_λ(p*)."""
    pstar = ring.var("p").scale(params.power(1, -1))
    return (c_factor_elliptic(lam, params, ring, pstar)
            / c_factor_elliptic(lam, params, ring, pstar, prime=True))


@dataclass
class CorrelatorResult:
    total: Series
    terms: dict
    route: str


def _correlator(chains: Callable, n_points: int, max_size: int, alg: ModeAlgebra,
                route: str) -> CorrelatorResult:
    if route not in ("contraction", "closed"):
        raise ValueError("route must be 'contraction' or 'closed'")
    ring = alg.ring
    parts = [lam for n in range(max_size + 1) for lam in enumerate_partitions(n)]
    tuples = [()]
    for _ in range(n_points):
        tuples = [tp + (lam,) for tp in tuples for lam in parts]
    idx = 0 if route == "contraction" else 1
    terms = {}
    total = ring.zero()
    for lams in tuples:
        val = ring.one()
        for lam in lams:
            val = val * _weight(lam, ring, alg.params)
        for spec in chains(lams):
            val = val * vacuum_chain(spec, alg)[idx]
        terms[tuple(tuple(lam.parts) for lam in lams)] = val
        total = total + val
    return CorrelatorResult(total, terms, route)


def correlator_4pt(n_points: int, max_size: int, alg: ModeAlgebra,
                   route: str = "contraction") -> CorrelatorResult:
    """Σ_λ Π c_λ(p*)/c'_λ(p*) ⟨Ψ̃*_λN(w_N)⋯Ψ̃*_λ1(w_1)⟩ ⟨Φ̃_λN(w_N)⋯Φ̃_λ1(w_1)⟩, w_a = z^{N-a}."""
    def chains(lams):
        order = list(reversed(range(n_points)))
        return ([("Psi", lams[a], n_points - 1 - a) for a in order],
                [("Phi", lams[a], n_points - 1 - a) for a in order])
    return _correlator(chains, n_points, max_size, alg, route)


def correlator_2N2pt(nu: Partition, mu: Partition, n_points: int, max_size: int,
                     alg: ModeAlgebra, route: str = "contraction") -> CorrelatorResult:
    """As correlator_4pt with Φ̃_ν(y) in front of the Ψ̃* chain and Ψ̃*_μ(x) after the Φ̃ chain.

    Positions: y = 1, w_a = z^{N-a+1}, x = z^{N+1}.
    """
    def chains(lams):
        order = list(reversed(range(n_points)))
        first = [("Phi", nu, 0)] + [("Psi", lams[a], n_points - a) for a in order]
        second = [("Phi", lams[a], n_points - a) for a in order] + [("Psi", mu, n_points + 1)]
        return first, second
    return _correlator(chains, n_points, max_size, alg, route)


def correlator_check(kind: str, n_points: int, max_size: int, params: ParamPoint,
                     p_order: int = 3, z_order: int = 4, nu: Partition = EMPTY,
                     mu: Partition = EMPTY) -> dict:
    """Termwise contraction route against the closed-form OPE products."""
    span = n_points + (2 if kind == "2N2pt" else 0)
    pad = p_order + 2 * span + 2
    ring = Ring.make(nomes={"p": p_order + pad}, spectral={"z": z_order + pad})
    alg = ModeAlgebra(params, ring)
    if kind == "4pt":
        a = correlator_4pt(n_points, max_size, alg, "contraction")
        b = correlator_4pt(n_points, max_size, alg, "closed")
    elif kind == "2N2pt":
        a = correlator_2N2pt(nu, mu, n_points, max_size, alg, "contraction")
        b = correlator_2N2pt(nu, mu, n_points, max_size, alg, "closed")
    else:
        raise ValueError("kind must be '4pt' or '2N2pt'")
    orders = {"p": p_order, "z": z_order}
    for key in a.terms:
        cmp = _compare(a.terms[key], b.terms[key], orders)
        if not cmp["ok"]:
            cmp.update(term=[list(k) for k in key])
            return cmp
    out = _compare(a.total, b.total, orders)
    out.update(terms=len(a.terms))
    return out


def trace_cross_part(lam: Partition, nu: Partition, alg: ModeAlgebra, var: str = "z") -> Series:
    """Cross part of tr Q^d Φ̃_ν(1) Ψ̃*_λ(z): full trace over the single-operator traces."""
    ring = alg.ring
    first = build_phi(nu, alg, ring.one())
    second = build_psi_star(lam, alg, ring.var(var))
    full = ope_scalar(first, second) * trace_qd([first, second]).q_factor
    return full * empty_trace(ring) / (trace_qd([first]).q_factor * trace_qd([second]).q_factor)


def trace_correlator_check(lam: Partition, params: ParamPoint, nu: Partition = EMPTY,
                           p_order: int = 3, q_order: int = 3, z_order: int = 4,
                           pad: int = 4) -> dict:
    """Cross part normalized by λ = ∅ against N^θ_λν(√(q/t) z;Q)/N^θ_∅ν(√(q/t) z;Q)."""
    ring = Ring.make(nomes={"p": p_order + pad, "Q": q_order + pad},
                     spectral={"z": z_order + pad}, ties={"p": ["Q"]})
    alg = ModeAlgebra(params, ring)
    lhs = trace_cross_part(lam, nu, alg) / trace_cross_part(EMPTY, nu, alg)
    arg = ring.var("z").scale(params.tq(-1, denom=2))
    rhs = (nekrasov_theta(lam, nu, arg, "Q", params, ring)
           / nekrasov_theta(EMPTY, nu, arg, "Q", params, ring))
    out = _compare(lhs, rhs, {"p": p_order, "Q": q_order, "z": z_order})
    out.update(partitions=[list(lam.parts), list(nu.parts)])
    return out

"""Randomized detectors for spanning out-branchings with degree constraints.

Two problems share the Laplacian-determinant backbone from the matrixtree
module:

* detect_k_internal: is there a spanning out-branching with at least k
  internal (child-bearing) vertices? Arc weights are truncated polynomials
  1*zeta + t*(marker) whose degree-k slice survives only for branchings that
  put k distinct markers together. Markers are nilpotent group-algebra
  elements, so a repeated vertex squares to zero; random group elements make
  k distinct markers multiply to something nonzero with constant probability.

* detect_k_leaf: is there a spanning out-branching with at least k leaves?
  Equivalently one with at most n-k internal vertices. The branching
  polynomial (one monomial per branching, variable degree = child count,
  root bumped by one) is probed by the few-distinct-variables solver
  solve_nk_dv, which needs only black-box evaluations over prime fields.

Both detectors are one-sided: YES answers are certain, NO answers carry an
explicit failure-probability bound in the report.
"""

from __future__ import annotations

from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, replace
from functools import lru_cache
from typing import Protocol, Sequence, runtime_checkable

import numpy as np

from .algebra import (
    BinaryField,
    GroupAlgebra,
    PrimeField,
    TruncatedPolyRing,
    UnivariatePolyPF,
    interpolate_univariate,
    make_binary_field,
    random_prime_31,
)
from .errors import GuardError
from .graph import Digraph
from .matrixtree import build_laplacian, count_out_branchings, det_division_free, det_gauss, puncture
from .rand import derive_seed, make_rng
from .report import DetectionReport

GROUP_RANK_LIMIT = 6


# ---------------------------------------------------------------------------
# k-internal out-branchings


@dataclass(frozen=True)
class InternalSieveConfig:
    """Knobs for detect_k_internal. Randomness depends only on (seed, root, trial)."""

    trials: int = 100
    seed: int = 0
    threads: int = 1
    engine: str = "batched"
    chunk: int = 34

    def __post_init__(self):
        if self.trials < 1:
            raise ValueError("need at least one trial")
        if self.chunk < 1:
            raise ValueError("chunk must be positive")
        if self.engine not in ("batched", "scalar"):
            raise ValueError(f"unknown engine {self.engine!r}")


@lru_cache(maxsize=None)
def _pair_plan(k: int) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Gather/scatter plan for one ring multiplication at rank k.

    Ring elements are flat int32 vectors of length (k+1)*2^k: slot i*2^k + T
    holds the field coefficient of t^i times the product of the markers in
    subset T. A product pairs every (i1, T1) with (i2, T2) having i1+i2 <= k
    and T1, T2 disjoint (overlapping marker subsets vanish by nilpotency).
    Returns (ia, ib, offsets) with pairs sorted by output slot so that
    bitwise_xor.reduceat accumulates each output in one pass.
    """
    d = 1 << k
    pairs = []
    for i1 in range(k + 1):
        for i2 in range(k + 1 - i1):
            for t1 in range(d):
                rest = (~t1) & (d - 1)
                t2 = rest
                while True:
                    pairs.append(((i1 + i2) * d + (t1 | t2), i1 * d + t1, i2 * d + t2))
                    if t2 == 0:
                        break
                    t2 = (t2 - 1) & rest
    pairs.sort()
    out = np.array([o for o, _, _ in pairs], dtype=np.int64)
    ia = np.array([a for _, a, _ in pairs], dtype=np.int64)
    ib = np.array([b for _, _, b in pairs], dtype=np.int64)
    offsets = np.searchsorted(out, np.arange((k + 1) * d, dtype=np.int64))
    return ia, ib, offsets


def xbasis_to_group(ga: GroupAlgebra, coeffs: Sequence[int]) -> tuple[int, ...]:
    """Convert marker-subset coordinates to group-element coordinates.

    The marker basis writes elements over products of (unit(e_i) + 1); the
    group basis over unit(g). In characteristic 2 the change of basis is the
    superset xor-sum, which is its own inverse.
    """
    d = ga.dim
    out = [0] * d
    for g in range(d):
        acc = 0
        for t in range(d):
            if t & g == g:
                acc ^= coeffs[t]
        out[g] = acc
    return tuple(out)


class _InternalSieveEngine:
    """Berkowitz determinant of the marker-weighted Laplacian, trial-batched.

    The coefficient ring has zero divisors, so elimination is off the table;
    the characteristic-polynomial recurrence uses only ring additions and
    multiplications. All per-entry ring products across the trial batch are
    fused into single gather/table-lookup/reduceat passes.
    """

    def __init__(self, g: Digraph, root: int, k: int, field: BinaryField):
        self.g = g
        self.root = root
        self.k = k
        self.f = field
        self.d = 1 << k
        self.len = (k + 1) * self.d
        self.verts = [u for u in range(g.n) if u != root]
        self.pos = {u: i for i, u in enumerate(self.verts)}
        self.arcs = sorted(g.arcs)
        self.ia, self.ib, self.offsets = _pair_plan(k)

    def _mul(self, a: np.ndarray, b: np.ndarray) -> np.ndarray:
        va = a[..., self.ia]
        vb = b[..., self.ib]
        prod = self.f.np_exp[self.f.np_log[va] + self.f.np_log[vb]]
        prod = np.where((va == 0) | (vb == 0), 0, prod)
        return np.bitwise_xor.reduceat(prod, self.offsets, axis=-1)

    def build_matrices(self, zeta: np.ndarray, rmul: np.ndarray, gvec: np.ndarray) -> np.ndarray:
        """Punctured Laplacians for a batch of draws, shape [nn, nn, B, len].

        Arc weight: zeta at the constant slot, and at the t-slot the tail's
        marker pattern (nonempty subsets of the tail's group element) scaled
        by zeta*rmul. The per-arc rmul factor keeps sibling arcs from
        collapsing pairwise in characteristic 2: a vertex with c children
        contributes 1 + t*(sum of c independent scalars)*marker, nonzero for
        any c >= 1, where a bare (1 + t*marker)^c would vanish for even c.
        """
        f = self.f
        d = self.d
        nb = zeta.shape[0]
        tsub = np.arange(d, dtype=np.int64)
        gamma = (tsub[None, None, :] & ~gvec[:, :, None]) == 0
        gamma &= tsub[None, None, :] != 0
        w1 = f.nmul(zeta, rmul)
        nn = len(self.verts)
        mats = np.zeros((nn, nn, nb, self.len), dtype=np.int32)
        for ai, (u, v) in enumerate(self.arcs):
            x1 = np.where(gamma[:, u, :], w1[:, ai, None], 0)
            if v != self.root:
                iv = self.pos[v]
                mats[iv, iv, :, 0] ^= zeta[:, ai]
                mats[iv, iv, :, d : 2 * d] ^= x1
                if u != self.root:
                    iu = self.pos[u]
                    mats[iu, iv, :, 0] ^= zeta[:, ai]
                    mats[iu, iv, :, d : 2 * d] ^= x1
        return mats

    def det_batch(self, mats: np.ndarray) -> np.ndarray:
        """Characteristic-polynomial determinants; negation-free in char 2."""
        nn = mats.shape[0]
        nb = mats.shape[2]
        one = np.zeros((nb, self.len), dtype=np.int32)
        one[:, 0] = 1
        p = one[None]
        for r in range(1, nn + 1):
            t = [one, mats[r - 1, r - 1]]
            if r >= 2:
                sub = mats[: r - 1, : r - 1]
                rrow = mats[r - 1, : r - 1]
                u = mats[: r - 1, r - 1]
                for j in range(r - 1):
                    t.append(np.bitwise_xor.reduce(self._mul(rrow, u), axis=0))
                    if j < r - 2:
                        u = np.bitwise_xor.reduce(self._mul(sub, u[None]), axis=1)
            pn = np.zeros((r + 1, nb, self.len), dtype=np.int32)
            pn[: p.shape[0]] = p
            for j in range(1, r + 1):
                # Toeplitz matrix is (r+1) x r: conv outputs past index r drop.
                lim = min(p.shape[0], r + 1 - j)
                pn[j : j + lim] ^= self._mul(t[j][None], p[:lim])
            p = pn
        return p[nn]

    def run_chunk(self, zeta: np.ndarray, rmul: np.ndarray, gvec: np.ndarray) -> np.ndarray:
        dets = self.det_batch(self.build_matrices(zeta, rmul, gvec))
        slice_k = dets[:, self.k * self.d : (self.k + 1) * self.d]
        return np.any(slice_k != 0, axis=1)


def _draw_internal_chunk(
    g: Digraph, k: int, field: BinaryField, seed: int, root: int, start: int, count: int
) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    m = g.m
    zeta = np.empty((count, m), dtype=np.int32)
    rmul = np.empty((count, m), dtype=np.int32)
    gvec = np.empty((count, g.n), dtype=np.int64)
    for i in range(count):
        rng = np.random.default_rng(derive_seed("internal-sieve", seed, root, start + i))
        zeta[i] = rng.integers(1, field.q, size=m, dtype=np.int32)
        rmul[i] = rng.integers(1, field.q, size=m, dtype=np.int32)
        gvec[i] = rng.integers(0, 1 << k, size=g.n, dtype=np.int64)
    return zeta, rmul, gvec


def _scalar_internal_chunk(
    g: Digraph,
    root: int,
    k: int,
    field: BinaryField,
    zeta: np.ndarray,
    rmul: np.ndarray,
    gvec: np.ndarray,
) -> np.ndarray:
    """Reference route: explicit ring elements and the generic det kernel."""
    ga = GroupAlgebra(field, k)
    ring = TruncatedPolyRing(ga, cap=k)
    arcs = sorted(g.arcs)
    hits = np.zeros(zeta.shape[0], dtype=bool)
    for b in range(zeta.shape[0]):
        weights = {}
        for ai, (u, v) in enumerate(arcs):
            z = int(zeta[b, ai])
            w1 = field.mul(z, int(rmul[b, ai]))
            marker = ga.add(ga.unit(int(gvec[b, u])), ga.one)
            poly = list(ring.const(ga.scale(z, ga.one)))
            poly[1] = ga.scale(w1, marker)
            weights[(u, v)] = tuple(poly)
        lap = build_laplacian(g, weights, ring)
        det = det_division_free(puncture(lap, root))
        hits[b] = not ga.is_zero(det[k])
    return hits


def internal_sieve_success_floor(n: int, k: int) -> float:
    """Per-trial detection probability floor on a qualifying instance.

    k uniform group elements are linearly independent with probability
    prod(1 - 2^-j); the surviving coefficient is a nonzero polynomial of
    degree under 2n in the scalar draws, losing at most 2n/q more.
    """
    indep = 1.0
    for j in range(1, k + 1):
        indep *= 1.0 - 2.0**-j
    q = 1 << (2 * max(1, (n - 1).bit_length()))
    return indep * max(0.0, 1.0 - 2.0 * n / q)


def detect_k_internal(g: Digraph, k: int, cfg: InternalSieveConfig | None = None) -> DetectionReport:
    """One-sided test for a spanning out-branching with >= k internal vertices.

    Roots without any spanning out-branching are discarded by an exact
    integer count; k = 0 is answered exactly. Otherwise each surviving root
    runs `cfg.trials` randomized determinant evaluations; any nonzero
    degree-k slice certifies YES. Reports are identical for any thread
    count: per-root trial consumption depends only on (seed, root, trial).
    """
    cfg = cfg or InternalSieveConfig()
    n = g.n
    if n < 1:
        raise ValueError("graph is empty")
    if not 0 <= k <= n - 1:
        raise ValueError(f"k must be in 0..{n - 1}, got {k}")
    if k > GROUP_RANK_LIMIT:
        raise GuardError(f"k={k} exceeds the rank-{GROUP_RANK_LIMIT} marker-algebra guard")
    roots = [r for r in range(n) if count_out_branchings(g, r) > 0]
    if not roots:
        return DetectionReport(
            verdict=False, trials_run=0, trials_max=0, seed=cfg.seed, failure_bound=0.0,
            detail={"reason": "no spanning out-branching from any root"},
        )
    if k == 0:
        return DetectionReport(
            verdict=True, trials_run=0, trials_max=0, seed=cfg.seed, failure_bound=0.0,
            detail={"reason": "spanning out-branchings exist and k = 0", "roots": roots},
        )
    field = make_binary_field(n)

    def run_root(root: int) -> tuple[int, bool]:
        engine = _InternalSieveEngine(g, root, k, field)
        done = 0
        while done < cfg.trials:
            b = min(cfg.chunk, cfg.trials - done)
            zeta, rmul, gvec = _draw_internal_chunk(g, k, field, cfg.seed, root, done, b)
            if cfg.engine == "batched":
                hits = engine.run_chunk(zeta, rmul, gvec)
            else:
                hits = _scalar_internal_chunk(g, root, k, field, zeta, rmul, gvec)
            if hits.any():
                return done + int(np.argmax(hits)) + 1, True
            done += b
        return done, False

    results: dict[int, tuple[int, bool]] = {}
    if cfg.threads > 1 and len(roots) > 1:
        with ThreadPoolExecutor(max_workers=cfg.threads) as pool:
            for root, res in zip(roots, pool.map(run_root, roots)):
                results[root] = res
    else:
        for root in roots:
            results[root] = run_root(root)
            if results[root][1]:
                break

    # Truncate to the prefix a sequential scan would have visited, so the
    # report does not depend on the thread count.
    visited: list[int] = []
    for root in roots:
        if root not in results:
            break
        visited.append(root)
        if results[root][1]:
            break
    trials_run = sum(results[r][0] for r in visited)
    hit = any(results[r][1] for r in visited)
    floor = internal_sieve_success_floor(n, k)
    return DetectionReport(
        verdict=hit,
        trials_run=trials_run,
        trials_max=cfg.trials * len(roots),
        seed=cfg.seed,
        failure_bound=0.0 if hit else (1.0 - floor) ** cfg.trials,
        detail={
            "engine": cfg.engine,
            "roots": visited,
            "per_root": {str(r): {"trials": results[r][0], "hit": results[r][1]} for r in visited},
        },
    )


# ---------------------------------------------------------------------------
# few-distinct-variables detection for homogeneous polynomials


@runtime_checkable
class PolynomialEvaluator(Protocol):
    """Black-box homogeneous polynomial of degree n in n variables.

    Declared properties the solver relies on: homogeneity of degree n and
    nonnegative integer coefficients (so reductions mod a prime cannot
    cancel across monomials). evaluate() must be deterministic per
    (assignment, p).
    """

    n: int

    def evaluate(self, assignment: Sequence[int], p: int) -> int: ...


class MonomialListPolynomial:
    """Explicit sum of monomials; the test harness's evaluator of choice."""

    def __init__(self, n: int, monomials):
        self.n = n
        cleaned = []
        for coeff, exps in monomials:
            exps = tuple(int(e) for e in exps)
            if len(exps) != n:
                raise ValueError("exponent vector length mismatch")
            if any(e < 0 for e in exps):
                raise ValueError("negative exponent")
            if coeff < 0:
                raise ValueError("coefficients must be nonnegative")
            if coeff == 0:
                continue
            if sum(exps) != n:
                raise ValueError("polynomial must be homogeneous of degree n")
            cleaned.append((int(coeff), exps))
        self.monomials = tuple(cleaned)

    def evaluate(self, assignment: Sequence[int], p: int) -> int:
        total = 0
        for coeff, exps in self.monomials:
            term = coeff % p
            for y, e in zip(assignment, exps):
                if e:
                    term = term * pow(y % p, e, p) % p
            total = (total + term) % p
        return total

    def evaluate_batch(self, ys: np.ndarray, p: int) -> np.ndarray:
        out = np.zeros(ys.shape[0], dtype=np.int64)
        for coeff, exps in self.monomials:
            term = np.full(ys.shape[0], coeff % p, dtype=np.int64)
            for i, e in enumerate(exps):
                if e:
                    term = term * _batched_modpow(ys[:, i] % p, e, p) % p
            out = (out + term) % p
        return out


def _batched_modpow(base: np.ndarray, e: int, p: int) -> np.ndarray:
    out = np.ones_like(base)
    acc = base % p
    while e:
        if e & 1:
            out = out * acc % p
        acc = acc * acc % p
        e >>= 1
    return out


def batched_modp_det(mats: np.ndarray, p: int) -> np.ndarray:
    """Determinants of an int64 stack [B, d, d] mod prime p. Consumes mats.

    Entries must already lie in [0, p). Matrices that run out of pivots get
    determinant 0 (a zero pivot zeroes the running product for good).
    """
    nmats, d, _ = mats.shape
    det = np.ones(nmats, dtype=np.int64)
    if d == 0:
        return det
    bidx = np.arange(nmats)
    for j in range(d):
        pidx = j + np.argmax(mats[:, j:, j] != 0, axis=1)
        swapped = pidx != j
        rowj = mats[bidx, j, :].copy()
        mats[bidx, j, :] = mats[bidx, pidx, :]
        mats[bidx, pidx, :] = rowj
        det = np.where(swapped, (p - det) % p, det)
        piv = mats[:, j, j]
        det = det * piv % p
        if j + 1 < d:
            inv = _batched_modpow(piv, p - 2, p)  # zero pivot -> zero factor
            fac = mats[:, j + 1 :, j] * inv[:, None] % p
            mats[:, j + 1 :, j + 1 :] = (
                mats[:, j + 1 :, j + 1 :] - fac[:, :, None] * mats[:, j, j + 1 :][:, None, :]
            ) % p
    return det


class BranchingLeafPolynomial:
    """The branching polynomial of (g, root): one monomial per spanning
    out-branching, with each vertex's variable raised to its child count and
    the root's bumped by one. Homogeneous of degree n with coefficients that
    count branchings sharing a child-count profile, hence nonnegative. The
    number of distinct variables in a monomial is the branching's internal
    vertex count."""

    def __init__(self, g: Digraph, root: int):
        if not 0 <= root < g.n:
            raise ValueError("root out of range")
        self.g = g
        self.root = root
        self.n = g.n
        self._verts = [u for u in range(g.n) if u != root]
        self._pos = {u: i for i, u in enumerate(self._verts)}

    def evaluate(self, assignment: Sequence[int], p: int) -> int:
        field = PrimeField(p)
        weights = {(u, v): assignment[u] % p for u, v in self.g.arcs}
        lap = build_laplacian(self.g, weights, field)
        det = det_gauss(puncture(lap, self.root))
        return det * (assignment[self.root] % p) % p

    def evaluate_batch(self, ys: np.ndarray, p: int) -> np.ndarray:
        g = self.g
        nn = len(self._verts)
        nb = ys.shape[0]
        ys = ys % p
        mats = np.zeros((nb, nn, nn), dtype=np.int64)
        for u, v in sorted(g.arcs):
            if v != self.root:
                iv = self._pos[v]
                mats[:, iv, iv] += ys[:, u]
                if u != self.root:
                    mats[:, self._pos[u], iv] = (p - ys[:, u]) % p
        np.mod(mats, p, out=mats)
        dets = batched_modp_det(mats, p)
        return dets * ys[:, self.root] % p


@dataclass(frozen=True)
class DvConfig:
    """Knobs for the few-distinct-variables solver.

    budget defaults to 4^k (the worst case with as many repeated-variable
    slots as the parameter allows); a caller who can estimate s, the number
    of variables of degree > 1 in a qualifying monomial, can pass it to skew
    the coin toward the typically-smaller side. skew overrides both.
    """

    budget: int | None = None
    skew: float | None = None
    s_estimate: int | None = None
    seed: int = 0
    threads: int = 1

    def __post_init__(self):
        if self.budget is not None and self.budget < 1:
            raise ValueError("budget must be positive")
        if self.skew is not None and not 0.0 < self.skew < 1.0:
            raise ValueError("skew must be strictly between 0 and 1")
        if self.s_estimate is not None and self.s_estimate < 0:
            raise ValueError("s_estimate must be nonnegative")


def _dv_params(k: int, cfg: DvConfig) -> tuple[int, float, int]:
    budget = cfg.budget if cfg.budget is not None else 4**k
    s_eff = cfg.s_estimate if cfg.s_estimate is not None else k
    if cfg.skew is not None:
        skew = cfg.skew
    elif cfg.s_estimate is not None and k + cfg.s_estimate > 0:
        skew = k / (k + cfg.s_estimate)
    else:
        skew = 0.5
    return budget, skew, s_eff


def dv_trial(P: PolynomialEvaluator, assignment: Sequence[bool], p: int) -> UnivariatePolyPF:
    """One substituted-and-interpolated univariate image of P.

    assignment[i] True routes index i to the probe side (variable sampled at
    tau, companion weight at 1); False routes it the other way (variable at
    1, companion weight at tau). The result is the dehomogenized polynomial
    of degree <= 2n: P at the routed inputs times tau^(count of False).
    """
    n = P.n
    if p <= 2 * n + 1:
        raise ValueError(f"prime {p} too small: need p > 2n+1 = {2 * n + 1}")
    bits = [bool(b) for b in assignment]
    if len(bits) != n:
        raise ValueError("assignment length mismatch")
    low_count = bits.count(False)
    taus = list(range(2 * n + 1))
    if hasattr(P, "evaluate_batch"):
        mask = np.array(bits, dtype=bool)
        ys = np.where(mask[None, :], np.array(taus, dtype=np.int64)[:, None], 1)
        vals = P.evaluate_batch(ys, p)
        raw = [int(v) for v in vals]
    else:
        raw = [P.evaluate([t if b else 1 for b in bits], p) for t in taus]
    points = [(t, v * pow(t, low_count, p) % p) for t, v in zip(taus, raw)]
    return UnivariatePolyPF(p=p, coeffs=interpolate_univariate(points, 2 * n, p))


def window_hits(poly: UnivariatePolyPF, n: int, k: int) -> list[int]:
    """Coefficient indices outside the center band [n-k+1, n+k-1]."""
    return [i for i, c in enumerate(poly.coeffs) if c != 0 and (i <= n - k or i >= n + k)]


def solve_nk_dv(P: PolynomialEvaluator, k: int, cfg: DvConfig | None = None) -> DetectionReport:
    """Does P (homogeneous degree n, nonnegative coefficients) have a
    monomial with at most n-k distinct variables?

    Each trial flips one coin per index and interpolates the substituted
    univariate image over two random 31-bit primes; any coefficient outside
    the center band proves a qualifying monomial (YES is certain because
    nonnegative coefficients cannot cancel). A qualifying monomial lands
    outside the band with probability >= skew^k*(1-skew)^s per trial, so NO
    answers carry the bound (1 - p_hit)^budget.
    """
    cfg = cfg or DvConfig()
    n = P.n
    if not 1 <= k <= n:
        raise ValueError(f"k must be in 1..{n}, got {k}")
    budget, skew, s_eff = _dv_params(k, cfg)
    prime_rng = make_rng("dv-primes", cfg.seed)
    p1 = random_prime_31(prime_rng)
    p2 = random_prime_31(prime_rng)
    while p2 == p1:
        p2 = random_prime_31(prime_rng)

    hit_detail = None
    trials_run = 0
    for t in range(budget):
        rng = make_rng("dv-assignment", cfg.seed, t)
        bits = [rng.random() < skew for _ in range(n)]
        trials_run += 1
        for p in (p1, p2):
            hits = window_hits(dv_trial(P, bits, p), n, k)
            if hits:
                hit_detail = {"trial": t, "prime": p, "coefficient_indices": hits}
                break
        if hit_detail is not None:
            break

    term_a = skew**k * (1.0 - skew) ** s_eff
    term_b = (1.0 - skew) ** k * skew**s_eff
    per_trial = max(term_a, term_b)
    return DetectionReport(
        verdict=hit_detail is not None,
        trials_run=trials_run,
        trials_max=budget,
        seed=cfg.seed,
        failure_bound=0.0 if hit_detail else (1.0 - per_trial) ** budget,
        detail={
            "primes": [p1, p2],
            "skew": skew,
            "evaluations": trials_run * 2 * (2 * n + 1),
            **({"hit": hit_detail} if hit_detail else {}),
        },
    )


def detect_k_leaf(g: Digraph, k: int, cfg: DvConfig | None = None) -> DetectionReport:
    """One-sided test for a spanning out-branching with >= k leaves.

    Wraps each viable root's branching polynomial (n-distinct-variable count
    = internal count, so >= k leaves means <= n-k distinct variables) and
    asks solve_nk_dv. YES answers are certain; the NO bound is inherited
    from the per-root solver.
    """
    cfg = cfg or DvConfig()
    n = g.n
    if n < 2:
        raise ValueError("need at least two vertices")
    if not 1 <= k <= n:
        raise ValueError(f"k must be in 1..{n}, got {k}")
    roots = [r for r in range(n) if count_out_branchings(g, r) > 0]
    if not roots:
        return DetectionReport(
            verdict=False, trials_run=0, trials_max=0, seed=cfg.seed, failure_bound=0.0,
            detail={"reason": "no spanning out-branching from any root"},
        )

    def run_root(root: int) -> DetectionReport:
        sub = replace(cfg, seed=derive_seed("leaf-root", cfg.seed, root), threads=1)
        return solve_nk_dv(BranchingLeafPolynomial(g, root), k, sub)

    results: dict[int, DetectionReport] = {}
    if cfg.threads > 1 and len(roots) > 1:
        with ThreadPoolExecutor(max_workers=cfg.threads) as pool:
            for root, rep in zip(roots, pool.map(run_root, roots)):
                results[root] = rep
    else:
        for root in roots:
            results[root] = run_root(root)
            if results[root].verdict:
                break

    visited: list[int] = []
    for root in roots:
        if root not in results:
            break
        visited.append(root)
        if results[root].verdict:
            break
    hit = any(results[r].verdict for r in visited)
    bounds = [results[r].failure_bound for r in visited]
    return DetectionReport(
        verdict=hit,
        trials_run=sum(results[r].trials_run for r in visited),
        trials_max=sum(results[r].trials_max for r in visited),
        seed=cfg.seed,
        failure_bound=0.0 if hit else max(bounds),
        detail={
            "roots": visited,
            "per_root": {
                str(r): {"verdict": results[r].verdict, "trials": results[r].trials_run}
                for r in visited
            },
        },
    )

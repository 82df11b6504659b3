"""Random-graph experiments against the predicted cokernel distributions.

Seeding is a documented splitmix64 derivation from (seed, sample
index), edge draws compare a uniform 64-bit word against the exact
rational edge probability, and tally merging is order-independent, so
a report is a pure function of its config no matter how many workers
ran it.
"""

from __future__ import annotations

import json
import multiprocessing
from dataclasses import dataclass
from fractions import Fraction
from math import gcd

import mpmath

from .critgrp import AbelianGroup, cokernel, sylow
from .errors import GuardError
from .exactla import IntegerMatrix
from .graphs import Multigraph, is_connected
from .numtheory import factorize, is_prime

_MASK64 = (1 << 64) - 1
_GOLDEN = 0x9E3779B97F4A7C15
_EXPERIMENT_GUARD = 500_000_000  # cap on n^3 * samples
_PAIRING_GROUP_GUARD = 512
_PAIRING_TABLE_GUARD = 1 << 20
_AUT_BRUTE_GUARD = 1 << 20
_MACW_BRUTE_GUARD = 1 << 20


def _mix64(z: int) -> int:
    z = (z + _GOLDEN) & _MASK64
    z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & _MASK64
    z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & _MASK64
    return z ^ (z >> 31)


class SplitMix64:
    """Tiny deterministic 64-bit stream used for edge draws."""

    __slots__ = ("state",)

    def __init__(self, state: int):
        self.state = state & _MASK64

    def next_word(self) -> int:
        self.state = (self.state + _GOLDEN) & _MASK64
        return _mix64(self.state)


def _sample_stream(seed: int, index: int) -> SplitMix64:
    """Per-sample stream: state = mix(seed) XOR mix(index + 1).

    Workers share nothing; sample i is reproducible in isolation.
    """
    return SplitMix64(_mix64(seed & _MASK64) ^ _mix64((index + 1) & _MASK64))


@dataclass(frozen=True)
class ExperimentConfig:
    n: int
    q: Fraction
    samples: int
    p: int
    seed: int

    def __post_init__(self):
        object.__setattr__(self, "q", Fraction(self.q))
        if not 0 < self.q < 1:
            raise ValueError("edge probability must satisfy 0 < q < 1")
        if self.samples < 1:
            raise ValueError("need at least one sample")
        if not is_prime(self.p):
            raise ValueError(f"{self.p} is not prime")
        if self.n < 1:
            raise ValueError("need at least one vertex")


def sample_er(config: ExperimentConfig, index: int = 0) -> Multigraph:
    """One Erdos-Renyi draw G(n, q), deterministic in (seed, index).

    Each potential edge consumes one 64-bit word w and is present iff
    w * q.denominator < q.numerator * 2^64 (exact, no float bias).
    """
    stream = _sample_stream(config.seed, index)
    n = config.n
    num, den = config.q.numerator, config.q.denominator
    threshold = num << 64
    mult = [[0] * n for _ in range(n)]
    for i in range(n):
        for j in range(i + 1, n):
            if stream.next_word() * den < threshold:
                mult[i][j] = mult[j][i] = 1
    return Multigraph([f"v{i+1}" for i in range(n)], mult)


def _reduced_laplacian_rows(G: Multigraph):
    n = G.n
    rows = []
    for i in range(n - 1):
        deg = sum(G.mult[i])
        rows.append([(deg if i == j else 0) - G.mult[i][j] for j in range(n - 1)])
    return rows


def _sample_stats(args):
    """(connected, sylow rendering, cyclic, odd order) for one sample."""
    config, index = args
    G = sample_er(config, index)
    if not is_connected(G):
        return (False, "", False, False)
    if G.n == 1:
        group = AbelianGroup()
    else:
        group = cokernel(IntegerMatrix(_reduced_laplacian_rows(G))).torsion
    syl = sylow(group, config.p)
    return (True, syl.render(), group.is_cyclic(), group.order % 2 == 1)


@dataclass(frozen=True)
class ExperimentReport:
    config: ExperimentConfig
    connected: int
    disconnected: int
    cyclic: int
    odd_order: int
    sylow_tallies: dict

    def frequencies(self) -> dict:
        """Headline frequencies conditioned on connectivity, plus raw."""
        out = {}
        for name, denom in (("connected", self.connected), ("raw", self.config.samples)):
            if denom == 0:
                denom = 1
            out[name] = {
                "cyclic": self.cyclic / denom,
                "odd_order": self.odd_order / denom,
                "sylow": {k: v / denom for k, v in sorted(self.sylow_tallies.items())},
            }
        return out

    def to_json(self) -> str:
        """Deterministic serialization; frequencies as 6-digit strings."""
        freqs = self.frequencies()

        def fmt(x):
            return f"{x:.6f}"

        doc = {
            "config": {
                "n": self.config.n,
                "q": str(self.config.q),
                "samples": self.config.samples,
                "p": self.config.p,
                "seed": self.config.seed,
            },
            "connected": self.connected,
            "disconnected": self.disconnected,
            "cyclic": self.cyclic,
            "odd_order": self.odd_order,
            "sylow_tallies": {k: v for k, v in sorted(self.sylow_tallies.items())},
            "frequencies": {
                name: {
                    "cyclic": fmt(block["cyclic"]),
                    "odd_order": fmt(block["odd_order"]),
                    "sylow": {k: fmt(v) for k, v in block["sylow"].items()},
                }
                for name, block in freqs.items()
            },
            "wood_probability": {
                k: self._wood_value(k) for k in sorted(self.sylow_tallies)
            },
        }
        return json.dumps(doc, ensure_ascii=False, indent=2)

    def _wood_value(self, rendering: str):
        """Predicted limit frequency, or None past the brute-force guards."""
        try:
            value = wood_probability(_group_from_rendering(rendering), self.config.p)
        except GuardError:
            return None
        return f"{value:.6f}"


def _group_from_rendering(text: str) -> AbelianGroup:
    if text == "trivial":
        return AbelianGroup()
    factors = [int(part.strip()[2:]) for part in text.split("⊕")]
    return AbelianGroup(factors)


def run_experiment(config: ExperimentConfig, jobs: int = 1) -> ExperimentReport:
    """Sample, compute Sylow tallies, and assemble the report.

    Deterministic for a fixed config regardless of the worker count:
    per-sample streams are independent and tallies commute.
    """
    if config.n**3 * config.samples > _EXPERIMENT_GUARD:
        raise GuardError("experiment size exceeds the runtime guard")
    work = [(config, i) for i in range(config.samples)]
    if jobs > 1:
        with multiprocessing.Pool(jobs) as pool:
            results = pool.map(_sample_stats, work, chunksize=64)
    else:
        results = [_sample_stats(w) for w in work]
    connected = disconnected = cyclic = odd = 0
    tallies: dict[str, int] = {}
    for ok, rendering, is_cyc, is_odd in results:
        if not ok:
            disconnected += 1
            continue
        connected += 1
        cyclic += is_cyc
        odd += is_odd
        tallies[rendering] = tallies.get(rendering, 0) + 1
    return ExperimentReport(
        config=config,
        connected=connected,
        disconnected=disconnected,
        cyclic=cyclic,
        odd_order=odd,
        sylow_tallies=tallies,
    )


# ---------------------------------------------------------------------------
# the predicted distribution


def _p_group_prime(H: AbelianGroup) -> int:
    """The prime of a p-group; 0 for the trivial group."""
    if H.is_trivial():
        return 0
    primes = set()
    for f in H.factors:
        primes.update(factorize(f))
    if len(primes) != 1:
        raise ValueError(f"{H} is not a p-group")
    return primes.pop()


def count_pairings(H: AbelianGroup) -> int:
    """Number of symmetric bilinear perfect pairings H x H -> Q/Z.

    Brute force over symmetric Gram tables: the entry for generators of
    orders q_i, q_j ranges over (1/gcd(q_i, q_j)) Z/Z, and perfectness
    is checked as injectivity of the induced map into the dual.
    """
    if H.is_trivial():
        return 1
    p = _p_group_prime(H)
    if p == 0 or H.order > _PAIRING_GROUP_GUARD:
        raise GuardError(f"pairing count needs a p-group of order <= {_PAIRING_GROUP_GUARD}")
    qs = list(H.factors)
    m = len(qs)
    big = qs[-1]
    slots = [(i, j) for i in range(m) for j in range(i, m)]
    table_count = 1
    for i, j in slots:
        table_count *= min(qs[i], qs[j])
    if table_count > _PAIRING_TABLE_GUARD:
        raise GuardError("Gram table space exceeds the guard")

    elements = _all_elements(qs)
    count = 0
    for combo in _product_ranges([min(qs[i], qs[j]) for i, j in slots]):
        # gram[i][j] stored as an integer mod `big`, value g/big
        gram = [[0] * m for _ in range(m)]
        for (i, j), g in zip(slots, combo):
            scaled = g * (big // min(qs[i], qs[j]))
            gram[i][j] = scaled
            gram[j][i] = scaled
        perfect = True
        for x in elements:
            if all(sum(x[i] * gram[i][j] for i in range(m)) % big == 0 for j in range(m)):
                if any(x):
                    perfect = False
                    break
        if perfect:
            count += 1
    return count


def _all_elements(qs):
    out = [()]
    for q in qs:
        out = [t + (v,) for t in out for v in range(q)]
    return out


def _product_ranges(sizes):
    out = [()]
    for s in sizes:
        out = [t + (v,) for t in out for v in range(s)]
    return out


def aut_order(H: AbelianGroup, brute: bool = False) -> int:
    """|Aut(H)| for a finite abelian group.

    Default: the Hillar-Rhea closed formula per Sylow subgroup.  With
    brute=True, counts bijective endomorphisms directly (guarded).
    """
    if brute:
        return _aut_order_brute(H)
    primes = set()
    for f in H.factors:
        primes.update(factorize(f))
    total = 1
    for p in sorted(primes):
        exps = sorted(
            e for f in H.factors for q, e in factorize(f).items() if q == p
        )
        total *= _aut_order_p(p, exps)
    return total


def _aut_order_p(p: int, exps) -> int:
    """Hillar-Rhea: |Aut| of the p-group with ascending type exps."""
    m = len(exps)
    d = [max(l for l in range(m) if exps[l] == exps[k]) + 1 for k in range(m)]
    c = [min(l for l in range(m) if exps[l] == exps[k]) + 1 for k in range(m)]
    total = 1
    for k in range(m):
        total *= p ** d[k] - p**k
    for k in range(m):
        total *= (p ** exps[k]) ** (m - d[k])
    for k in range(m):
        total *= (p ** (exps[k] - 1)) ** (m - c[k] + 1)
    return total


def _aut_order_brute(H: AbelianGroup) -> int:
    if H.is_trivial():
        return 1
    if H.order > _PAIRING_GROUP_GUARD:
        raise GuardError(f"brute-force Aut count needs order <= {_PAIRING_GROUP_GUARD}")
    qs = list(H.factors)
    m = len(qs)
    endo_count = 1
    for i in range(m):
        for j in range(m):
            endo_count *= gcd(qs[i], qs[j])
    if endo_count > _AUT_BRUTE_GUARD:
        raise GuardError("endomorphism space exceeds the brute-force guard")
    elements = _all_elements(qs)
    # an endomorphism sends generator i to c_i; image coordinate j must
    # be killed by q_i, i.e. c_ij is a multiple of q_j / gcd(q_i, q_j)
    choices = []
    for i in range(m):
        opts = []
        for j in range(m):
            step = qs[j] // gcd(qs[i], qs[j])
            opts.append([v for v in range(qs[j]) if v % step == 0])
        choices.append(opts)

    def rows(i):
        out = [()]
        for j in range(m):
            out = [t + (v,) for t in out for v in choices[i][j]]
        return out

    count = 0
    all_rows = [rows(i) for i in range(m)]

    def rec(i, matrix):
        nonlocal count
        if i == m:
            images = set()
            for x in elements:
                img = tuple(
                    sum(x[k] * matrix[k][j] for k in range(m)) % qs[j] for j in range(m)
                )
                images.add(img)
            if len(images) == len(elements):
                count += 1
            return
        for row in all_rows[i]:
            rec(i + 1, matrix + [row])

    rec(0, [])
    return count


def wood_probability(H: AbelianGroup, p: int, tol: float = 1e-12) -> float:
    """Limiting probability that the Sylow p-part of K(G) is H.

    count_pairings(H) / (|H| |Aut(H)|) times prod_{k>=0}(1 - p^(-2k-1)),
    the product truncated once factors are within tol of 1.  Cyclic
    groups use the closed pairing count phi(q) (the forms a*x*y/q with
    a a unit); other groups go through the guarded brute force.
    """
    if not is_prime(p):
        raise ValueError(f"{p} is not prime")
    if not H.is_trivial() and _p_group_prime(H) != p:
        raise ValueError(f"{H} is not a {p}-group")
    if H.is_trivial():
        pairings = 1
    elif H.is_cyclic():
        q = H.factors[0]
        pairings = q - q // p
    else:
        pairings = count_pairings(H)
    lead = pairings / (H.order * aut_order(H))
    prod = 1.0
    k = 0
    while True:
        term = float(p) ** (-2 * k - 1)
        if term < tol:
            break
        prod *= 1.0 - term
        k += 1
    return lead * prod


def macwilliams_count(m: int, p: int) -> int:
    """Number of invertible symmetric m x m matrices over Z/pZ.

    Exact by the closed product formula p^(m(m+1)/2) *
    prod_{j=1..ceil(m/2)} (1 - p^(1-2j)).
    """
    if not is_prime(p):
        raise ValueError(f"{p} is not prime")
    if m < 0:
        raise ValueError("matrix size must be nonnegative")
    if m == 0:
        return 1
    value = Fraction(p) ** (m * (m + 1) // 2)
    for j in range(1, (m + 1) // 2 + 1):
        value *= 1 - Fraction(p) ** (1 - 2 * j)
    assert value.denominator == 1
    return int(value)


def macwilliams_brute(m: int, p: int) -> int:
    """Oracle: enumerate all symmetric matrices over Z/pZ and count invertible."""
    total = p ** (m * (m + 1) // 2)
    if total > _MACW_BRUTE_GUARD:
        raise GuardError("symmetric matrix space exceeds the brute-force guard")
    if m == 0:
        return 1
    slots = [(i, j) for i in range(m) for j in range(i, m)]
    count = 0
    for combo in _product_ranges([p] * len(slots)):
        mat = [[0] * m for _ in range(m)]
        for (i, j), v in zip(slots, combo):
            mat[i][j] = v
            mat[j][i] = v
        if _det_mod_p(mat, p) != 0:
            count += 1
    return count


def _det_mod_p(mat, p):
    n = len(mat)
    a = [row[:] for row in mat]
    det = 1
    for c in range(n):
        piv = next((i for i in range(c, n) if a[i][c] % p), None)
        if piv is None:
            return 0
        if piv != c:
            a[c], a[piv] = a[piv], a[c]
            det = -det
        inv = pow(a[c][c], -1, p)
        det = det * a[c][c] % p
        for i in range(c + 1, n):
            f = a[i][c] * inv % p
            if f:
                a[i] = [(x - f * y) % p for x, y in zip(a[i], a[c])]
    return det % p


def cyclic_constant(terms: int) -> float:
    """prod_{k=1..terms} zeta(2k+1)^(-1), the conjectured cyclic density."""
    if terms < 1:
        raise ValueError("need at least one factor")
    prod = mpmath.mpf(1)
    for k in range(1, terms + 1):
        prod /= mpmath.zeta(2 * k + 1)
    return float(prod)


def mean_spanning_trees(n: int) -> Fraction:
    """Expected spanning-tree count of a uniform graph on n labeled vertices."""
    if n < 2:
        raise ValueError("need at least two vertices")
    return Fraction(n ** (n - 2), 2 ** (n - 1))

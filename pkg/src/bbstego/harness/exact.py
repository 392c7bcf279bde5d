"""Exact output distributions of the encoders on small memoryless channels.

Each function takes the channel distribution as ``{doc: probability}`` and
returns ``{outcome: probability}``, where an outcome is the tuple of sent
documents or :data:`FAIL`.  Probabilities keep the numeric type of the input:
pass :class:`fractions.Fraction` values for exact rational results.
Procedures with unbounded loops are iterated until the undecided mass drops
below ``tol``; that mass is reported as ``truncated``.

These are written as Markov chains over explicit encoder states and share no
code with the encoders they are used to check.
"""

from __future__ import annotations

import itertools
from collections import defaultdict
from collections.abc import Mapping, Sequence
from dataclasses import dataclass, field

FAIL = "Fail"
MAX_CELLS = 10 ** 6


@dataclass
class ExactResult:
    dist: dict
    truncated: float = 0.0
    failure: object = 0  # probability that decoding does not return the message
    extra: dict = field(default_factory=dict)

    def prob(self, outcome) -> object:
        return self.dist.get(outcome, 0)


def _unit(dist: Mapping):
    z = next(iter(dist.values())) * 0
    return z, z + 1


def _check_size(dist, l):
    if len(dist) ** max(l, 1) > MAX_CELLS:
        raise ValueError(f"outcome space {len(dist)}**{l} exceeds {MAX_CELLS} cells")


def product_distribution(dist: Mapping, l: int) -> dict:
    """The channel itself: ``l`` independent draws."""
    _check_size(dist, l)
    out = {}
    for t in itertools.product(dist, repeat=l):
        p = _unit(dist)[1]
        for s in t:
            p = p * dist[s]
        out[t] = p
    return out


def _combine(prefix: dict, step: dict) -> dict:
    out = defaultdict(int)
    for t, p in prefix.items():
        for s, q in step.items():
            out[t + (s,)] += p * q
    return dict(out)


def stf_symbol_chain(dist: Mapping, w: int, tol: float = 1e-13, max_steps: int = 10_000):
    """One symbol of the stateful encoder with a random function.

    State is the set of documents already drawn for this symbol.  A new
    document is accepted when its fresh function value hits the target
    (probability ``2**-w``); a repeat is accepted on a fresh coin.  Returns
    ``(output distribution, error probability, truncated mass)``; an error is
    an acceptance on a repeat, whose stored function value already missed.
    """
    zero, one = _unit(dist)
    acc = one / 2 ** w
    rej = one - acc
    out = defaultdict(lambda: zero)
    err = zero
    states = {frozenset(): one}
    for _ in range(max_steps):
        nxt = defaultdict(lambda: zero)
        for seen, mass in states.items():
            for s, ps in dist.items():
                m = mass * ps
                out[s] += m * acc
                if s in seen:
                    err += m * acc
                    nxt[seen] += m * rej
                else:
                    nxt[seen | {s}] += m * rej
        states = nxt
        left = sum(states.values())
        if left < tol:
            return dict(out), err, float(left)
    raise RuntimeError("stateful chain did not converge")


def stf_output_distribution(dist: Mapping, w: int, message: Sequence[int], tol: float = 1e-13) -> ExactResult:
    """Stegotext distribution of the stateful encoder with a random function.

    Each symbol uses its own counter value, so function values never carry
    over between symbols and, on a memoryless channel, symbols are independent
    given the chain above.  The per-symbol law does not depend on the target
    symbol; the message enters only through the error event.
    """
    _check_size(dist, len(message))
    zero, one = _unit(dist)
    step, err, trunc = stf_symbol_chain(dist, w, tol)
    total = {(): one}
    ok = one
    for _ in message:
        total = _combine(total, step)
        ok = ok * (one - err)
    return ExactResult(total, truncated=len(message) * trunc, failure=one - ok, extra={"symbol_error": err})


def stl_output_distribution(dist: Mapping, w: int, k: int, message: Sequence[int]) -> ExactResult:
    """Stateless encoder with a random function sampled lazily along each draw path.

    State: symbol index, draws so far for this symbol, the function values
    fixed so far, the documents sent, and whether every sent document decodes
    correctly.  A document's function value is drawn on first evaluation and
    reused afterwards.
    """
    _check_size(dist, len(message))
    zero, one = _unit(dist)
    coin = one / 2 ** w
    q = 1 << w
    states = {((), (), True): one}  # (G items, sent, ok) at the start of a symbol
    for target in message:
        done = defaultdict(lambda: zero)
        active = states
        for j in range(1, k + 1):
            nxt = defaultdict(lambda: zero)
            for (g, sent, ok), mass in active.items():
                gd = dict(g)
                for s, ps in dist.items():
                    m = mass * ps
                    if s in gd:
                        branches = [(gd[s], g, m)]
                    else:
                        branches = [(v, tuple(sorted(g + ((s, v),))), m * coin) for v in range(q)]
                    for v, g2, mv in branches:
                        if v == target or j == k:
                            done[(g2, sent + (s,), ok and v == target)] += mv
                        else:
                            nxt[(g2, sent, ok)] += mv
            active = nxt
        states = done
    out = defaultdict(lambda: zero)
    fail = zero
    for (_, sent, ok), mass in states.items():
        out[sent] += mass
        if not ok:
            fail += mass
    return ExactResult(dict(out), failure=fail)


def _all_functions(support: Sequence, w: int):
    q = 1 << w
    n = len(support)
    if q ** n > 1 << 20:
        raise ValueError(f"{q}**{n} functions is too many to enumerate")
    for values in itertools.product(range(q), repeat=n):
        yield dict(zip(support, values))


def stl_output_distribution_by_function(dist: Mapping, w: int, k: int, message: Sequence[int]) -> ExactResult:
    """Same law as :func:`stl_output_distribution`, averaging over every function explicitly.

    For a fixed function ``G`` and target ``m`` with hit mass ``p``, a
    document ``s`` is sent with probability
    ``d(s) [G(s) = m] (1 - (1 - p)**(k-1)) / p + d(s) (1 - p)**(k-1)``.
    """
    _check_size(dist, len(message))
    zero, one = _unit(dist)
    support = sorted(dist)
    n_funcs = (1 << w) ** len(support)
    out = defaultdict(lambda: zero)
    fail = zero
    for G in _all_functions(support, w):
        per_symbol = []
        for target in message:
            p = sum((dist[s] for s in support if G[s] == target), zero)
            miss = (one - p) ** (k - 1)
            step = {}
            for s in support:
                hit = dist[s] * sum(((one - p) ** j for j in range(k - 1)), zero) if G[s] == target else zero
                step[s] = hit + dist[s] * miss
            per_symbol.append(step)
        joint = {(): one / n_funcs}
        for step in per_symbol:
            joint = _combine(joint, step)
        for t, pr in joint.items():
            out[t] += pr
            if any(G[s] != m for s, m in zip(t, message)):
                fail += pr
    return ExactResult(dict(out), failure=fail)


def se2_output_distribution(dist: Mapping, w: int, k: int, message: Sequence[int]) -> ExactResult:
    """Aborting hybrid with a fixed random function, averaged over every function.

    Aborts with :data:`FAIL` when a draw repeats any earlier answer in the
    message or when a symbol needs a ``k+1``-th draw.
    """
    _check_size(dist, len(message))
    zero, one = _unit(dist)
    support = sorted(dist)
    n_funcs = (1 << w) ** len(support)
    out = defaultdict(lambda: zero)
    for G in _all_functions(support, w):
        states = {(frozenset(), ()): one / n_funcs}
        for target in message:
            done = defaultdict(lambda: zero)
            active = states
            for j in range(1, k + 2):
                nxt = defaultdict(lambda: zero)
                for (Q, sent), mass in active.items():
                    if j == k + 1:
                        out[FAIL] += mass
                        continue
                    for s, ps in dist.items():
                        m = mass * ps
                        if s in Q:
                            out[FAIL] += m
                        elif G[s] == target:
                            done[(Q | {s}, sent + (s,))] += m
                        else:
                            nxt[(Q | {s}, sent)] += m
                active = nxt
            states = done
        for (_, sent), mass in states.items():
            out[sent] += mass
    return ExactResult(dict(out), failure=out.get(FAIL, zero))


def se3_output_distribution(dist: Mapping, w: int, k: int, message: Sequence[int]) -> ExactResult:
    """Aborting hybrid deciding acceptance by a fresh coin per draw."""
    _check_size(dist, len(message))
    zero, one = _unit(dist)
    acc = one / 2 ** w
    out = defaultdict(lambda: zero)
    states = {(frozenset(), ()): one}
    for _ in message:
        done = defaultdict(lambda: zero)
        active = states
        for j in range(1, k + 2):
            nxt = defaultdict(lambda: zero)
            for (Q, sent), mass in active.items():
                if j == k + 1:
                    out[FAIL] += mass
                    continue
                for s, ps in dist.items():
                    m = mass * ps
                    if s in Q:
                        out[FAIL] += m
                        continue
                    done[(Q | {s}, sent + (s,))] += m * acc
                    nxt[(Q | {s}, sent)] += m * (one - acc)
            active = nxt
        states = done
    for (_, sent), mass in states.items():
        out[sent] += mass
    return ExactResult(dict(out), failure=out.get(FAIL, zero))


def se4_output_distribution(dist: Mapping, w: int, message: Sequence[int], tol: float = 1e-13,
                            max_steps: int = 10_000) -> ExactResult:
    """Non-aborting hybrid: draw, keep on a fresh coin, repeat."""
    _check_size(dist, len(message))
    zero, one = _unit(dist)
    acc = one / 2 ** w
    step = defaultdict(lambda: zero)
    left = one
    for _ in range(max_steps):
        for s, ps in dist.items():
            step[s] += left * ps * acc
        left = left * (one - acc)
        if left < tol:
            break
    else:
        raise RuntimeError("non-aborting hybrid did not converge")
    total = {(): one}
    for _ in message:
        total = _combine(total, dict(step))
    return ExactResult(total, truncated=len(message) * float(left))


def total_variation(p: Mapping, q: Mapping):
    """Half the L1 distance; outcomes missing from one side count as zero."""
    keys = set(p) | set(q)
    if len(keys) > MAX_CELLS:
        raise ValueError("cell space too large for exact mode")
    zero = next(iter(p.values())) * 0 if p else 0
    return sum((abs(p.get(x, zero) - q.get(x, zero)) for x in keys), zero) / 2


def collision_probability(dist: Mapping):
    """``Pr[s_1 = s_2]`` under a distribution over pairs (Fail excluded)."""
    zero = next(iter(dist.values())) * 0
    return sum((p for t, p in dist.items() if t != FAIL and len(t) >= 2 and t[0] == t[1]), zero)

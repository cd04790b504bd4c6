"""Parameter sweeps, bound verification, and Monte Carlo playouts.

Simulation randomness uses one Philox counter block (four 64-bit words) per
trial, keyed by the seed: trial k always sees the same four uniforms no
matter how trials are partitioned across workers, so results are invariant
to the worker count and bit-reproducible for a fixed seed.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .instance import Instance
from .matrixgame import simplex_weights, solve_zero_sum
from .payoff import (
    SwitchConfig,
    base_matrix,
    entrywise_gap,
    feedback_matrix,
    lift_feedback,
    subgame_matrix,
    switch_matrix,
)
from .routes import RouteSet, enumerate_routes, prefix_classes
from .voi import cstar, cstar_global, expected_voi, theorem1_bound, voi_matrix, worst_case_voi

MODELS = ("base", "restricted", "feedback")


@dataclass(frozen=True)
class SweepRow:
    t_reveal: int
    c: float
    v_base: float
    v_switch: float
    v_fb: float
    expected_voi: float
    theorem1_bound: float
    delta: float
    cstar_global_route: float
    cstar_global_infoset: float


@dataclass(frozen=True)
class SimulationResult:
    trials: int
    seed: int
    mean_payoff: float
    payoff_stderr: float
    empirical_end_by_t: float
    model: str


@dataclass(frozen=True)
class BoundCheck:
    name: str
    passed: bool
    detail: str


@dataclass(frozen=True)
class BoundReport:
    checks: tuple[BoundCheck, ...]

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.checks)


def default_cost_grid(inst: Instance, rs: RouteSet | None = None, t: int = 1) -> np.ndarray:
    """0 to 1.2x the route-variant global threshold in 25 steps.

    The grid brackets the cost beyond which switching never pays.
    """
    rs = rs or enumerate_routes(inst.n)
    A = base_matrix(inst, rs)
    top = cstar_global(cstar(A, rs, t, "route"))
    return np.linspace(0.0, 1.2 * top, 25)


def sweep(
    inst: Instance,
    t_list=None,
    c_grid=None,
    convention: str = "total",
    feedback_mode: str = "mixed_subgame",
) -> list[SweepRow]:
    """Solve the three games over a (reveal time, switching cost) grid.

    Rows come out in lexicographic (t, c) order. The expected VOI column is
    evaluated at each cell's own switch-game equilibrium mix; the bound
    column uses the route-variant threshold at that reveal time.
    """
    rs = enumerate_routes(inst.n)
    if t_list is None:
        t_list = range(1, rs.n)
    t_list = sorted(set(int(t) for t in t_list))
    if not t_list:
        return []
    if c_grid is None:
        c_grid = default_cost_grid(inst, rs, t=t_list[0])
    c_grid = [float(c) for c in c_grid]
    if not c_grid:
        raise ValueError("empty cost grid")

    A = base_matrix(inst, rs)
    v_base = solve_zero_sum(A).value
    cg_route = {t: cstar_global(cstar(A, rs, t, "route")) for t in t_list}
    cg_inf = {t: cstar_global(cstar(A, rs, t, "infoset")) for t in t_list}

    rows = []
    for t in t_list:
        for c in sorted(c_grid):
            cfg = SwitchConfig(t, c, convention=convention, feedback_mode=feedback_mode)
            As = switch_matrix(A, rs, cfg)
            sw = solve_zero_sum(As)
            F = feedback_matrix(A, rs, cfg)
            _, pi = prefix_classes(rs, t)
            _, delta, _ = entrywise_gap(As, lift_feedback(F, pi))
            bar = worst_case_voi(voi_matrix(As, rs, t))
            rows.append(
                SweepRow(
                    t_reveal=t,
                    c=c,
                    v_base=v_base,
                    v_switch=sw.value,
                    v_fb=solve_zero_sum(F).value,
                    expected_voi=expected_voi(bar, sw.col_strategy),
                    theorem1_bound=theorem1_bound(cg_route[t], c),
                    delta=delta,
                    cstar_global_route=cg_route[t],
                    cstar_global_infoset=cg_inf[t],
                )
            )
    return rows


SWEEP_HEADER = (
    "t_reveal,c,v_base,v_switch,v_fb,expected_voi,"
    "theorem1_bound,delta,cstar_route,cstar_infoset"
)


def sweep_to_csv(rows: list[SweepRow], digits: int = 10) -> str:
    lines = [SWEEP_HEADER]
    for r in rows:
        lines.append(
            f"{r.t_reveal},{r.c:.{digits}g},{r.v_base:.{digits}g},"
            f"{r.v_switch:.{digits}g},{r.v_fb:.{digits}g},{r.expected_voi:.{digits}g},"
            f"{r.theorem1_bound:.{digits}g},{r.delta:.{digits}g},"
            f"{r.cstar_global_route:.{digits}g},{r.cstar_global_infoset:.{digits}g}"
        )
    return "\n".join(lines) + "\n"


def verify_bounds(
    rows: list[SweepRow],
    inst: Instance | None = None,
    convention: str = "total",
    tol: float = 1e-8,
) -> BoundReport:
    """Check every structural bound a sweep must satisfy.

    Per row: the switch game dominates the base game (total convention
    only), the feedback value sandwiches the switch value within delta, and
    the expected VOI respects its cost bound. Across rows: expected VOI is
    non-increasing in c at fixed t. With the instance available, the
    fixed-mix expected VOI is additionally checked to be non-increasing in
    reveal time (the mix is re-equilibrated per cost but frozen across t,
    since equilibria move with t).
    """
    if not rows:
        return BoundReport(checks=())
    base_vals = {round(r.v_base, 9) for r in rows}
    if len(base_vals) > 1:
        raise ValueError(f"rows come from mixed instances: v_base values {sorted(base_vals)}")

    checks: list[BoundCheck] = []

    def rowcheck(name, predicate, describe):
        bad = [r for r in rows if not predicate(r)]
        if bad:
            checks.append(BoundCheck(name, False, describe(bad[0])))
        else:
            checks.append(BoundCheck(name, True, f"all {len(rows)} rows"))

    if convention == "total":
        rowcheck(
            "base_below_switch",
            lambda r: r.v_base <= r.v_switch + tol,
            lambda r: f"t={r.t_reveal} c={r.c:g}: v_base={r.v_base:.6f} > v_switch={r.v_switch:.6f}",
        )
    rowcheck(
        "feedback_below_switch",
        lambda r: r.v_fb <= r.v_switch + tol,
        lambda r: f"t={r.t_reveal} c={r.c:g}: v_fb={r.v_fb:.6f} > v_switch={r.v_switch:.6f}",
    )
    rowcheck(
        "switch_within_delta_of_feedback",
        lambda r: r.v_switch <= r.v_fb + r.delta + tol,
        lambda r: f"t={r.t_reveal} c={r.c:g}: v_switch={r.v_switch:.6f} > v_fb+delta={r.v_fb + r.delta:.6f}",
    )
    rowcheck(
        "expected_voi_within_bound",
        lambda r: -tol <= r.expected_voi <= r.theorem1_bound + tol,
        lambda r: f"t={r.t_reveal} c={r.c:g}: expected_voi={r.expected_voi:.6f} vs bound={r.theorem1_bound:.6f}",
    )

    by_t: dict[int, list[SweepRow]] = {}
    for r in rows:
        by_t.setdefault(r.t_reveal, []).append(r)
    bad_c = None
    for t, group in sorted(by_t.items()):
        group = sorted(group, key=lambda r: r.c)
        for a, b in zip(group, group[1:]):
            if b.expected_voi > a.expected_voi + tol:
                bad_c = f"t={t}: expected_voi rises {a.expected_voi:.6f} -> {b.expected_voi:.6f} at c={b.c:g}"
                break
        if bad_c:
            break
    checks.append(BoundCheck("expected_voi_monotone_in_c", bad_c is None, bad_c or "non-increasing"))

    if inst is not None and len(by_t) > 1:
        checks.append(_fixed_mix_monotonicity(inst, sorted(by_t), sorted({r.c for r in rows}), convention, tol))

    return BoundReport(checks=tuple(checks))


def _fixed_mix_monotonicity(inst, t_list, c_list, convention, tol) -> BoundCheck:
    rs = enumerate_routes(inst.n)
    A = base_matrix(inst, rs)
    t0 = t_list[0]
    for c in c_list:
        z_fixed = solve_zero_sum(
            switch_matrix(A, rs, SwitchConfig(t0, c, convention=convention))
        ).col_strategy
        prev = None
        for t in t_list:
            As = switch_matrix(A, rs, SwitchConfig(t, c, convention=convention))
            ev = expected_voi(worst_case_voi(voi_matrix(As, rs, t)), z_fixed)
            if prev is not None and ev > prev + tol:
                return BoundCheck(
                    "fixed_mix_voi_monotone_in_t",
                    False,
                    f"c={c:g}: fixed-mix expected VOI rises {prev:.6f} -> {ev:.6f} at t={t}",
                )
            prev = ev
    return BoundCheck("fixed_mix_voi_monotone_in_t", True, "non-increasing")


def _trial_uniforms(seed: int, start: int, count: int) -> np.ndarray:
    """Four uniforms per trial from the trial-indexed Philox counter block."""
    key = np.random.SeedSequence(seed).generate_state(2, np.uint64)
    bg = np.random.Philox(counter=[start, 0, 0, 0], key=key)
    return np.random.Generator(bg).random((count, 4))


def _cdf(weights: np.ndarray) -> np.ndarray:
    return np.cumsum(weights)


def _draw(cdf: np.ndarray, u: np.ndarray) -> np.ndarray:
    return np.minimum(np.searchsorted(cdf, u, side="right"), len(cdf) - 1)


def simulate(
    inst: Instance,
    rs: RouteSet,
    model: str,
    y,
    z,
    t: int,
    c: float,
    trials: int,
    seed: int,
    workers: int = 1,
) -> SimulationResult:
    """Monte Carlo playout of the two-stage game.

    Each trial draws a route from y and an initial location from z. If the
    treasure's visit position is within t (or the model is base), the payoff
    is the baseline cost. Otherwise the restricted Hider relocates to its
    best reduced-payoff target, and in the feedback model the Seeker and
    Hider instead play their solved reveal-stage subgame mixes. Identical
    seeds give bit-identical results for any worker count.
    """
    if model not in MODELS:
        raise ValueError(f"model must be one of {MODELS}")
    if trials < 1:
        raise ValueError("trials must be >= 1")
    if workers < 1:
        raise ValueError("workers must be >= 1")
    if not 1 <= t <= rs.n:
        raise ValueError(f"t {t} out of range 1..{rs.n}")
    if c < 0:
        raise ValueError(f"switching cost must be >= 0, got {c}")
    y = simplex_weights(y, rs.m, "y")
    z = simplex_weights(z, rs.n, "z")

    A_pm = base_matrix(inst, rs)
    A = A_pm.entries
    reveal_active = t < rs.n and model != "base"
    As = None
    pi = None
    subgames: dict[tuple[int, int], tuple] = {}
    if reveal_active:
        if model == "restricted":
            As = switch_matrix(A_pm, rs, SwitchConfig(t, c, convention="total")).entries
        else:
            classes, pi = prefix_classes(rs, t)

    def subgame_play(hi: int, i: int):
        cached = subgames.get((hi, i))
        if cached is None:
            iset = classes[hi]
            sol = solve_zero_sum(subgame_matrix(A_pm, rs, iset, i, c))
            cached = (
                np.array(iset.members),
                _cdf(sol.row_strategy.weights),
                np.array(sorted(iset.unvisited)),
                _cdf(sol.col_strategy.weights),
            )
            subgames[(hi, i)] = cached
        return cached

    y_cdf, z_cdf = _cdf(y), _cdf(z)
    bounds = [trials * w // workers for w in range(workers + 1)]
    payoff_chunks = []
    ended_total = 0
    for w in range(workers):
        start, stop = int(bounds[w]), int(bounds[w + 1])
        count = stop - start
        if count == 0:
            continue
        u = _trial_uniforms(seed, start, count)
        j = _draw(y_cdf, u[:, 0])
        iloc = _draw(z_cdf, u[:, 1]) + 1
        ended = rs.position_matrix[j, iloc - 1] <= t
        ended_total += int(ended.sum())
        payoff = A[j, iloc - 1].copy()
        if reveal_active:
            late = np.flatnonzero(~ended)
            if model == "restricted":
                payoff[late] = As[j[late], iloc[late] - 1]
            else:
                groups: dict[tuple[int, int], list[int]] = {}
                for idx in late:
                    groups.setdefault((int(pi[j[idx]]), int(iloc[idx])), []).append(int(idx))
                for (hi, i), idxs in groups.items():
                    members, row_cdf, targets, col_cdf = subgame_play(hi, i)
                    idxs = np.array(idxs)
                    k = members[_draw(row_cdf, u[idxs, 2])]
                    hat = targets[_draw(col_cdf, u[idxs, 3])]
                    payoff[idxs] = A[k, hat - 1] - c * (hat != i)
        payoff_chunks.append(payoff)

    payoffs = np.concatenate(payoff_chunks)
    mean = float(payoffs.sum() / trials)
    stderr = float(payoffs.std(ddof=1) / math.sqrt(trials)) if trials > 1 else 0.0
    return SimulationResult(
        trials=trials,
        seed=seed,
        mean_payoff=mean,
        payoff_stderr=stderr,
        empirical_end_by_t=ended_total / trials,
        model=model,
    )

"""Property checks behind the ``verify`` subcommand.

Each check returns a record {name, status, measured, threshold, detail};
status is "pass", "fail" or "skipped" (pole-dependent checks on an empty
pole set).
"""
from __future__ import annotations

import math

import numpy as np

from .barrier import BarrierParams, beta3_continued, coefficients, piecewise_branches, s_matrix
from .errors import ResonanceError
from .evolution import background_bound, survival_amplitude
from .hardy import hardy_norm_sq, residue_identity_check
from .polefinder import ResonanceSet, count_zeros, find_poles, lowest_poles
from .quadrature import QuadratureSpec
from .resonance import gram_matrix, gram_routes

GRAM_REL_TOL = 1e-8


def _record(name, measured, threshold, ok, detail=""):
    return {"name": name, "status": "pass" if ok else "fail",
            "measured": float(measured), "threshold": float(threshold), "detail": detail}


def _skipped(name, threshold, why="no poles"):
    return {"name": name, "status": "skipped", "measured": float("nan"),
            "threshold": float(threshold), "detail": why}


def check_unitarity(params: BarrierParams, e_max: float = 50.0, n: int = 1000):
    E = np.linspace(e_max / n, e_max, n)
    dev = float(np.max(np.abs(np.abs(s_matrix(E, params)) - 1)))
    return _record("unitarity", dev, 1e-10, dev < 1e-10, f"{n} energies in (0, {e_max}]")


def check_conjugation(params: BarrierParams, n: int = 200):
    ks = np.linspace(0.05, 3 * math.sqrt(params.v0), n)
    worst = 0.0
    for k in ks:
        c = coefficients(k, params)
        worst = max(worst, abs(c.beta3 - c.alpha3.conjugate()) / abs(c.alpha3))
    return _record("conjugation", worst, 1e-12, worst < 1e-12, "beta3 = conj(alpha3), real k")


def c1_mismatch(E: float, params: BarrierParams, h: float = 1e-5) -> float:
    """Worst relative jump of psi_E or its derivative at x = a and x = b."""
    worst = 0.0
    for x0, (lo, hi) in ((params.a, (0, 1)), (params.b, (1, 2))):
        xs = np.array([x0 - h, x0, x0 + h])
        pieces = piecewise_branches(E, xs, params)
        left, right = pieces[lo], pieces[hi]
        dl = (left[2] - left[0]) / (2 * h)
        dr = (right[2] - right[0]) / (2 * h)
        scale_v = max(abs(left[1]), abs(right[1]), 1e-300)
        scale_d = max(abs(dl), abs(dr), 1e-300)
        worst = max(worst, abs(left[1] - right[1]) / scale_v, abs(dl - dr) / scale_d)
    return worst


def check_c1(params: BarrierParams, energies=(0.5, 5.0, 9.9, 10.1, 25.0, 45.0)):
    worst = max(c1_mismatch(E, params) for E in energies)
    return _record("c1_matching", worst, 1e-8, worst < 1e-8, "finite differences, step 1e-5")


def check_branch_evenness(params: BarrierParams, n: int = 50, seed: int = 7):
    rng = np.random.default_rng(seed)
    worst = 0.0
    for _ in range(n):
        k = complex(rng.uniform(0.1, 10), rng.uniform(-2, 2))
        c1 = coefficients(k, params)
        c2 = coefficients(k, params, kprime=-c1.kprime)
        pairs = [(c1.alpha1, c2.alpha1), (c1.alpha3, c2.alpha3), (c1.beta3, c2.beta3),
                 (c1.alpha2, c2.beta2), (c1.beta2, c2.alpha2)]
        for u, v in pairs:
            worst = max(worst, abs(u - v) / max(abs(u), 1e-300))
    return _record("branch_evenness", worst, 1e-12, worst < 1e-12,
                   "alpha1, alpha3, beta3 invariant; alpha2 and beta2 exchange")


def check_poles(params: BarrierParams, poles: ResonanceSet):
    if len(poles) == 0:
        return [_skipped("pole_residuals", 1e-10), _skipped("count_consistency", 0)]
    worst = max(float(abs(beta3_continued(p.k, params))) for p in poles)
    out = [_record("pole_residuals", worst, 1e-10, worst < 1e-10)]
    region = poles.region
    n = count_zeros(region, params)
    found = len(find_poles(params, region, max_count=max(64, 2 * n)))
    out.append(_record("count_consistency", abs(n - found), 0, n == found,
                       f"argument principle {n}, isolated {found}"))
    return out


def check_gram(poles: ResonanceSet, spec: QuadratureSpec):
    if len(poles) == 0:
        return [_skipped("gram_closed_form", GRAM_REL_TOL), _skipped("gram_hermitian_psd", 1e-10)]
    worst, flagged = 0.0, []
    for j in range(len(poles)):
        for k in range(j, len(poles)):
            numeric, closed = gram_routes(j, k, poles, spec)
            rel = abs(numeric.value - closed) / abs(closed)
            worst = max(worst, rel)
            if rel > GRAM_REL_TOL:
                flagged.append(f"Disagreement({j},{k})")
    out = [_record("gram_closed_form", worst, GRAM_REL_TOL, not flagged,
                   ", ".join(flagged) or "quadrature matches the two-pole closed form")]
    try:
        G = gram_matrix(poles, QuadratureSpec())
        herm = G.hermitian_error
        neg = max(0.0, -G.min_eigenvalue) / G.trace
        out.append(_record("gram_hermitian_psd", max(herm, neg), 1e-10, herm == 0 and neg < 1e-10))
    except ResonanceError as exc:
        out.append(_record("gram_hermitian_psd", float("inf"), 1e-10, False, str(exc)))
    return out


def check_bounds(poles: ResonanceSet, spec: QuadratureSpec, survival_poles: int = 3):
    if len(poles) == 0:
        return [_skipped("bound_formula", 1e-6), _skipped("survival_bound", 1.0),
                _skipped("survival_initial", 1e-9)]
    worst = 0.0
    for j in range(len(poles)):
        numeric, _ = gram_routes(j, j, poles, spec)
        n_sq = numeric.value.real
        ref = math.sqrt(max((hardy_norm_sq(poles[j].mu) / n_sq) ** 2 - 1, 0.0))
        worst = max(worst, abs(ref - background_bound(poles[j])))
    out = [_record("bound_formula", worst, 1e-6, worst < 1e-6)]
    ratio, start, detail = 0.0, 0.0, []
    for j in range(min(survival_poles, len(poles))):
        c = survival_amplitude(poles[j], spec=spec)
        peak = float(np.max(np.abs(c.r_t)))
        ratio = max(ratio, (peak - 1e-6) / c.bound)
        start = max(start, abs(c.a_t[0] - 1), abs(c.r_t[0]))
        detail.append(f"pole {j}: max|R| {peak:.4g}, bound {c.bound:.4g}")
    out.append(_record("survival_bound", ratio, 1.0, ratio <= 1.0,
                       "(max|R| - 1e-6)/bound; " + "; ".join(detail)))
    out.append(_record("survival_initial", start, 1e-9, start <= 1e-9, "|A(0) - 1|, |R(0)|"))
    return out


def check_residue(sigma=(0.0, 1.0, 5.0)):
    chk = residue_identity_check([-1j], lambda e: np.exp(-e), sigma)
    d = chk.discrepancies
    rel = chk.max_discrepancy / chk.rhs_scale
    ok = bool(np.all(np.diff(d) < 0)) and rel < 1e-2
    return _record("residue_identity", rel, 1e-2, ok,
                   "single pole -i, g = exp(-E); eps 1e-1, 1e-2, 1e-3: "
                   + ", ".join(f"{v:.3g}" for v in d))


def _guarded(name, fn, *args):
    try:
        out = fn(*args)
    except ResonanceError as exc:
        return [_record(name, float("inf"), 0.0, False, f"{type(exc).__name__}: {exc}")]
    return out if isinstance(out, list) else [out]


def run_all(params: BarrierParams, count: int = 10,
            spec: QuadratureSpec = QuadratureSpec(), residue: bool = True) -> list[dict]:
    report = []
    report += _guarded("unitarity", check_unitarity, params, spec.e_max)
    report += _guarded("conjugation", check_conjugation, params)
    report += _guarded("c1_matching", check_c1, params)
    report += _guarded("branch_evenness", check_branch_evenness, params)
    try:
        poles = lowest_poles(params, count) if count > 0 else ResonanceSet(params, ())
    except ResonanceError as exc:
        return report + [_record("pole_search", float("inf"), 0.0, False,
                                 f"{type(exc).__name__}: {exc}")]
    report += _guarded("poles", check_poles, params, poles)
    report += _guarded("gram", check_gram, poles, spec)
    report += _guarded("bounds", check_bounds, poles, spec)
    if residue:
        report += _guarded("residue_identity", check_residue)
    return report

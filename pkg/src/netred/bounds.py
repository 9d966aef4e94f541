"""A-priori reduction error bounds and their aggregation into reports.

For almost equitable partitions the H2 and H-infinity errors of the
clustered network admit closed upper bounds built from three ingredients:
the auxiliary-system norms over the eigenvalues lost in the reduction, the
auxiliary-system norms over the whole nonzero spectrum (for relative
bounds), and the leaders' cellmate counts 1 - 1/|cell|.  For a single
integrator the H-infinity error is known exactly.  For arbitrary
partitions, a triangle-inequality route through the closest AEP-compatible
Laplacian gives a computable (single-integrator) bound.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .errors import (
    Disconnected,
    KernelConditionViolated,
    NotAEP,
    NotSingleIntegrator,
    NotSymmetricDynamics,
    NotSynchronized,
    UnstablePoles,
)
from .graphcore import (
    ZERO_EIG_TOL,
    Partition,
    is_almost_equitable,
    is_connected,
    project_to_aep_laplacian,
    reduce_graph,
)
from .linalg import StateSpace
from .netsys import (
    NetworkSystem,
    assemble_error_system,
    assemble_full,
    is_synchronized,
    reduced_laplacian_spectrum,
)
from .norms import (
    NormResult,
    aux_dc_gain,
    aux_gramian_h2_sq,
    h2_norm,
    hinf_norm_dc,
    hinf_norm_sweep,
)

EIG_MATCH_RTOL = 1e-7


@dataclass
class BoundReport:
    """Everything the bound theory yields for one (network, partition) pair.

    Bound fields are None when their preconditions fail; ``unavailable``
    maps each absent field to a machine-readable reason (NotAEP,
    NotSymmetricDynamics, ...).  True errors come from the norms module
    applied to the assembled error realization.
    """

    aep: bool
    synchronized: bool
    connected: bool
    leaders_share_cell: bool
    cellmate_terms: tuple
    s_max_h2: float | None = None
    s_min_h2: float | None = None
    abs_h2_bound: float | None = None
    rel_h2_bound: float | None = None
    s_max_hinf: float | None = None
    s_min_hinf: float | None = None
    abs_hinf_bound: float | None = None
    rel_hinf_bound: float | None = None
    hinf_exact_error: float | None = None
    triangle_h2_bound: float | None = None
    triangle_h2_terms: tuple | None = None
    triangle_hinf_bound: float | None = None
    triangle_hinf_terms: tuple | None = None
    true_h2_error: NormResult | None = None
    true_hinf_error: NormResult | None = None
    full_h2_norm: NormResult | None = None
    full_hinf_norm: NormResult | None = None
    unavailable: dict = field(default_factory=dict)


def cellmate_terms(pi: Partition, leaders) -> tuple:
    """Per-leader terms 1 - 1/|cell of leader|, each in [0, 1)."""
    return tuple(1.0 - 1.0 / len(pi.cells[pi.cell_of(v)]) for v in leaders)


def leaders_share_cell(pi: Partition, leaders) -> bool:
    cells = [pi.cell_of(v) for v in leaders]
    return len(set(cells)) < len(cells)


def leader_spread(n_leaders: int, n_agents: int) -> float:
    """Largest eigenvalue of M^T (I - (1/N) 1 1^T) M, i.e. of I_m - (m/N on 1_m).

    Equals 1 for two or more leaders and 1 - 1/N for a single leader; it is
    the squared H-infinity norm of the full single-integrator network and
    the sharp spread factor in relative H-infinity bounds.
    """
    if n_leaders == 0:
        return 0.0
    if n_leaders == 1:
        return 1.0 - 1.0 / n_agents
    return 1.0


def spectrum_difference(lams, lams_hat, rtol: float = EIG_MATCH_RTOL) -> np.ndarray:
    """Multiset difference sigma(L) \\ sigma(L_hat) by greedy closest matching.

    Each reduced eigenvalue consumes the closest unmatched original one;
    matching beyond tolerance raises ValueError (it cannot happen for an
    almost equitable partition).
    """
    lams = sorted(float(v) for v in lams)
    tol = rtol * (1.0 + max(abs(v) for v in lams)) if lams else 0.0
    remaining = list(lams)
    for lam_hat in sorted(float(v) for v in lams_hat):
        idx = min(range(len(remaining)), key=lambda i: abs(remaining[i] - lam_hat))
        if abs(remaining[idx] - lam_hat) > tol:
            raise ValueError(
                f"reduced eigenvalue {lam_hat:.6g} not matched in the original spectrum"
            )
        remaining.pop(idx)
    return np.array(remaining)


def _require_aep_bound_preconditions(ns: NetworkSystem, pi: Partition) -> None:
    if not is_connected(ns.laplacian):
        raise Disconnected("bounds require a connected graph")
    if not is_almost_equitable(ns.laplacian, pi):
        raise NotAEP("bounds require an almost equitable partition")
    if not is_synchronized(ns):
        raise NotSynchronized("bounds require a synchronized network")


def _h2_constants(ns: NetworkSystem, pi: Partition):
    """(s_max, s_min): extreme auxiliary H2 norms over the lost / full spectrum."""
    lams = ns.laplacian.spectral.eigenvalues
    lams_hat = reduced_laplacian_spectrum(ns.laplacian, pi)
    lost = spectrum_difference(lams, lams_hat)
    nonzero = [float(v) for v in lams if v > ZERO_EIG_TOL]
    s_max = max((math.sqrt(aux_gramian_h2_sq(ns.dyn, lam)) for lam in lost), default=0.0)
    s_min = min((math.sqrt(aux_gramian_h2_sq(ns.dyn, lam)) for lam in nonzero), default=0.0)
    return s_max, s_min


def h2_bound_aep(ns: NetworkSystem, pi: Partition):
    """Absolute and relative a-priori H2 error bounds for an AEP.

    abs^2 = s_max^2 * sum_i (1 - 1/|cell of leader i|), with s_max the
    largest auxiliary H2 norm over the eigenvalues lost by the reduction;
    rel^2 = (s_max/s_min)^2 * sum_i(...) / (m (1 - 1/N)).
    """
    _require_aep_bound_preconditions(ns, pi)
    m, n_agents = ns.n_leaders, ns.n_agents
    if m == 0 or n_agents == 1:
        return 0.0, 0.0
    s_max, s_min = _h2_constants(ns, pi)
    terms = sum(cellmate_terms(pi, ns.leaders))
    abs_bound = s_max * math.sqrt(terms)
    if terms == 0.0 or s_max == 0.0:
        return 0.0, 0.0
    rel_bound = (s_max / s_min) * math.sqrt(terms / (m * (1.0 - 1.0 / n_agents)))
    return abs_bound, rel_bound


def hinf_error_single_integrator(ns: NetworkSystem, pi: Partition) -> float:
    """Exact H-infinity reduction error for single-integrator agents on an AEP.

    Equals 1 when two leaders share a cell, otherwise
    sqrt(max_i (1 - 1/|cell of leader i|)).
    """
    if not ns.dyn.is_single_integrator():
        raise NotSingleIntegrator("exact H-infinity error needs A=0, B=1, E=1")
    if not is_connected(ns.laplacian):
        raise Disconnected("exact H-infinity error requires a connected graph")
    if not is_almost_equitable(ns.laplacian, pi):
        raise NotAEP("exact H-infinity error requires an almost equitable partition")
    if ns.n_leaders == 0:
        return 0.0
    if leaders_share_cell(pi, ns.leaders):
        return 1.0
    return math.sqrt(max(cellmate_terms(pi, ns.leaders)))


def _hinf_constants(ns: NetworkSystem, pi: Partition):
    """(s_max, s_min) for symmetric dynamics.

    The auxiliary drift A - lam B is then symmetric Hurwitz, so each
    auxiliary H-infinity norm equals sigma_max of its DC gain
    lam (lam B - A)^{-1} E; s_min takes sigma_min over the whole nonzero
    spectrum instead.
    """
    lams = ns.laplacian.spectral.eigenvalues
    lams_hat = reduced_laplacian_spectrum(ns.laplacian, pi)
    lost = spectrum_difference(lams, lams_hat)
    nonzero = [float(v) for v in lams if v > ZERO_EIG_TOL]
    s_max = 0.0
    for lam in lost:
        sv = np.linalg.svd(aux_dc_gain(ns.dyn, float(lam)), compute_uv=False)
        s_max = max(s_max, float(sv.max(initial=0.0)))
    s_min = math.inf
    for lam in nonzero:
        sv = np.linalg.svd(aux_dc_gain(ns.dyn, lam), compute_uv=False)
        s_min = min(s_min, float(sv.min(initial=math.inf)))
    if not nonzero:
        s_min = 0.0
    return s_max, s_min


def hinf_bound_symmetric(ns: NetworkSystem, pi: Partition):
    """Absolute and relative a-priori H-infinity bounds for symmetric (A, B) on an AEP.

    abs^2 = s_max^2 * max_i (1 - 1/|cell_i|) when the leaders occupy
    distinct cells and s_max^2 otherwise.  The relative bound divides by
    s_min^2 times the leader spread factor (the spread is 1 for two or more
    leaders).
    """
    if not ns.dyn.is_symmetric():
        raise NotSymmetricDynamics("this bound needs symmetric agent matrices A and B")
    _require_aep_bound_preconditions(ns, pi)
    m = ns.n_leaders
    if m == 0 or ns.n_agents == 1:
        return 0.0, 0.0
    s_max, s_min = _hinf_constants(ns, pi)
    if leaders_share_cell(pi, ns.leaders):
        factor = 1.0
    else:
        factor = max(cellmate_terms(pi, ns.leaders))
    abs_bound = s_max * math.sqrt(factor)
    if abs_bound == 0.0:
        return 0.0, 0.0
    spread = leader_spread(m, ns.n_agents)
    rel_bound = abs_bound / (s_min * math.sqrt(spread))
    return abs_bound, rel_bound


def triangle_bound_general(ns: NetworkSystem, pi: Partition, norm: str):
    """Reduction error bound for an arbitrary partition (single integrators).

    Route: approximate L by the closest AEP-compatible matrix l_aep and
    chain three terms with the triangle inequality,

        total = 2 * ||dL (sI + L)^{-1} M||_p        (original vs. surrogate)
              + exact/bounded AEP error on l_aep    (surrogate reduction)
              + ||dL P (sI + L_hat)^{-1} M_hat||_p  (reduced surrogate vs. reduced)

    with dL = L - l_aep.  dL annihilates the all-ones vector, so both outer
    terms have well-defined norms despite the marginal mode.  Returns
    ``(total, (term1, term2, term3))``.
    """
    if norm not in ("h2", "hinf"):
        raise ValueError(f"norm must be 'h2' or 'hinf', got {norm!r}")
    if not ns.dyn.is_single_integrator():
        raise NotSingleIntegrator("the triangle route is derived for A=0, B=1, E=1")
    if not is_connected(ns.laplacian):
        raise Disconnected("the triangle route requires a connected graph")
    l_aep, _delta = project_to_aep_laplacian(ns.laplacian, pi)
    d_l = ns.laplacian.mat - l_aep.mat
    rg = reduce_graph(ns.laplacian, pi, ns.leaders)
    term1_sys = StateSpace(-ns.laplacian.mat, ns.m_matrix, d_l)
    term3_sys = StateSpace(-rg.laplacian_hat, rg.m_hat, d_l @ pi.char_matrix)
    ns_aep = NetworkSystem(l_aep, ns.leaders, ns.dyn)
    if norm == "h2":
        term1 = 2.0 * h2_norm(term1_sys).value
        term2 = h2_bound_aep(ns_aep, pi)[0]
        term3 = h2_norm(term3_sys).value
    else:
        term1 = 2.0 * hinf_norm_sweep(term1_sys).value
        term2 = hinf_error_single_integrator(ns_aep, pi)
        term3 = hinf_norm_sweep(term3_sys).value
    return term1 + term2 + term3, (term1, term2, term3)


def _single_integrator_full_hinf(ns: NetworkSystem) -> NormResult:
    """Exact ||S||_Hinf of the full single-integrator network (DC-dominant)."""
    sys = assemble_full(ns)
    return hinf_norm_dc(sys, -ns.laplacian.mat)


def full_report(ns: NetworkSystem, pi: Partition, norms=("h2", "hinf")) -> BoundReport:
    """Evaluate every applicable bound plus oracle true errors.

    Inapplicable quantities stay None with the reason recorded in
    ``report.unavailable``.  Norm-based work is gated on connectivity and
    synchronization rather than reported as infinite.
    """
    connected = is_connected(ns.laplacian)
    synchronized = is_synchronized(ns)
    aep = is_almost_equitable(ns.laplacian, pi)
    report = BoundReport(
        aep=aep,
        synchronized=synchronized,
        connected=connected,
        leaders_share_cell=leaders_share_cell(pi, ns.leaders),
        cellmate_terms=cellmate_terms(pi, ns.leaders),
    )
    want_h2 = "h2" in norms
    want_hinf = "hinf" in norms
    if not want_h2:
        for name in ("abs_h2_bound", "rel_h2_bound", "triangle_h2_bound",
                     "true_h2_error", "full_h2_norm"):
            report.unavailable[name] = "NotRequested"
    if not want_hinf:
        for name in ("abs_hinf_bound", "rel_hinf_bound", "hinf_exact_error",
                     "triangle_hinf_bound", "true_hinf_error", "full_hinf_norm"):
            report.unavailable[name] = "NotRequested"

    if ns.n_leaders == 0:
        # no external input: every transfer function and error is zero
        def zero(method: str) -> NormResult:
            return NormResult(0.0, method, {"trivial": "leaderless network"})

        if want_h2:
            report.abs_h2_bound = report.rel_h2_bound = 0.0
            report.true_h2_error = zero("lyapunov_kernel")
            report.full_h2_norm = zero("lyapunov_kernel")
        if want_hinf:
            report.abs_hinf_bound = report.rel_hinf_bound = 0.0
            report.true_hinf_error = zero("frequency_sweep")
            report.full_hinf_norm = zero("frequency_sweep")
            if ns.dyn.is_single_integrator():
                report.hinf_exact_error = 0.0
            else:
                report.unavailable["hinf_exact_error"] = "NotSingleIntegrator"
        return report

    norm_fields = [
        "abs_h2_bound",
        "rel_h2_bound",
        "abs_hinf_bound",
        "rel_hinf_bound",
        "triangle_h2_bound",
        "triangle_hinf_bound",
        "true_h2_error",
        "true_hinf_error",
        "full_h2_norm",
        "full_hinf_norm",
        "hinf_exact_error",
    ]
    if not connected:
        for name in norm_fields:
            report.unavailable[name] = "Disconnected"
        return report
    if not synchronized:
        for name in norm_fields:
            report.unavailable[name] = "NotSynchronized"
        return report

    single = ns.dyn.is_single_integrator()
    symmetric = ns.dyn.is_symmetric()
    full_sys = assemble_full(ns)
    error_sys = assemble_error_system(ns, pi)

    if want_h2:
        if aep:
            report.s_max_h2, report.s_min_h2 = _h2_constants(ns, pi)
            report.abs_h2_bound, report.rel_h2_bound = h2_bound_aep(ns, pi)
        elif single:
            total, terms = triangle_bound_general(ns, pi, "h2")
            report.triangle_h2_bound, report.triangle_h2_terms = total, terms
            report.unavailable["abs_h2_bound"] = "NotAEP"
            report.unavailable["rel_h2_bound"] = "NotAEP"
        else:
            report.unavailable["abs_h2_bound"] = "NotAEP"
            report.unavailable["rel_h2_bound"] = "NotAEP"
            report.unavailable["triangle_h2_bound"] = "NotSingleIntegrator"
        report.full_h2_norm = h2_norm(full_sys)
        try:
            report.true_h2_error = h2_norm(error_sys)
        except KernelConditionViolated:
            report.unavailable["true_h2_error"] = "NotSynchronized"

    if want_hinf:
        if aep:
            if single:
                exact = hinf_error_single_integrator(ns, pi)
                report.hinf_exact_error = exact
                report.s_max_hinf, report.s_min_hinf = 1.0, 1.0
                report.abs_hinf_bound = exact
                spread = leader_spread(ns.n_leaders, ns.n_agents)
                report.rel_hinf_bound = exact / math.sqrt(spread) if exact > 0.0 else 0.0
            elif symmetric:
                report.s_max_hinf, report.s_min_hinf = _hinf_constants(ns, pi)
                report.abs_hinf_bound, report.rel_hinf_bound = hinf_bound_symmetric(ns, pi)
                report.unavailable["hinf_exact_error"] = "NotSingleIntegrator"
            else:
                for name in ("abs_hinf_bound", "rel_hinf_bound", "hinf_exact_error"):
                    report.unavailable[name] = "NotSymmetricDynamics"
        elif single:
            total, terms = triangle_bound_general(ns, pi, "hinf")
            report.triangle_hinf_bound, report.triangle_hinf_terms = total, terms
            for name in ("abs_hinf_bound", "rel_hinf_bound", "hinf_exact_error"):
                report.unavailable[name] = "NotAEP"
        else:
            for name in ("abs_hinf_bound", "rel_hinf_bound", "hinf_exact_error"):
                report.unavailable[name] = "NotAEP"
            report.unavailable["triangle_hinf_bound"] = "NotSingleIntegrator"
        if single:
            report.full_hinf_norm = _single_integrator_full_hinf(ns)
        elif symmetric:
            report.full_hinf_norm = hinf_norm_dc(full_sys, full_sys.A)
        else:
            report.full_hinf_norm = hinf_norm_sweep(full_sys)
        try:
            report.true_hinf_error = hinf_norm_sweep(error_sys)
        except UnstablePoles:
            report.unavailable["true_hinf_error"] = "NotSynchronized"

    return report

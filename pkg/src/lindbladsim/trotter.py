"""Suzuki-Lie-Trotter recombination of component semigroups.

The generator is split as L = sum_j L_j with component norms
L1 >= L2 >= ... (1->1 norms).  With normalized components L̂_j = L_j / L1
the symmetric product formula

    S_2(lam) = prod_j e^(lam/2 L̂_j) prod_{j reversed} e^(lam/2 L̂_j)

is promoted to higher order through Suzuki's recursion

    S_2k(lam) = [S_2k-2(p_k lam)]^2 S_2k-2((1-4 p_k) lam) [S_2k-2(p_k lam)]^2,
    p_k = 1 / (4 - 4^(1/(2k-1))),

and applied n_reps times with per-block normalized duration
lam = t L1 / n_reps.  The half-order k and block count r follow the
closed-form bound minimization

    k = round( sqrt( log_{25/3}(4 e m t L2 / eps) / 2 ) ),   clamped to >= 1,
    r = t (4 e m t L2 / eps)^(1/2k) * 2 e d_k / (2k + 1),
    d_k = m (4/3) k (5/3)^(k-1),

valid in the regime 4 e m t L2 >= eps; outside it k is clamped to 1.  The
resulting product approximates exp(tL) within eps in (1->1) norm, so output
states are within eps of the exact oracle in trace distance.

Each component channel is realized exactly: Hamiltonian segments as unitary
conjugation, dissipative segments as U [exp(t~ L_universal)(U† . U)] U†
with the physical duration t~ carrying the component's spectral weight.
Negative intermediate durations appear in the recursion for k >= 2; the
matrix exponential is applied for any sign and the cost report flags them.
"""

import math
from dataclasses import dataclass, field

import numpy as np

from .decompose import ConjugationPlan, universal_gks_matrix
from .lindblad import (GksGenerator, QuantumState, Superoperator,
                       conjugation_superoperator, dissipator_superoperator,
                       hamiltonian_superoperator, one_one_norm, unvec, vec)
from .numerics import expm
from .sud import GellMannBasis


class TrotterError(ValueError):
    pass


E = math.e


@dataclass(frozen=True)
class Segment:
    """One product factor: component index and normalized duration."""

    index: int
    duration: float


@dataclass(frozen=True)
class Component:
    """One summand of the generator with its exact channel realization."""

    kind: str  # "hamiltonian" | "dissipative"
    d: int
    norm: float
    superop: np.ndarray = field(repr=False)
    # hamiltonian payload
    H: np.ndarray | None = field(default=None, repr=False)
    # dissipative payload
    plan: ConjugationPlan | None = None
    conj: np.ndarray | None = field(default=None, repr=False)  # vec form of U . U†
    universal: np.ndarray | None = field(default=None, repr=False)  # generator of A(params)

    def channel(self, t_phys: float) -> np.ndarray:
        """Exact channel matrix exp(t_phys * L_j), built from primitives."""
        if self.kind == "hamiltonian":
            u = expm(-1j * t_phys * self.H)
            return conjugation_superoperator(u)
        t_eff = t_phys * self.plan.lam
        inner = expm(t_eff * self.universal)
        return self.conj @ inner @ np.conj(self.conj).T


def hamiltonian_component(H: np.ndarray, seed: int = 0) -> Component:
    H = np.asarray(H, dtype=complex)
    d = H.shape[0]
    S = hamiltonian_superoperator(H)
    norm = one_one_norm(Superoperator(d=d, S=S), seed=seed)
    return Component(kind="hamiltonian", d=d, norm=norm, superop=S, H=H)


def dissipative_component(plan: ConjugationPlan, basis: GellMannBasis, seed: int = 0) -> Component:
    A_univ = universal_gks_matrix(plan.params, basis)
    S_univ = dissipator_superoperator(A_univ, basis)
    K = conjugation_superoperator(plan.U)
    S = plan.lam * (K @ S_univ @ np.conj(K).T)
    norm = one_one_norm(Superoperator(d=basis.d, S=S), seed=seed)
    return Component(kind="dissipative", d=basis.d, norm=norm, superop=S,
                     plan=plan, conj=K, universal=S_univ)


def prepare_components(H: np.ndarray, plans, basis: GellMannBasis, seed: int = 0) -> list[Component]:
    """Assemble and norm-order the component list for a decomposition.

    Zero components (vanishing Hamiltonian, zero-weight plans) are
    dropped; the rest are sorted by descending (1->1) norm with stable
    ties, which fixes the product order deterministically.
    """
    comps = []
    H = np.asarray(H, dtype=complex)
    if np.max(np.abs(H)) > 0.0:
        comps.append(hamiltonian_component(H, seed=seed))
    for plan in plans:
        if plan.lam > 0.0:
            comps.append(dissipative_component(plan, basis, seed=seed))
    comps = [c for c in comps if c.norm > 0.0]
    order = sorted(range(len(comps)), key=lambda i: (-comps[i].norm, i))
    return [comps[i] for i in order]


def s2_schedule(m: int, lam: float) -> list[Segment]:
    """Basic symmetric split: forward sweep then reverse sweep, lam/2 each."""
    if m < 1:
        raise TrotterError(f"need at least one component, got {m}")
    fwd = [Segment(index=j, duration=lam / 2.0) for j in range(m)]
    bwd = [Segment(index=j, duration=lam / 2.0) for j in reversed(range(m))]
    return fwd + bwd


def suzuki_p(k: int) -> float:
    """Recursion coefficient p_k = 1 / (4 - 4^(1/(2k-1)))."""
    return 1.0 / (4.0 - 4.0 ** (1.0 / (2 * k - 1)))


def merge_adjacent(segments) -> list[Segment]:
    """Fuse neighboring segments with equal component index."""
    out: list[Segment] = []
    for seg in segments:
        if out and out[-1].index == seg.index:
            out[-1] = Segment(index=seg.index, duration=out[-1].duration + seg.duration)
        else:
            out.append(seg)
    return out


def s2k_schedule(m: int, k: int, lam: float) -> list[Segment]:
    """Order-2k Suzuki schedule with adjacent equal-index factors merged."""
    if k < 1:
        raise TrotterError(f"half-order must be >= 1, got {k}")
    if k == 1:
        return merge_adjacent(s2_schedule(m, lam))
    p = suzuki_p(k)
    outer = s2k_schedule(m, k - 1, p * lam)
    middle = s2k_schedule(m, k - 1, (1.0 - 4.0 * p) * lam)
    return merge_adjacent(outer + outer + middle + outer + outer)


def segments_per_block(m: int, k: int) -> int:
    """Factor count of one merged S_2k block: 2(m-1) 5^(k-1) + 1."""
    return 2 * (m - 1) * 5 ** (k - 1) + 1


def select_order(eps: float, t: float, m: int, L1: float, L2: float):
    """Half-order k and block parameter r from the cost-bound formulas."""
    if eps <= 0 or t <= 0:
        raise TrotterError("eps and t must be positive")
    if m < 1:
        raise TrotterError("need at least one component")
    if L2 > L1 or L2 <= 0:
        raise TrotterError("norms must satisfy L1 >= L2 > 0")
    x = 4.0 * E * m * t * L2 / eps
    if x >= 1.0:
        k = int(round(math.sqrt(0.5 * math.log(x) / math.log(25.0 / 3.0))))
        k = max(k, 1)
    else:
        k = 1  # outside the bound's regime; fall back to the basic split
    d_k = m * (4.0 / 3.0) * k * (5.0 / 3.0) ** (k - 1)
    r = t * x ** (1.0 / (2 * k)) * 2.0 * E * d_k / (2 * k + 1)
    return k, r


def nexp_bound_res(m: int, k: int, t: float, eps: float, L1: float, L2: float) -> float:
    """Exponential-count bound at fixed half-order k."""
    x = 4.0 * E * m * t * L2 / eps
    return (2 * m - 1) * 5 ** (k - 1) * (
        L1 * t * x ** (1.0 / (2 * k)) * (4.0 * m * E / 3.0) * (5.0 / 3.0) ** (k - 1))


def nexp_bound_closed_form(m: int, t: float, eps: float, L1: float, L2: float) -> float:
    """Closed-form bound after optimizing over the half-order."""
    x = 4.0 * E * m * t * L2 / eps
    if x < 1.0:
        return float("inf")
    return (8.0 / 3.0) * (2 * m - 1) * m * E * t * L1 * math.exp(
        2.0 * math.sqrt(0.5 * math.log(25.0 / 3.0) * math.log(x)))


@dataclass(frozen=True)
class TrotterPlan:
    """Integrator order, repetition count, and one block's schedule."""

    k: int
    r: float
    n_reps: int
    schedule: tuple  # of Segment, one repetition block
    m: int
    L1: float
    L2: float
    t: float
    eps: float
    predicted_error: float

    @property
    def n_exp(self) -> int:
        """Unmerged exponential count (2(m-1)5^(k-1)+1) * n_reps."""
        return segments_per_block(self.m, self.k) * self.n_reps

    def actual_exponentials(self) -> int:
        """Segment count after merging across repetition boundaries."""
        block = len(self.schedule)
        if self.n_reps == 0 or block == 0:
            return 0
        boundary = 1 if self.schedule[0].index == self.schedule[-1].index else 0
        return self.n_reps * block - boundary * (self.n_reps - 1)

    def has_negative_segments(self) -> bool:
        return any(seg.duration < 0 for seg in self.schedule)


def build_plan(components: list[Component], eps: float, t: float) -> TrotterPlan:
    """Choose (k, r) for the component list and lay out the block schedule.

    Components must already be ordered by descending norm.  A single
    component needs no splitting: one exact segment, zero predicted error.
    """
    if not components:
        raise TrotterError("component list is empty")
    norms = [c.norm for c in components]
    if any(norms[i] < norms[i + 1] for i in range(len(norms) - 1)):
        raise TrotterError("components must be ordered by descending norm")
    if eps <= 0:
        raise TrotterError("eps must be positive")
    if t < 0:
        raise TrotterError("t must be non-negative")
    m = len(components)
    L1 = norms[0]
    if t == 0.0 or L1 == 0.0:
        return TrotterPlan(k=1, r=0.0, n_reps=0, schedule=(), m=m, L1=L1,
                           L2=norms[1] if m > 1 else 0.0, t=t, eps=eps,
                           predicted_error=0.0)
    if m == 1:
        sched = (Segment(index=0, duration=t * L1),)
        return TrotterPlan(k=1, r=0.0, n_reps=1, schedule=sched, m=1, L1=L1,
                           L2=0.0, t=t, eps=eps, predicted_error=0.0)
    L2 = norms[1]
    k, r = select_order(eps, t, m, L1, L2)
    n_reps = max(1, math.ceil(r * L1))
    lam = t * L1 / n_reps
    sched = tuple(s2k_schedule(m, k, lam))
    total = {}
    for seg in sched:
        total[seg.index] = total.get(seg.index, 0.0) + seg.duration
    for j in range(m):
        if abs(total.get(j, 0.0) - lam) > 1e-12 * max(1.0, abs(lam)):
            raise TrotterError("schedule durations do not sum to the block length")
    return TrotterPlan(k=k, r=r, n_reps=n_reps, schedule=sched, m=m, L1=L1, L2=L2,
                       t=t, eps=eps, predicted_error=eps)


def block_superoperator(plan: TrotterPlan, components: list[Component]) -> np.ndarray:
    """Channel matrix of one S_2k block (segments applied left to right)."""
    d = components[0].d
    cache: dict[tuple[int, float], np.ndarray] = {}
    out = np.eye(d * d, dtype=complex)
    for seg in plan.schedule:
        key = (seg.index, seg.duration)
        if key not in cache:
            t_phys = seg.duration / plan.L1
            cache[key] = components[seg.index].channel(t_phys)
        out = cache[key] @ out
    return out


def run_plan(plan: TrotterPlan, components: list[Component], rho0: QuantumState) -> QuantumState:
    """Apply the full product [block]^n_reps to the initial state."""
    if len(components) != plan.m:
        raise TrotterError("component list does not match the plan")
    if components and components[0].d != rho0.d:
        raise TrotterError("state dimension does not match the components")
    if plan.n_reps == 0 or not plan.schedule:
        return rho0
    block = block_superoperator(plan, components)
    total = np.linalg.matrix_power(block, plan.n_reps)
    rho = unvec(total @ vec(rho0.rho), rho0.d)
    rho = 0.5 * (rho + np.conj(rho).T)
    return QuantumState(d=rho0.d, rho=rho)


@dataclass(frozen=True)
class CostReport:
    k: int
    r: float
    n_reps: int
    n_exp_actual: int
    n_exp_unmerged: int
    n_exp_bound_res: float | None
    n_exp_bound_closed_form: float | None
    negative_segments: bool

    def to_dict(self) -> dict:
        return {
            "k": self.k,
            "r": self.r,
            "n_reps": self.n_reps,
            "N_exp_actual": self.n_exp_actual,
            "N_exp_unmerged": self.n_exp_unmerged,
            "N_exp_bound_res": self.n_exp_bound_res,
            "N_exp_bound_closed_form": self.n_exp_bound_closed_form,
            "negative_segments": self.negative_segments,
        }


def nexp_report(plan: TrotterPlan) -> CostReport:
    """Actual exponential counts next to both printed cost bounds."""
    if plan.m <= 1 or plan.t == 0.0 or plan.L2 <= 0.0:
        bound_res = None
        bound_closed = None
    else:
        bound_res = nexp_bound_res(plan.m, plan.k, plan.t, plan.eps, plan.L1, plan.L2)
        bound_closed = nexp_bound_closed_form(plan.m, plan.t, plan.eps, plan.L1, plan.L2)
    return CostReport(
        k=plan.k,
        r=plan.r,
        n_reps=plan.n_reps,
        n_exp_actual=plan.actual_exponentials(),
        n_exp_unmerged=plan.n_exp,
        n_exp_bound_res=bound_res,
        n_exp_bound_closed_form=bound_closed,
        negative_segments=plan.has_negative_segments(),
    )


def simulate(g: GksGenerator, rho0: QuantumState, t: float, eps: float, seed: int = 0):
    """Decompose, plan, and run; returns (state, plan, components)."""
    from .decompose import decompose_generator

    H, plans = decompose_generator(g)
    components = prepare_components(H, plans, g.basis, seed=seed)
    if not components:
        plan = TrotterPlan(k=1, r=0.0, n_reps=0, schedule=(), m=0, L1=0.0, L2=0.0,
                           t=t, eps=eps, predicted_error=0.0)
        return rho0, plan, []
    plan = build_plan(components, eps, t)
    return run_plan(plan, components, rho0), plan, components

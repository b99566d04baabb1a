"""
The long-time engine.

An attractor is an operator X with U_K X U_K^dag = lam X for every edge
configuration K (|lam| = 1); lam is the eigenvalue of the channel on X.
For an orthonormal attractor basis the asymptotic state is

    rho_as(t) = sum lam^t X Tr(rho0 X^dag).

The minimal attractor space is spanned by the p-attractors |phi_i><phi_j|
built from common eigenstates plus the identity on their complement. The
general solver (small lattices only) computes the full space and is the
completeness check for that minimal subspace.
"""
from __future__ import annotations

import logging
from dataclasses import dataclass, field
from typing import Dict, List, Optional, Sequence, Tuple, Union

import numpy as np
import scipy.linalg
import scipy.sparse as sp
from numpy.typing import NDArray
from scipy.sparse.csgraph import connected_components

from perqwalk.asymptotics.analytic import analytic_states, has_analytic_families
from perqwalk.asymptotics.eigenstates import (
    EIGENSTATE_TOL,
    N_RANDOM_CONFIGS,
    CommonEigenstate,
    eigenstate_residual,
    state_matrix,
    verification_configs,
)
from perqwalk.config.settings import get_settings
from perqwalk.errors import (
    AttractorCompletenessError,
    CertificationError,
    GuardError,
    NotOrthonormalError,
)
from perqwalk.utils.linalg import cluster_phases, fix_phase, max_abs, orthonormalize
from perqwalk.utils.tracing import trace_block, traced
from perqwalk.walk.channel import (
    EdgeConfiguration,
    PercolationChannel,
    PercolationModel,
    StepUnitary,
)
from perqwalk.walk.coin import CoinOperator, distinct_alphas, make_coin
from perqwalk.walk.evolution import check_dense_guard, marginal_from_diagonal
from perqwalk.walk.lattice import LatticeSpec, slot_table
from perqwalk.walk.states import DensityOperator, PositionDistribution, StateVector


logger = logging.getLogger("perqwalk.attractors")

PERIPHERAL_TOL = 1e-8
SNAP_TOL = 1e-6
ATTRACTOR_TOL = 1e-8
ORTHONORMAL_TOL = 1e-10
NULL_TOL = 1e-9

ANALYZED_COINS = ("hadamard2d", "grover", "fourier")


# ---- Types ------------------------------------------------------------------


@dataclass(frozen=True, eq=False)
class PAttractor:
    """
    Y = |phi_left><phi_right|, an attractor for lam = a_left * conj(a_right)
    where a_k is the measured eigenvalue of phi_k.
    """
    lam: complex
    left: int
    right: int
    left_state: CommonEigenstate
    right_state: CommonEigenstate

    def dense(self) -> NDArray[np.complex128]:
        return np.outer(self.left_state.vector, self.right_state.vector.conj())


@dataclass(frozen=True, eq=False)
class Attractor:
    """
    One basis element of the attractor space.

    - lam: channel eigenvalue, unit modulus
    - kind: "pair" (a p-attractor, stored factored), "complement" (the
      identity on the complement of the common eigenstates, normalized) or
      "dense" (explicit matrix)
    """
    lam: complex
    kind: str
    pair: Optional[PAttractor] = None
    matrix: Optional[NDArray[np.complex128]] = None


@dataclass(frozen=True, eq=False)
class AsymptoticDecomposition:
    """
    Projector P = Phi Phi^dag onto the common eigenstates, kept factored.

    - vectors: (d, n) orthonormal columns
    - alphas: their eigenvalues
    - certified: attractor space proven equal to p-attractors + identity
    """
    spec: LatticeSpec
    vectors: NDArray[np.complex128]
    alphas: NDArray[np.complex128]
    certified: bool = False

    @property
    def rank(self) -> int:
        return int(self.vectors.shape[1])

    @property
    def complement_trace(self) -> int:
        return self.spec.dim - self.rank

    def projector(self) -> NDArray[np.complex128]:
        return self.vectors @ self.vectors.conj().T


@dataclass(frozen=True, eq=False)
class AttractorBasis:
    """
    Hilbert-Schmidt orthonormal attractors.

    - status: "certified" (proven complete), "minimal" (p-attractors +
      identity, completeness assumed) or "general" (output of the general
      solver)
    - general_dimension: dimension found by the general solver, when run
    """
    spec: LatticeSpec
    attractors: List[Attractor]
    states: List[CommonEigenstate] = field(default_factory=list)
    status: str = "minimal"
    general_dimension: Optional[int] = None

    @property
    def dimension(self) -> int:
        return len(self.attractors)

    @property
    def lambdas(self) -> List[complex]:
        return [a.lam for a in self.attractors]

    @property
    def certified(self) -> bool:
        return self.status == "certified"

    def state_matrix(self) -> NDArray[np.complex128]:
        return state_matrix(self.states, self.spec.dim)

    def operator(self, k: int) -> NDArray[np.complex128]:
        """Dense matrix of attractor k."""
        att = self.attractors[k]
        if att.kind == "pair":
            return att.pair.dense()
        if att.kind == "complement":
            phi = self.state_matrix()
            comp = np.eye(self.spec.dim, dtype=np.complex128) - phi @ phi.conj().T
            return comp / np.sqrt(self.spec.dim - phi.shape[1])
        return att.matrix

    def decomposition(self) -> AsymptoticDecomposition:
        phi = self.state_matrix()
        alphas = np.array([s.alpha for s in self.states], dtype=np.complex128)
        return AsymptoticDecomposition(self.spec, phi, alphas, certified=self.certified)

    def check_orthonormal(self, tol: float = ORTHONORMAL_TOL) -> None:
        """
        Gram = I without forming an n^2 x n^2 Gram for the pair part: pairs
        are orthonormal iff the states are, the complement is orthogonal to
        them by construction, dense attractors are checked explicitly.
        """
        phi = self.state_matrix()
        gram = phi.conj().T @ phi
        err = max_abs(gram - np.eye(phi.shape[1]))
        if err > tol:
            raise NotOrthonormalError(f"common eigenstates not orthonormal: |Phi^dag Phi - I| = {err:.3e}")
        dense = [a.matrix for a in self.attractors if a.kind == "dense"]
        if dense:
            vecs = np.stack([m.reshape(-1) for m in dense], axis=1)
            err = max_abs(vecs.conj().T @ vecs - np.eye(len(dense)))
            if err > tol:
                raise NotOrthonormalError(f"dense attractors not orthonormal: |G - I| = {err:.3e}")
            if phi.shape[1]:
                cross = max(max_abs(phi.conj().T @ m @ phi) for m in dense)
                if cross > tol:
                    raise NotOrthonormalError(f"dense attractors overlap p-attractors: {cross:.3e}")

    def to_json(self) -> Dict[str, object]:
        include_dense = self.spec.dim <= get_settings().general_guard
        items: List[Dict[str, object]] = []
        for att in self.attractors:
            item: Dict[str, object] = {"kind": att.kind, "lambda": _pair(att.lam)}
            if att.kind == "pair":
                item["left"] = att.pair.left
                item["right"] = att.pair.right
            elif att.kind == "dense" and include_dense:
                item["matrix"] = [[_pair(z) for z in row] for row in att.matrix]
            items.append(item)
        return {
            "schema": 1,
            "lattice": str(self.spec),
            "status": self.status,
            "dimension": self.dimension,
            "general_dimension": self.general_dimension,
            "states": [s.to_json() for s in self.states],
            "attractors": items,
        }


def _pair(z: complex) -> List[float]:
    return [float(np.real(z)), float(np.imag(z))]


# ---- Verification helpers ---------------------------------------------------

def attractor_residual(unitary: StepUnitary, x: NDArray[np.complex128], lam: complex) -> float:
    """||U_K X - lam X U_K||_max."""
    return max_abs(unitary.apply(x) - lam * unitary.apply_right(x))


def p_attractor_residual(
    pattr: PAttractor,
    unitary: StepUnitary,
    other: StepUnitary,
) -> float:
    """||U_K' Y - lam Y U_K||_max, which p-attractors satisfy for any K, K'."""
    y = pattr.dense()
    return max_abs(other.apply(y) - pattr.lam * unitary.apply_right(y))


# ---- Common eigenstates from B ----------------------------------------------


def _basis_channel(ch: PercolationChannel) -> PercolationChannel:
    # The set of configuration unitaries does not depend on p; at the
    # extremes B is a single unitary and has spurious peripheral vectors.
    if 0.0 < ch.p < 1.0:
        return ch
    return PercolationChannel(ch.spec, ch.coin, PercolationModel(0.5))


@traced("find_common_eigenstates_numeric")
def find_common_eigenstates_numeric(
    ch: PercolationChannel,
    *,
    n_random: int = N_RANDOM_CONFIGS,
) -> List[CommonEigenstate]:
    """
    Unit-modulus eigenvectors of the averaged step B, re-verified against
    the generator configurations and random ones. Failing directions are
    dropped and logged.
    """
    check_dense_guard(ch.spec)
    work = _basis_channel(ch)
    b = work.averaged_step().to_dense()
    values = np.linalg.eigvals(b)
    peripheral = values[np.abs(np.abs(values) - 1.0) <= PERIPHERAL_TOL]
    if peripheral.size == 0:
        logger.info("no peripheral eigenvalues of B on %s", ch.spec)
        return []

    candidates = distinct_alphas(ch.coin)
    hit = set()
    for value in peripheral:
        dist = [abs(value - a) for a in candidates]
        k = int(np.argmin(dist))
        if dist[k] > SNAP_TOL:
            logger.warning("peripheral eigenvalue %s of B is not an R*C eigenvalue; ignored", value)
            continue
        hit.add(k)

    configs = verification_configs(ch.spec, n_random)
    out: List[CommonEigenstate] = []
    identity = np.eye(ch.dim)
    for k in sorted(hit):
        alpha = candidates[k]
        space = scipy.linalg.null_space(b - alpha * identity, rcond=NULL_TOL)
        if space.shape[1] == 0:
            continue
        space = orthonormalize(space)
        residual = eigenstate_residual(work, space, np.full(space.shape[1], alpha), configs)
        bad = residual > EIGENSTATE_TOL
        if bad.any():
            logger.warning(
                "discarding %d of %d candidate eigenstates for alpha=%s (worst residual %.3e)",
                int(bad.sum()), space.shape[1], np.round(alpha, 12), float(residual.max()),
            )
        kept = [space[:, k] for k in np.flatnonzero(~bad)]
        for i, vec in enumerate(kept):
            out.append(CommonEigenstate(fix_phase(vec), alpha, f"numeric[{np.angle(alpha):.6f},{i}]"))
    logger.info("%d common eigenstates on %s (%s)", len(out), ch.spec, ch.coin.kind)
    return out


# ---- p-attractors -----------------------------------------------------------


def p_attractor_basis(states: Sequence[CommonEigenstate], ch: PercolationChannel) -> List[PAttractor]:
    """
    All n^2 ordered pairs |phi_i><phi_j|, each labelled with lam measured on
    the full-configuration unitary, grouped by lam (phase order).
    """
    if not states:
        return []
    phi = np.stack([s.vector for s in states], axis=1)
    u_full = ch.unitary(EdgeConfiguration.full(ch.spec))
    measured = np.einsum("ki,ki->i", phi.conj(), u_full.apply(phi))
    measured = measured / np.abs(measured)
    pairs: List[PAttractor] = []
    for i, left in enumerate(states):
        for j, right in enumerate(states):
            lam = complex(measured[i] * np.conj(measured[j]))
            pairs.append(PAttractor(lam, i, j, left, right))
    order = [k for group in cluster_phases(np.array([p.lam for p in pairs]), SNAP_TOL) for k in group]
    return [pairs[k] for k in order]


def _states_of(pbasis: Sequence[PAttractor]) -> List[CommonEigenstate]:
    diag = {p.left: p.left_state for p in pbasis if p.left == p.right}
    return [diag[k] for k in sorted(diag)]


# ---- General solver ---------------------------------------------------------


def _shift_classes(spec: LatticeSpec) -> Tuple[int, NDArray[np.int64]]:
    """
    Equivalence classes of matrix elements X[a, b] forced equal by the
    shift conditions. For slots x, y on different edges every image pair
    reachable by some configuration must carry the same value; on a shared
    edge only (step, step) ~ (reflect, reflect). Wall slots have the reflect
    image only (their step entry already points there).
    """
    table = slot_table(spec)
    d = spec.dim
    x, y = np.divmod(np.arange(d * d), d)
    step, reflect, edge = table.step, table.reflect, table.edge
    ff = step[x] * d + step[y]
    rr = reflect[x] * d + reflect[y]
    fr = step[x] * d + reflect[y]
    rf = reflect[x] * d + step[y]
    distinct = ~((edge[x] == edge[y]) & (edge[x] >= 0))
    rows = np.concatenate([ff, ff[distinct], ff[distinct]])
    cols = np.concatenate([rr, fr[distinct], rf[distinct]])
    graph = sp.coo_matrix((np.ones(rows.size), (rows, cols)), shape=(d * d, d * d))
    return connected_components(graph, directed=False)


def _candidate_lambdas(coin: CoinOperator) -> List[complex]:
    alphas = distinct_alphas(coin)
    products = np.array([a * np.conj(b) for a in alphas for b in alphas])
    return [complex(products[g[0]]) for g in cluster_phases(products, SNAP_TOL)]


@traced("general_attractor_basis")
def general_attractor_basis(ch: PercolationChannel, *, n_random: int = 10) -> AttractorBasis:
    """
    Full attractor space on a small lattice.

    X is an attractor iff its elements satisfy the shift equalities and
    (I (x) RC) X (I (x) RC)^dag = lam X. The equalities are solved as
    connected components (orthonormal class indicators Q); on span(Q) the
    local condition is the null space of the PSD form
    2 I - conj(lam) Q^dag L Q - lam Q^dag L^dag Q, L = A (x) conj(A).
    """
    spec = ch.spec
    d = spec.dim
    limit = get_settings().general_guard
    if d > limit:
        raise GuardError("general", limit, d)

    with trace_block("shift_classes", extra={"d": d}):
        n_classes, labels = _shift_classes(spec)
    sizes = np.bincount(labels, minlength=n_classes)
    q = sp.csr_matrix(
        (1.0 / np.sqrt(sizes[labels]), (np.arange(d * d), labels)),
        shape=(d * d, n_classes),
    )
    a = sp.kron(sp.identity(spec.n_sites), sp.csr_matrix(ch.coin.rc)).tocsr()
    local = sp.kron(a, a.conj()).tocsr()
    aq = np.asarray((q.conj().T @ (local @ q)).todense())

    configs = verification_configs(spec, n_random)
    unitaries = [ch.unitary(k) for k in configs]
    attractors: List[Attractor] = []
    for lam in _candidate_lambdas(ch.coin):
        form = 2.0 * np.eye(n_classes) - np.conj(lam) * aq - lam * aq.conj().T
        form = 0.5 * (form + form.conj().T)
        evals, evecs = np.linalg.eigh(form)
        null = evecs[:, evals < NULL_TOL * max(1.0, float(evals[-1]))]
        for k in range(null.shape[1]):
            x = np.asarray(q @ null[:, k]).reshape(d, d)
            worst = max(attractor_residual(u, x, lam) for u in unitaries)
            if worst > ATTRACTOR_TOL:
                raise CertificationError(
                    f"general solver produced an attractor failing verification "
                    f"(lambda={lam:.6f}, residual {worst:.3e})"
                )
            attractors.append(Attractor(lam, "dense", matrix=x))
    logger.info("general attractor space on %s (%s): dimension %d", spec, ch.coin.kind, len(attractors))
    return AttractorBasis(spec, attractors, status="general", general_dimension=len(attractors))


# ---- Minimal subspace -------------------------------------------------------


@traced("complete_basis")
def complete_basis(pbasis: Sequence[PAttractor], ch: PercolationChannel) -> AttractorBasis:
    """
    p-attractors plus the identity restricted to the complement of the
    common eigenstates (P~ / sqrt(Tr P~)).

    Within the general-solver guard the dimension is cross-checked and a
    mismatch raises AttractorCompletenessError. Above it the basis counts as
    certified for the analyzed coins and as "minimal" otherwise.
    """
    states = _states_of(pbasis)
    d = ch.dim
    n = len(states)
    attractors = [Attractor(p.lam, "pair", pair=p) for p in pbasis]
    if n < d:
        attractors.append(Attractor(1.0 + 0.0j, "complement"))

    general_dim: Optional[int] = None
    if d <= get_settings().general_guard:
        general_dim = general_attractor_basis(ch).dimension
        if general_dim != len(attractors):
            raise AttractorCompletenessError(len(attractors), general_dim)
        status = "certified"
    elif ch.coin.kind in ANALYZED_COINS:
        status = "certified"
    else:
        status = "minimal"
        logger.warning(
            "attractor space on %s assumed to be p-attractors + identity (d=%d above general guard)",
            ch.spec, d,
        )
    basis = AttractorBasis(ch.spec, attractors, list(states), status, general_dim)
    basis.check_orthonormal()
    return basis


# ---- Asymptotic states ------------------------------------------------------


@dataclass(frozen=True, eq=False)
class AsymptoticState:
    """
    rho_as in factored form:

        V W V^dag + c (I - Phi Phi^dag) + D

    - vectors: V, (d, n)
    - weights: W, (n, n)
    - projector_vectors: Phi spanning the same space as V (orthonormal)
    - complement_weight: c
    - dense: D, the sum of any dense-attractor terms (or None)
    """
    spec: LatticeSpec
    vectors: NDArray[np.complex128]
    weights: NDArray[np.complex128]
    projector_vectors: NDArray[np.complex128]
    complement_weight: float
    dense: Optional[NDArray[np.complex128]] = None

    def diagonal(self) -> NDArray[np.float64]:
        diag = np.real(np.einsum("ki,ki->k", self.vectors @ self.weights, self.vectors.conj()))
        if self.complement_weight:
            in_p = np.sum(np.abs(self.projector_vectors) ** 2, axis=1)
            diag = diag + self.complement_weight * (1.0 - in_p)
        if self.dense is not None:
            diag = diag + np.real(np.diagonal(self.dense))
        return diag

    def marginal(self) -> PositionDistribution:
        """Position marginal without materializing any d x d matrix."""
        return marginal_from_diagonal(self.spec, self.diagonal())

    def density(self) -> DensityOperator:
        v = self.vectors
        mat = v @ self.weights @ v.conj().T
        if self.complement_weight:
            phi = self.projector_vectors
            mat = mat + self.complement_weight * (np.eye(self.spec.dim) - phi @ phi.conj().T)
        if self.dense is not None:
            mat = mat + self.dense
        return DensityOperator(self.spec, mat)


RhoLike = Union[DensityOperator, StateVector]


def _overlaps(phi: NDArray[np.complex128], rho0: RhoLike) -> Tuple[NDArray[np.complex128], float]:
    """(Phi^dag rho0 Phi, Tr rho0)."""
    if isinstance(rho0, StateVector):
        amp = phi.conj().T @ rho0.amplitudes
        return np.outer(amp, amp.conj()), float(np.vdot(rho0.amplitudes, rho0.amplitudes).real)
    return phi.conj().T @ rho0.matrix @ phi, float(np.real(rho0.trace))


def _dense_rho(rho0: RhoLike) -> NDArray[np.complex128]:
    if isinstance(rho0, StateVector):
        return np.outer(rho0.amplitudes, rho0.amplitudes.conj())
    return rho0.matrix


@traced("asymptotic_state")
def asymptotic_state(basis: AttractorBasis, rho0: RhoLike, t: int = 0) -> AsymptoticState:
    """
    rho_as(t) = sum lam^t X Tr(rho0 X^dag). Pair attractors only need the
    overlaps <phi_i|rho0|phi_j>; the complement term needs Tr(rho0 P~).
    """
    if rho0.spec != basis.spec:
        raise ValueError(f"state lives on {rho0.spec}, basis on {basis.spec}")
    basis.check_orthonormal()
    phi = basis.state_matrix()
    n = phi.shape[1]
    overlaps, trace = _overlaps(phi, rho0)

    weights = np.zeros((n, n), dtype=np.complex128)
    has_complement = False
    dense_atts: List[Attractor] = []
    for att in basis.attractors:
        if att.kind == "pair":
            i, j = att.pair.left, att.pair.right
            weights[i, j] = att.lam ** t * overlaps[i, j]
        elif att.kind == "complement":
            has_complement = True
        else:
            dense_atts.append(att)

    complement_weight = 0.0
    if has_complement:
        complement_weight = float(np.real(trace - np.trace(overlaps))) / (basis.spec.dim - n)

    dense: Optional[NDArray[np.complex128]] = None
    if dense_atts:
        rho = _dense_rho(rho0)
        dense = np.zeros((basis.spec.dim, basis.spec.dim), dtype=np.complex128)
        for att in dense_atts:
            dense += att.lam ** t * np.vdot(att.matrix, rho) * att.matrix

    return AsymptoticState(basis.spec, phi, weights, phi, complement_weight, dense)


def asymptotic_marginal(basis: AttractorBasis, rho0: RhoLike, t: int = 0) -> PositionDistribution:
    return asymptotic_state(basis, rho0, t).marginal()


@traced("asymptotic_fastpath")
def asymptotic_fastpath(
    decomp: AsymptoticDecomposition,
    ch: PercolationChannel,
    rho0: RhoLike,
    t: int = 0,
) -> AsymptoticState:
    """
    U^t P rho0 P U^dag^t + P~ Tr(rho0 P~) / Tr P~ with U = I (x) RC, the
    cheapest step unitary. Exact only when the attractor space is certified
    to be p-attractors + identity.
    """
    if not decomp.certified:
        raise CertificationError(
            "fastpath needs an attractor space certified as p-attractors + identity"
        )
    phi = decomp.vectors
    overlaps, trace = _overlaps(phi, rho0)
    rc_t = np.linalg.matrix_power(ch.coin.rc, t)
    n = phi.shape[1]
    evolved = (rc_t @ phi.reshape(ch.spec.n_sites, 4, n)).reshape(ch.dim, n)
    weight = 0.0
    if decomp.complement_trace:
        weight = float(np.real(trace - np.trace(overlaps))) / decomp.complement_trace
    return AsymptoticState(ch.spec, evolved, overlaps, phi, weight)


# ---- Dimension accounting ---------------------------------------------------


def closed_form_dimension(spec: LatticeSpec, coin_kind: str) -> Optional[int]:
    """
    Attractor-space dimension from the lattice shape, or None where no closed
    form is known (mixed-boundary Grover lattices).
    """
    M, N = spec.M, spec.N
    if coin_kind == "hadamard2d":
        n12 = 2 if (not spec.periodic_s or M % 2 == 0) else 0
        n4 = M if (not spec.periodic_t or N % 2 == 0) else 0
        return 1 + (n12 + N + n4) ** 2
    if coin_kind == "grover":
        if spec.is_carpet:
            return (M * N + M + N + 1) ** 2 + 1
        if spec.is_torus:
            if M % 2 or N % 2:
                return (M * N + 1) ** 2 + 1
            return (M * N + 2) ** 2 + 1
        return None
    if coin_kind == "fourier":
        ok_s = not spec.periodic_s or M % 8 == 0
        ok_t = not spec.periodic_t or N % 8 == 0
        return 17 if (ok_s and ok_t) else 1
    raise ValueError(
        f"No closed form for coin '{coin_kind}'. Known coins: {', '.join(ANALYZED_COINS)}"
    )


@dataclass(frozen=True)
class DimensionReport:
    """
    - analytic_count: closed-form table value, or the analytic family rank
      n^2 + 1 where no closed form exists (closed_form = False); None for
      coins without analytic families
    - numeric_count: n^2 + 1 from the numeric common-eigenstate finder
    - general_count: general solver dimension (small lattices only)
    - lambdas: (lambda, multiplicity) pairs of the minimal basis
    """
    lattice: str
    coin: str
    analytic_count: Optional[int]
    numeric_count: int
    match: bool
    closed_form: bool
    general_count: Optional[int]
    lambdas: List[Tuple[complex, int]]


def lambda_multiset(lambdas: Sequence[complex]) -> List[Tuple[complex, int]]:
    if not lambdas:
        return []
    values = np.array(lambdas, dtype=np.complex128)
    out: List[Tuple[complex, int]] = []
    for group in cluster_phases(values, SNAP_TOL):
        lam = complex(np.mean(values[group]))
        lam = complex(np.round(lam.real, 12) + 1j * np.round(lam.imag, 12))
        out.append((lam, len(group)))
    return out


def minimal_dimension(n_states: int, d: int) -> int:
    return n_states ** 2 + (1 if n_states < d else 0)


@traced("dimension_report")
def dimension_report(
    spec: LatticeSpec,
    coin: Union[str, CoinOperator],
    *,
    p: float = 0.5,
) -> DimensionReport:
    if isinstance(coin, str):
        coin = make_coin(coin)
    ch = PercolationChannel(spec, coin, PercolationModel(p))
    numeric_states = find_common_eigenstates_numeric(ch)
    numeric_count = minimal_dimension(len(numeric_states), spec.dim)

    table: Optional[int] = None
    analytic_count: Optional[int] = None
    if has_analytic_families(coin.kind):
        table = closed_form_dimension(spec, coin.kind)
        if table is None:
            analytic_count = minimal_dimension(len(analytic_states(spec, coin)), spec.dim)
        else:
            analytic_count = table

    general_count: Optional[int] = None
    if spec.dim <= get_settings().general_guard:
        general_count = general_attractor_basis(ch).dimension

    match = analytic_count in (None, numeric_count) and general_count in (None, numeric_count)
    pbasis = p_attractor_basis(numeric_states, ch)
    lambdas = [pa.lam for pa in pbasis] + ([1.0 + 0j] if len(numeric_states) < spec.dim else [])
    return DimensionReport(
        lattice=str(spec),
        coin=coin.kind,
        analytic_count=analytic_count,
        numeric_count=numeric_count,
        match=match,
        closed_form=table is not None,
        general_count=general_count,
        lambdas=lambda_multiset(lambdas),
    )


# ---- Entry point ------------------------------------------------------------


def attractor_basis_for(ch: PercolationChannel, *, analytic: bool = True) -> AttractorBasis:
    """
    Attractor basis for a channel: closed-form common eigenstates for the
    named coins (numeric ones otherwise, or when `analytic` is False),
    their p-attractors and the complement identity.
    """
    if analytic and has_analytic_families(ch.coin.kind):
        states = analytic_states(ch.spec, ch.coin)
    else:
        states = find_common_eigenstates_numeric(ch)
    return complete_basis(p_attractor_basis(states, ch), ch)

"""Quantum and hidden-variable generators of behaviour points.

Provides density matrices with validation, projective measurement sets,
Born-rule evaluation of full setting-conditional distributions, multinomial
sampling with binomial standard errors, partial trace, trace distance and
Uhlmann fidelity, two-source hidden-variable models, the two scenarios of the
key-distribution protocol (honest source vs intercepted line), and the report
chaining the l2 / l1 norms of a behaviour difference against the trace
distances of the underlying states.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import product
from typing import Optional

import numpy as np

from .strategies import (
    BehaviourPoint,
    DeterministicStrategy,
    FULL_26,
    REDUCED_8,
    FULL_SHAPE,
    REDUCED_SHAPE,
    ScenarioShape,
)

HERMITICITY_TOL = 1e-10
TRACE_TOL = 1e-10
POSITIVITY_TOL = 1e-10
COMPLETENESS_TOL = 1e-10
NORMALIZATION_TOL = 1e-8
NO_SIGNALLING_TOL = 1e-10


def _as_complex_matrix(matrix) -> np.ndarray:
    m = np.asarray(matrix, dtype=complex)
    if m.ndim != 2 or m.shape[0] != m.shape[1]:
        raise ValueError("expected a square matrix")
    return m


@dataclass(frozen=True)
class DensityMatrix:
    """A validated quantum state.

    Construction checks Hermiticity, unit trace and positivity (eigenvalues
    above -1e-10); each violation raises ValueError naming the failed
    property.
    """

    matrix: np.ndarray

    def __post_init__(self) -> None:
        m = _as_complex_matrix(self.matrix)
        herm = np.abs(m - m.conj().T).max()
        if herm > HERMITICITY_TOL:
            raise ValueError(f"density matrix is not Hermitian (residual {herm:.3e})")
        trace = m.trace()
        if abs(trace - 1.0) > TRACE_TOL:
            raise ValueError(f"density matrix trace is not 1 (got {trace:.12g})")
        smallest = float(np.linalg.eigvalsh(m).min())
        if smallest < -POSITIVITY_TOL:
            raise ValueError(f"density matrix has a negative eigenvalue ({smallest:.3e})")
        m.flags.writeable = False
        object.__setattr__(self, "matrix", m)

    @property
    def dim(self) -> int:
        return self.matrix.shape[0]

    def to_json_dict(self) -> dict:
        return {
            "dim": self.dim,
            "re": self.matrix.real.tolist(),
            "im": self.matrix.imag.tolist(),
        }

    @classmethod
    def from_json_dict(cls, data: dict) -> "DensityMatrix":
        try:
            re = np.array(data["re"], dtype=float)
            im = np.array(data["im"], dtype=float)
        except (KeyError, TypeError):
            raise ValueError("density matrix JSON needs 're' and 'im' entry tables")
        if re.shape != im.shape:
            raise ValueError("real and imaginary parts differ in shape")
        return cls(re + 1j * im)


@dataclass(frozen=True)
class MeasurementSet:
    """Projective measurements, one list of settings per party.

    ``projectors[party][setting][outcome]`` is a projector on that party's
    local space.  Every setting must be a complete orthogonal projective
    measurement; all parties must share the same setting and outcome counts.
    """

    projectors: tuple[tuple[tuple[np.ndarray, ...], ...], ...]

    def __post_init__(self) -> None:
        if not self.projectors:
            raise ValueError("measurement set has no parties")
        frozen_parties = []
        m = len(self.projectors[0])
        d = len(self.projectors[0][0])
        for p, party in enumerate(self.projectors):
            if len(party) != m:
                raise ValueError("all parties must have the same number of settings")
            dim = None
            frozen_settings = []
            for s, setting in enumerate(party):
                if len(setting) != d:
                    raise ValueError("all settings must have the same number of outcomes")
                ops = tuple(_as_complex_matrix(op) for op in setting)
                for op in ops:
                    op.flags.writeable = False
                if dim is None:
                    dim = ops[0].shape[0]
                if any(op.shape != (dim, dim) for op in ops):
                    raise ValueError(f"party {p}: projector dimensions disagree across settings")
                total = sum(ops)
                if np.abs(total - np.eye(dim)).max() > COMPLETENESS_TOL:
                    raise ValueError(f"party {p} setting {s}: projectors do not sum to identity")
                for a, op in enumerate(ops):
                    if np.abs(op @ op - op).max() > COMPLETENESS_TOL:
                        raise ValueError(f"party {p} setting {s} outcome {a}: not a projector")
                frozen_settings.append(ops)
            frozen_parties.append(tuple(frozen_settings))
        object.__setattr__(self, "projectors", tuple(frozen_parties))

    @property
    def n_parties(self) -> int:
        return len(self.projectors)

    @property
    def settings_per_party(self) -> int:
        return len(self.projectors[0])

    @property
    def outcomes_per_setting(self) -> int:
        return len(self.projectors[0][0])

    @property
    def party_dims(self) -> tuple[int, ...]:
        return tuple(party[0][0].shape[0] for party in self.projectors)

    @property
    def total_dim(self) -> int:
        return int(np.prod(self.party_dims))


_KET0 = np.array([1.0, 0.0], dtype=complex)
_KET1 = np.array([0.0, 1.0], dtype=complex)
_KET_PLUS = (_KET0 + _KET1) / np.sqrt(2.0)
_KET_MINUS = (_KET0 - _KET1) / np.sqrt(2.0)


def _projector(ket: np.ndarray) -> np.ndarray:
    return np.outer(ket, ket.conj())


def zx_qubit_measurements(parties: int) -> MeasurementSet:
    """Standard/Hadamard qubit measurement pair for each of ``parties`` parties.

    Setting 0 measures in the computational (Z) basis, setting 1 in the
    Hadamard (X) basis; outcome 0 is the +1 eigenvector in both cases.
    """
    if parties < 1:
        raise ValueError("need at least one party")
    z_basis = (_projector(_KET0), _projector(_KET1))
    x_basis = (_projector(_KET_PLUS), _projector(_KET_MINUS))
    return MeasurementSet(tuple((z_basis, x_basis) for _ in range(parties)))


@dataclass(frozen=True)
class FullDistribution:
    """Setting-conditional outcome distribution of an (n, m, d) scenario.

    ``table`` has n setting axes followed by n outcome axes; every
    setting-conditional slice must be a probability distribution.
    """

    shape: ScenarioShape
    table: np.ndarray

    def __post_init__(self) -> None:
        n, m, d = self.shape.n, self.shape.m, self.shape.d
        t = np.asarray(self.table, dtype=float)
        if t.shape != (m,) * n + (d,) * n:
            raise ValueError(
                f"table shape {t.shape} does not match scenario {(m,) * n + (d,) * n}"
            )
        if t.min() < -NORMALIZATION_TOL:
            raise ValueError(f"negative probability {t.min():.3e} in distribution")
        t = np.clip(t, 0.0, None)
        sums = t.reshape((m,) * n + (d**n,)).sum(axis=-1)
        worst = np.abs(sums - 1.0).max()
        if worst > NORMALIZATION_TOL:
            raise ValueError(f"a setting slice sums to 1 +/- {worst:.3e}, beyond tolerance")
        t.flags.writeable = False
        object.__setattr__(self, "table", t)

    def probability(self, settings: tuple[int, ...], outcomes: tuple[int, ...]) -> float:
        return float(self.table[tuple(settings) + tuple(outcomes)])

    def to_json_dict(self) -> dict:
        n, m, d = self.shape.n, self.shape.m, self.shape.d
        entries = {}
        for settings in product(range(m), repeat=n):
            block = self.table[settings].reshape(d**n)
            entries[",".join(map(str, settings))] = block.tolist()
        return {
            "shape": {"n": n, "m": m, "d": d},
            "outcome_order": "row-major over outcome tuples",
            "table": entries,
        }


def behaviour_from_state(
    rho: DensityMatrix, measurements: MeasurementSet, shape: ScenarioShape
) -> FullDistribution:
    """Born-rule distribution p(outcomes | settings) = Tr(rho * joint projector)."""
    if measurements.n_parties != shape.n:
        raise ValueError("measurement set and scenario disagree on party count")
    if measurements.settings_per_party != shape.m:
        raise ValueError("measurement set and scenario disagree on setting count")
    if measurements.outcomes_per_setting != shape.d:
        raise ValueError("measurement set and scenario disagree on outcome count")
    if rho.dim != measurements.total_dim:
        raise ValueError(
            f"state dimension {rho.dim} does not match measurement space {measurements.total_dim}"
        )
    n, m, d = shape.n, shape.m, shape.d
    table = np.zeros((m,) * n + (d,) * n)
    for settings in product(range(m), repeat=n):
        for outcomes in product(range(d), repeat=n):
            joint = np.array([[1.0 + 0.0j]])
            for party, (x, a) in enumerate(zip(settings, outcomes)):
                joint = np.kron(joint, measurements.projectors[party][x][a])
            p = float(np.real(np.trace(rho.matrix @ joint)))
            table[settings + outcomes] = max(p, 0.0)
    return FullDistribution(shape, table)


def _fixed_outcome_index(d: int) -> int:
    # Behaviour coordinates track the probability of outcome 0.
    return 0


def collapse(distribution: FullDistribution) -> BehaviourPoint:
    """Compress a full distribution to the canonical behaviour coordinates.

    Single-wing coordinates are outcome-0 marginals averaged over the other
    parties' settings (identical by no-signalling when it holds); composite
    coordinates are joint outcome-0 probabilities at the matching settings.
    Supports the two canonical scenarios: (3, 2, 2) -> 26 coordinates and
    (2, 2, 2) -> 8 coordinates.
    """
    shape = distribution.shape
    n, m, d = shape.n, shape.m, shape.d
    if (n, m, d) not in ((3, 2, 2), (2, 2, 2)):
        raise ValueError(f"no canonical behaviour representation for scenario {(n, m, d)}")
    t = distribution.table
    out0 = _fixed_outcome_index(d)

    def marginal(party: int, setting: int) -> float:
        # P(outcome_party = 0 | setting_party = setting), averaged over the
        # other parties' settings.
        outcome_axes = tuple(n + i for i in range(n) if i != party)
        joint = t.sum(axis=outcome_axes)  # settings axes + party outcome axis
        sliced = np.take(joint, out0, axis=n)
        sliced = np.take(sliced, setting, axis=party)
        return float(sliced.mean())

    def pair(pa: int, sa: int, pb: int, sb: int) -> float:
        outcome_axes = tuple(n + i for i in range(n) if i not in (pa, pb))
        joint = t.sum(axis=outcome_axes) if outcome_axes else t
        first, second = sorted((pa, pb))
        sliced = np.take(joint, out0, axis=n + 1)
        sliced = np.take(sliced, out0, axis=n)
        sliced = np.take(sliced, sb if second == pb else sa, axis=second)
        sliced = np.take(sliced, sa if first == pa else sb, axis=first)
        return float(sliced.mean())

    if n == 2:
        coords = [marginal(0, 0), marginal(0, 1), marginal(1, 0), marginal(1, 1)]
        coords.extend(pair(0, sa, 1, sc) for sa in (0, 1) for sc in (0, 1))
        return BehaviourPoint.reduced(coords)

    coords = [marginal(p, s) for p in range(3) for s in (0, 1)]
    coords.extend(pair(0, sa, 1, sb) for sa in (0, 1) for sb in (0, 1))
    coords.extend(pair(0, sa, 2, sc) for sa in (0, 1) for sc in (0, 1))
    coords.extend(pair(1, sb, 2, sc) for sb in (0, 1) for sc in (0, 1))
    for sa in (0, 1):
        for sb in (0, 1):
            for sc in (0, 1):
                coords.append(float(t[sa, sb, sc, out0, out0, out0]))
    return BehaviourPoint.full(coords)


def sample_behaviour(
    rho: DensityMatrix,
    measurements: MeasurementSet,
    shape: ScenarioShape,
    shots: int,
    seed: int = 42,
) -> tuple[BehaviourPoint, np.ndarray]:
    """Finite-shot estimate of the behaviour point plus binomial standard errors.

    Draws ``shots`` multinomial samples per joint setting (settings visited in
    lexicographic order from a single seeded generator, so results are
    reproducible), collapses the empirical distribution, and reports
    sqrt(p * (1 - p) / shots) per behaviour coordinate.
    """
    if shots < 1:
        raise ValueError("shots must be a positive integer")
    exact = behaviour_from_state(rho, measurements, shape)
    n, m, d = shape.n, shape.m, shape.d
    rng = np.random.default_rng(seed)
    empirical = np.zeros_like(exact.table)
    for settings in product(range(m), repeat=n):
        probs = exact.table[settings].reshape(d**n)
        probs = probs / probs.sum()
        counts = rng.multinomial(shots, probs)
        empirical[settings] = (counts / shots).reshape((d,) * n)
    point = collapse(FullDistribution(shape, empirical))
    estimates = point.as_array()
    errors = np.sqrt(estimates * (1.0 - estimates) / shots)
    return point, errors


def partial_trace(rho: DensityMatrix, dims: tuple[int, int], keep: str) -> DensityMatrix:
    """Trace out one half of a bipartite state.

    ``dims`` gives the (left, right) factor dimensions; ``keep`` selects the
    surviving factor, "A" for the left and "B" for the right.
    """
    da, db = dims
    if da * db != rho.dim:
        raise ValueError(f"dims {dims} do not factor dimension {rho.dim}")
    blocks = rho.matrix.reshape(da, db, da, db)
    if keep == "A":
        return DensityMatrix(np.einsum("ijkj->ik", blocks))
    if keep == "B":
        return DensityMatrix(np.einsum("ijil->jl", blocks))
    raise ValueError(f"keep must be 'A' or 'B', got {keep!r}")


def trace_distance(rho: DensityMatrix, sigma: DensityMatrix) -> float:
    """Trace distance 0.5 * ||rho - sigma||_1 between two states.

    Equals half the sum of absolute eigenvalues of the (Hermitian)
    difference.  Ranges from 0 for identical states to 1 for states with
    orthogonal support.
    """
    if rho.dim != sigma.dim:
        raise ValueError("states live on spaces of different dimension")
    diff = rho.matrix - sigma.matrix
    residual = np.abs(diff - diff.conj().T).max()
    if residual > 1e-8:
        raise ValueError(f"difference is not Hermitian (residual {residual:.3e})")
    eigs = np.linalg.eigvalsh(diff)
    return float(0.5 * np.abs(eigs).sum())


def _sqrtm_psd(matrix: np.ndarray) -> np.ndarray:
    # Hermitian square root via eigendecomposition; negative dust is clipped.
    vals, vecs = np.linalg.eigh(matrix)
    vals = np.clip(vals, 0.0, None)
    return (vecs * np.sqrt(vals)) @ vecs.conj().T


def fidelity(rho: DensityMatrix, sigma: DensityMatrix) -> float:
    """Uhlmann fidelity F(rho, sigma) = (Tr sqrt(sqrt(rho) sigma sqrt(rho)))^2.

    Lies in [0, 1]; equals 1 iff the states coincide and 0 iff their
    supports are orthogonal.
    """
    if rho.dim != sigma.dim:
        raise ValueError("states live on spaces of different dimension")
    root = _sqrtm_psd(rho.matrix)
    inner = root @ sigma.matrix @ root
    vals = np.clip(np.linalg.eigvalsh(inner), 0.0, None)
    value = float(np.sqrt(vals).sum() ** 2)
    return min(max(value, 0.0), 1.0)


def fidelity_bounds_check(rho: DensityMatrix, sigma: DensityMatrix, tol: float = 1e-9) -> bool:
    """Verify 1 - sqrt(F) <= trace distance <= sqrt(1 - F) for a state pair."""
    f = fidelity(rho, sigma)
    delta = trace_distance(rho, sigma)
    lower = 1.0 - np.sqrt(f)
    upper = np.sqrt(max(1.0 - f, 0.0))
    return bool(lower <= delta + tol and delta <= upper + tol)


@dataclass(frozen=True)
class LhvModel:
    """Two-source local hidden-variable model on the three-party chain.

    The first wing reads the left source, the last wing the right source, and
    the middle wing reads both.  ``response_first`` has shape (m, L, d),
    ``response_middle`` (m, L, R, d), ``response_last`` (m, R, d); the weight
    vectors are the source distributions of length L and R.
    """

    weights_left: np.ndarray
    weights_right: np.ndarray
    response_first: np.ndarray
    response_middle: np.ndarray
    response_last: np.ndarray

    def __post_init__(self) -> None:
        wl = np.asarray(self.weights_left, dtype=float)
        wr = np.asarray(self.weights_right, dtype=float)
        for name, w in (("weights_left", wl), ("weights_right", wr)):
            if w.ndim != 1 or w.size == 0:
                raise ValueError(f"{name} must be a non-empty vector")
            if w.min() < 0 or abs(w.sum() - 1.0) > 1e-9:
                raise ValueError(f"{name} is not a probability distribution")
        a = np.asarray(self.response_first, dtype=float)
        b = np.asarray(self.response_middle, dtype=float)
        c = np.asarray(self.response_last, dtype=float)
        left, right = wl.size, wr.size
        if a.ndim != 3 or a.shape[1] != left:
            raise ValueError("response_first must have shape (settings, left states, outcomes)")
        if c.ndim != 3 or c.shape[1] != right:
            raise ValueError("response_last must have shape (settings, right states, outcomes)")
        if b.ndim != 4 or b.shape[1] != left or b.shape[2] != right:
            raise ValueError(
                "response_middle must have shape (settings, left states, right states, outcomes)"
            )
        for name, table in (("response_first", a), ("response_middle", b), ("response_last", c)):
            if table.min() < 0 or np.abs(table.sum(axis=-1) - 1.0).max() > 1e-9:
                raise ValueError(f"{name} rows are not probability distributions")
        for name, array in (
            ("weights_left", wl), ("weights_right", wr),
            ("response_first", a), ("response_middle", b), ("response_last", c),
        ):
            array.flags.writeable = False
            object.__setattr__(self, name, array)

    @property
    def settings(self) -> int:
        return self.response_first.shape[0]

    @property
    def outcomes(self) -> int:
        return self.response_first.shape[-1]


def lhv_evaluate(model: LhvModel) -> FullDistribution:
    """Full distribution generated by a two-source hidden-variable model.

    p(x, y, z | s, t, u) is the product of the three wing responses averaged
    over both sources independently.
    """
    if model.response_middle.shape[0] != model.settings or model.response_last.shape[0] != model.settings:
        raise ValueError("wings disagree on setting count")
    if model.response_middle.shape[-1] != model.outcomes or model.response_last.shape[-1] != model.outcomes:
        raise ValueError("wings disagree on outcome count")
    table = np.einsum(
        "slx,tlry,urz,l,r->stuxyz",
        model.response_first,
        model.response_middle,
        model.response_last,
        model.weights_left,
        model.weights_right,
    )
    shape = ScenarioShape(3, model.settings, model.outcomes)
    return FullDistribution(shape, table)


def model_from_strategy(strategy: DeterministicStrategy) -> LhvModel:
    """Deterministic one-state-per-source model reproducing a strategy.

    A strategy bit is the indicator of producing the flagged outcome
    (outcome 0), so bit 1 puts all response weight on outcome 0.
    """
    a = np.zeros((2, 1, 2))
    b = np.zeros((2, 1, 1, 2))
    c = np.zeros((2, 1, 2))
    for setting in (0, 1):
        a[setting, 0, 1 - strategy.first.output(setting)] = 1.0
        b[setting, 0, 0, 1 - strategy.middle.output(setting)] = 1.0
        c[setting, 0, 1 - strategy.last.output(setting)] = 1.0
    return LhvModel(np.array([1.0]), np.array([1.0]), a, b, c)


def bell_pair_state() -> DensityMatrix:
    """The two-qubit maximally entangled state (|00> + |11>) / sqrt(2)."""
    ket = np.array([1.0, 0.0, 0.0, 1.0], dtype=complex) / np.sqrt(2.0)
    return DensityMatrix(np.outer(ket, ket.conj()))


def depolarize(rho: DensityMatrix, noise: float) -> DensityMatrix:
    """Mix a state with the maximally mixed state: (1 - noise) rho + noise I/dim."""
    if not 0.0 <= noise <= 1.0:
        raise ValueError(f"noise must lie in [0, 1], got {noise}")
    mixed = np.eye(rho.dim, dtype=complex) / rho.dim
    return DensityMatrix((1.0 - noise) * rho.matrix + noise * mixed)


def qkd_scenario(kind: str, noise: float = 0.0) -> tuple[DensityMatrix, MeasurementSet, ScenarioShape]:
    """State, measurements and shape for one run of the two-user protocol.

    ``kind`` selects the source seen by the two end users: "honest" is a
    (possibly depolarized) maximally entangled pair; "intercepted" models a
    measure-and-resend eavesdropper holding both line segments, which leaves
    the end users with the product of their local marginals.
    """
    if kind not in ("honest", "intercepted"):
        raise ValueError(f"kind must be 'honest' or 'intercepted', got {kind!r}")
    measurements = zx_qubit_measurements(2)
    pair = depolarize(bell_pair_state(), noise)
    if kind == "honest":
        return pair, measurements, REDUCED_SHAPE
    left = partial_trace(pair, (2, 2), "A")
    right = partial_trace(pair, (2, 2), "B")
    intercepted = DensityMatrix(np.kron(left.matrix, right.matrix))
    return intercepted, measurements, REDUCED_SHAPE


@dataclass(frozen=True)
class NoSignallingResult:
    """Outcome of a no-signalling audit; truthy iff every marginal is stable."""

    ok: bool
    witness: Optional[dict]

    def __bool__(self) -> bool:
        return self.ok


def no_signalling_check(
    distribution: FullDistribution, tol: float = NO_SIGNALLING_TOL
) -> NoSignallingResult:
    """Check that each party's outcome marginals ignore the other parties' settings.

    Returns a truthy result when every marginal varies by at most ``tol``
    across the co-parties' setting choices, otherwise records the first
    offending party together with the worst deviation.
    """
    shape = distribution.shape
    n, m = shape.n, shape.m
    for party in range(n):
        # Marginal of this party's outcome for every joint setting choice.
        other_outcomes = tuple(n + i for i in range(n) if i != party)
        marginal = distribution.table.sum(axis=other_outcomes)
        # The marginal may depend on the party's own setting axis, but must be
        # constant along every co-party's setting axis.
        for other in range(n):
            if other == party:
                continue
            reference = np.take(marginal, 0, axis=other)
            for setting in range(1, m):
                deviation = float(
                    np.abs(np.take(marginal, setting, axis=other) - reference).max()
                )
                if deviation > tol:
                    return NoSignallingResult(
                        False,
                        {
                            "party": party,
                            "varies_with_party": other,
                            "settings_compared": (0, setting),
                            "max_deviation": deviation,
                        },
                    )
    return NoSignallingResult(True, None)


@dataclass(frozen=True)
class BoundReport:
    """Norms of a behaviour difference against the trace-distance bound.

    The chain l2 <= l1 <= 2 * (delta_A + delta_B + delta_AB) must hold for
    behaviour points generated from two states by the same measurements.
    """

    l2: float
    l1: float
    delta_a: float
    delta_b: float
    delta_ab: float

    @property
    def rhs(self) -> float:
        return 2.0 * (self.delta_a + self.delta_b + self.delta_ab)

    @property
    def holds(self) -> bool:
        return self.l2 <= self.l1 + 1e-9 and self.l1 <= self.rhs + 1e-9

    def to_json_dict(self) -> dict:
        return {
            "l2": self.l2,
            "l1": self.l1,
            "delta_a": self.delta_a,
            "delta_b": self.delta_b,
            "delta_ab": self.delta_ab,
            "rhs": self.rhs,
            "holds": self.holds,
        }


def behaviour_bound_check(
    rho: DensityMatrix, sigma: DensityMatrix, measurements: Optional[MeasurementSet] = None
) -> BoundReport:
    """Compare two two-qubit states through their behaviour points.

    Generates both behaviour points with the same (default standard/Hadamard)
    measurements and reports the l2 and l1 norms of the difference next to
    twice the sum of the marginal and joint trace distances.
    """
    if measurements is None:
        measurements = zx_qubit_measurements(2)
    dims = measurements.party_dims
    if len(dims) != 2:
        raise ValueError("bound report needs a two-party measurement set")
    p = collapse(behaviour_from_state(rho, measurements, REDUCED_SHAPE))
    q = collapse(behaviour_from_state(sigma, measurements, REDUCED_SHAPE))
    diff = p.as_array() - q.as_array()
    delta_a = trace_distance(partial_trace(rho, dims, "A"), partial_trace(sigma, dims, "A"))
    delta_b = trace_distance(partial_trace(rho, dims, "B"), partial_trace(sigma, dims, "B"))
    delta_ab = trace_distance(rho, sigma)
    return BoundReport(
        l2=float(np.linalg.norm(diff)),
        l1=float(np.abs(diff).sum()),
        delta_a=delta_a,
        delta_b=delta_b,
        delta_ab=delta_ab,
    )


def random_density_matrix(dim: int, rng: np.random.Generator) -> DensityMatrix:
    """Haar-ish random full-rank state: normalized G G+ with Gaussian G."""
    g = rng.normal(size=(dim, dim)) + 1j * rng.normal(size=(dim, dim))
    m = g @ g.conj().T
    return DensityMatrix(m / m.trace())

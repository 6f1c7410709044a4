"""Exact Haar-moment engine.

Twirling the t-fold tensor power of an observable over independent local
Haar unitaries projects each party onto the span of the permutation
operators V_pi (Schur-Weyl duality).  The coefficients of that projection
solve the Gram system

    M x = (tr(A_{j1} x ... x A_{jt} V_pi))_pi,   M[pi, pi'] = tr V_{pi o pi'},

and the moment of a state follows from the contractions
tr(rho^xt V_{piA} x V_{piB}), which this module evaluates in the Pauli
basis through the cycle-product trace formula -- rho^xt is never formed.

Any minimum-norm solution of the Gram system is usable because kernel
vectors of M are exactly linear dependencies among the V_pi; closed-form
comparisons additionally fix a gauge in which a designated set of
coefficients vanishes.
"""

from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from . import symgroup as sg
from .invariants import makhlin
from .linalg import pinv_gram
from .observables import SchmidtObservable, TripartiteObservable, schmidt_decompose
from .paulis import MULT_IDX, MULT_PHASE
from .rng import substream
from .states import (
    ThreeQubitState,
    TwoQubitState,
    bloch_from_density,
    partial_transpose_bloch,
    random_bloch_record,
    transfer_from_bloch,
)

SOLVE_RESIDUAL_TOL = 1e-9
IMAG_TOL = 1e-8


class EngineError(RuntimeError):
    """A Gram solve or moment evaluation violated an exactness guarantee."""


# ---------------------------------------------------------------------------
# Pauli-string trace tables tr(s_{mu1} x ... x s_{mut} V_pi)
# ---------------------------------------------------------------------------

@lru_cache(maxsize=None)
def _digit_table(t: int) -> np.ndarray:
    """digits[k, code] = mu_k of the big-endian base-4 code."""
    codes = np.arange(4**t)
    digits = np.empty((t, 4**t), dtype=np.int64)
    rem = codes.copy()
    for k in range(t - 1, -1, -1):
        digits[k] = rem % 4
        rem //= 4
    return digits


@lru_cache(maxsize=None)
def _w_table(t: int) -> np.ndarray:
    """W[pi, code] = tr(s_{mu1} x ... x s_{mut} V_pi) for all Pauli strings.

    Each entry is a product over cycles of single Pauli-string traces,
    evaluated with the group multiplication table.
    """
    digits = _digit_table(t)
    perms = sg.enumerate_group(t)
    w = np.empty((len(perms), 4**t), dtype=complex)
    for row, p in enumerate(perms):
        total = np.ones(4**t, dtype=complex)
        for cyc in p.cycles():
            idx = digits[cyc[0]].copy()
            phase = np.ones(4**t, dtype=complex)
            for slot in cyc[1:]:
                nxt = digits[slot]
                phase *= MULT_PHASE[idx, nxt]
                idx = MULT_IDX[idx, nxt]
            total *= np.where(idx == 0, 2.0 * phase, 0.0)
        w[row] = total
    return w


# ---------------------------------------------------------------------------
# Gram-system solves
# ---------------------------------------------------------------------------

@lru_cache(maxsize=None)
def _gram_pinv(t: int, d: int) -> np.ndarray:
    return pinv_gram(sg.gram_matrix(t, d).entries)


def _trace_tensors(factors: np.ndarray, t: int) -> list:
    """T_k[a1..ak] = tr(F_{a1} F_{a2} ... F_{ak}) for k = 1..t."""
    f = np.asarray(factors, dtype=complex)
    tensors = [np.trace(f, axis1=1, axis2=2)]
    chain = f
    for _ in range(t - 1):
        # chain[a1..ak, :, :] -> extend by one factor
        chain = np.einsum("...ij,bjk->...bik", chain, f)
        tensors.append(np.trace(chain, axis1=-2, axis2=-1))
    return tensors


def _rhs_for_tuples(factors: np.ndarray, tuples: np.ndarray, t: int) -> np.ndarray:
    """rhs[n, pi] = tr(F_{j1} x ... x F_{jt} V_pi) for every index tuple."""
    tensors = _trace_tensors(factors, t)
    perms = sg.enumerate_group(t)
    rhs = np.empty((tuples.shape[0], len(perms)), dtype=complex)
    for col, p in enumerate(perms):
        vals = np.ones(tuples.shape[0], dtype=complex)
        for cyc in p.cycles():
            idx = tuple(tuples[:, slot] for slot in cyc)
            vals = vals * tensors[len(cyc) - 1][idx]
        rhs[:, col] = vals
    return rhs


def solve_factor_coefficients(factors, t: int = None, d: int = 2) -> np.ndarray:
    """Minimum-norm coefficients x with sum_pi x_pi V_pi the Haar average
    of F_1 x ... x F_t over simultaneous rotations.

    Any kernel shift of the result represents the same operator.
    """
    factors = [np.asarray(f, dtype=complex) for f in factors]
    t = len(factors) if t is None else t
    if len(factors) != t:
        raise ValueError("need one factor per tensor slot")
    rhs = np.array([sg.trace_with_v(factors, p) for p in sg.enumerate_group(t)])
    x = _gram_pinv(t, d) @ rhs
    residual = np.max(np.abs(sg.gram_matrix(t, d).entries @ x - rhs))
    if residual > SOLVE_RESIDUAL_TOL:
        raise EngineError(f"Gram solve residual {residual:.2e} above tolerance")
    return x


# ---------------------------------------------------------------------------
# Gauge fixing
# ---------------------------------------------------------------------------

# coefficients that a kernel shift can always set to zero, leaving a
# uniquely determined reduced support
GAUGE_ZEROS = {
    3: ("(132)",),
    4: ("(132)", "(124)", "(142)", "(134)", "(143)", "(234)", "(243)",
        "(12)(34)", "(13)(24)", "(14)(23)"),
}

REDUCED_SUPPORT_T4 = (
    "()", "(12)", "(13)", "(14)", "(23)", "(24)", "(34)",
    "(123)", "(1234)", "(1243)", "(1324)", "(1342)", "(1423)", "(1432)",
)


@lru_cache(maxsize=None)
def _gauge_shift(t: int, d: int):
    """Pair (rows, shift) such that x + shift @ x[rows] zeroes the
    designated coefficients while staying in the solution set."""
    perms = sg.enumerate_group(t)
    index = {p.cycle_string(): i for i, p in enumerate(perms)}
    rows = np.array([index[name] for name in GAUGE_ZEROS[t]])
    kernel = sg.kernel_basis(sg.gram_matrix(t, d))
    if kernel.shape[1] != len(rows):
        raise EngineError("kernel dimension does not match gauge constraint count")
    shift = -kernel @ np.linalg.inv(kernel[rows, :])
    return rows, shift


def gauge_fix(x: np.ndarray, t: int, d: int = 2) -> np.ndarray:
    """Shift a Gram-system solution by kernel vectors so the designated
    coefficients vanish (t = 3: the long 3-cycle; t = 4: seven 3-cycles and
    the double transpositions)."""
    if t not in GAUGE_ZEROS:
        return np.asarray(x)
    rows, shift = _gauge_shift(t, d)
    x = np.asarray(x, dtype=complex)
    return x + x[..., rows] @ shift.T


# ---------------------------------------------------------------------------
# Coefficient tables and exact moments
# ---------------------------------------------------------------------------

@dataclass
class TwirlCoefficients:
    """Twirl of O^xt in the permutation basis, kept in factorized form:
    one (x, y[, z]) coefficient-vector triple per product-term index tuple.
    """

    t: int
    parties: int
    weights: np.ndarray        # (n_tuples,)
    xs: np.ndarray             # (n_tuples, t!)
    ys: np.ndarray             # (n_tuples, t!)
    zs: np.ndarray = None      # (n_tuples, t!) for three parties
    _wx: np.ndarray = None     # cached contractions with the Pauli table
    _wy: np.ndarray = None
    _wz: np.ndarray = None

    def __post_init__(self):
        w = _w_table(self.t)
        self._wx = self.xs @ w
        self._wy = self.ys @ w
        if self.zs is not None:
            self._wz = self.zs @ w

    def dense(self, gauge: bool = False) -> np.ndarray:
        """Full coefficient table over S_t^parties; optionally gauge-fixed
        per party before the outer product."""
        xs, ys = self.xs, self.ys
        zs = self.zs
        if gauge:
            xs = gauge_fix(xs, self.t)
            ys = gauge_fix(ys, self.t)
            zs = gauge_fix(zs, self.t) if zs is not None else None
        if self.parties == 2:
            return np.einsum("n,na,nb->ab", self.weights, xs, ys)
        return np.einsum("n,na,nb,nc->abc", self.weights, xs, ys, zs)

    def moment(self, state) -> float:
        """Exact t-th randomized-measurement moment of ``state``."""
        state = as_bloch(state, parties=self.parties)
        r = transfer_from_bloch(state)
        t = self.t
        if self.parties == 2:
            z = _apply_transfer(self._wy, r, t)
            val = np.einsum("n,nc,nc->", self.weights, self._wx, z) / 4**t
        else:
            val = _triple_contract(self.weights, self._wx, self._wy, self._wz, r, t)
        if abs(val.imag) > IMAG_TOL * max(1.0, abs(val.real)):
            raise EngineError(f"moment has imaginary residue {val.imag:.2e}")
        return float(val.real)

    def moments(self, states) -> np.ndarray:
        return np.array([self.moment(s) for s in states])


def _apply_transfer(w: np.ndarray, r: np.ndarray, t: int) -> np.ndarray:
    """Apply R^xt to a stack of coefficient vectors over Pauli strings."""
    z = w.reshape((w.shape[0],) + (4,) * t)
    for k in range(t):
        z = np.moveaxis(np.moveaxis(z, 1 + k, -1) @ r.T, -1, 1 + k)
    return z.reshape(w.shape[0], 4**t)


def _triple_contract(weights, wx, wy, wz, r3: np.ndarray, t: int) -> complex:
    """sum_n w_n <wx_n x wy_n x wz_n, R3^xt> / 8^t for a three-party
    transfer tensor r3 of shape (4, 4, 4)."""
    n = wx.shape[0]
    rflat = r3.reshape(4, 16)
    z = wx.reshape((n,) + (4,) * t).astype(complex)
    for k in range(t):
        z = np.moveaxis(np.moveaxis(z, 1 + k, -1) @ rflat, -1, 1 + k)
    # axis 1+k now carries the joint (nu_k, lambda_k) index of size 16
    z = z.reshape((n,) + (4, 4) * t)
    wyr = wy.reshape((n,) + (4,) * t)
    wzr = wz.reshape((n,) + (4,) * t)
    if t == 1:
        return np.einsum("n,nab,na,nb->", weights, z, wyr, wzr) / 8**t
    if t == 2:
        return np.einsum("n,nabcd,nac,nbd->", weights, z, wyr, wzr) / 8**t
    if t == 3:
        return np.einsum("n,nabcdef,nace,nbdf->", weights, z, wyr, wzr) / 8**t
    raise ValueError("three-party moments support t <= 3")


def as_bloch(state, parties: int = 2):
    """Coerce a density matrix or Bloch record to the Bloch form."""
    if isinstance(state, (TwoQubitState, ThreeQubitState)):
        got = 2 if isinstance(state, TwoQubitState) else 3
        if got != parties:
            raise ValueError(f"expected {parties}-party state, got {got}-party")
        return state
    return bloch_from_density(np.asarray(state, dtype=complex))


def _index_tuples(r: int, t: int) -> np.ndarray:
    return np.indices((r,) * t).reshape(t, -1).T


def twirl_coefficients(obs, t: int) -> TwirlCoefficients:
    """Coefficient table of the twirled observable at moment order t.

    ``obs`` may be a Hermitian 4x4 matrix, a SchmidtObservable (two
    parties, t <= 6 supported, t <= 4 recommended for rank > 1) or a
    TripartiteObservable (t <= 3).
    """
    if isinstance(obs, np.ndarray):
        obs = schmidt_decompose(obs)
    if isinstance(obs, SchmidtObservable):
        tuples = _index_tuples(obs.rank, t)
        weights = np.prod(np.asarray(obs.s)[tuples], axis=1)
        xs = _solve_tuples(np.stack(obs.A), tuples, t)
        if obs.is_symmetric():
            ys = xs
        else:
            ys = _solve_tuples(np.stack(obs.B), tuples, t)
        return TwirlCoefficients(t=t, parties=2, weights=weights, xs=xs, ys=ys)
    if isinstance(obs, TripartiteObservable):
        if t > 3:
            raise ValueError("three-party twirl supports t <= 3")
        r = obs.num_terms
        tuples = _index_tuples(r, t)
        weights = np.prod(np.asarray(obs.weights)[tuples], axis=1)
        xs = _solve_tuples(np.stack([term[0] for term in obs.terms]), tuples, t)
        ys = _solve_tuples(np.stack([term[1] for term in obs.terms]), tuples, t)
        zs = _solve_tuples(np.stack([term[2] for term in obs.terms]), tuples, t)
        return TwirlCoefficients(t=t, parties=3, weights=weights, xs=xs, ys=ys, zs=zs)
    raise TypeError(f"unsupported observable type {type(obs)!r}")


def _solve_tuples(factors: np.ndarray, tuples: np.ndarray, t: int) -> np.ndarray:
    rhs = _rhs_for_tuples(factors, tuples, t)
    pinv = _gram_pinv(t, factors.shape[1])
    xs = rhs @ pinv  # pinv of a symmetric matrix is symmetric
    residual = np.max(np.abs(xs @ sg.gram_matrix(t, factors.shape[1]).entries - rhs))
    if residual > SOLVE_RESIDUAL_TOL:
        raise EngineError(f"Gram solve residual {residual:.2e} above tolerance")
    return xs


def exact_moment(obs, state, t: int) -> float:
    """One-shot exact moment; build twirl_coefficients once when evaluating
    many states against the same observable."""
    return twirl_coefficients(obs, t).moment(state)


# ---------------------------------------------------------------------------
# Bloch-form contractions tr(rho^x3 V_{piA} x V_{piB}) at t = 3
# ---------------------------------------------------------------------------

# rows: the ten equivalence classes of permutation pairs, columns the
# invariant vector (1, |a|^2, |b|^2, tr T^T T, <a, T b>, det T), all / 16.
T3_TRACE_CLASSES = (
    "id,id", "id,swap", "swap,id", "id,cycle", "cycle,id",
    "swap,same", "swap,other", "swap,cycle", "cycle,swap", "cycle,cycle",
)
T3_TRACE_MATRIX = np.array([
    [16, 0, 0, 0, 0, 0],
    [8, 0, 8, 0, 0, 0],
    [8, 8, 0, 0, 0, 0],
    [4, 0, 12, 0, 0, 0],
    [4, 12, 0, 0, 0, 0],
    [4, 4, 4, 4, 0, 0],
    [4, 4, 4, 0, 4, 0],
    [2, 2, 6, 2, 4, 0],
    [2, 6, 2, 2, 4, 0],
    [1, 3, 3, 3, 6, -6],
]) / 16.0


def trace_invariant_vector_t3(state: TwoQubitState) -> np.ndarray:
    """(1, |alpha|^2, |beta|^2, tr(T^T T), <alpha, T beta>, det T)."""
    a, b, T = state.alpha, state.beta, state.T
    return np.array([
        1.0, float(a @ a), float(b @ b),
        float(np.trace(T.T @ T)), float(a @ T @ b), float(np.linalg.det(T)),
    ])


def t3_trace_classes(state: TwoQubitState) -> dict:
    """The ten class values of tr(rho^x3 V_{piA} x V_{piB})."""
    vals = T3_TRACE_MATRIX @ trace_invariant_vector_t3(state)
    return dict(zip(T3_TRACE_CLASSES, vals))


# ---------------------------------------------------------------------------
# Invariant dictionaries and moment decompositions
# ---------------------------------------------------------------------------

#: monomials in the continuous Makhlin invariants, keyed by total degree in
#: the state coefficients
_MAKHLIN_DEGREES = {
    "I1": 3, "I2": 2, "I3": 4, "I4": 2, "I5": 4, "I6": 6,
    "I7": 2, "I8": 4, "I9": 6, "I12": 3, "I13": 5, "I14": 4,
}


def dictionary_for(t: int) -> tuple:
    """All monomials in the continuous Makhlin invariants of total degree
    <= t, plus the constant.  The degree bound is forced: a t-th moment is a
    polynomial of degree <= t in the state coefficients."""
    names = ["1"]
    gens = sorted(_MAKHLIN_DEGREES)
    def expand(start, budget, current):
        for i in range(start, len(gens)):
            g = gens[i]
            d = _MAKHLIN_DEGREES[g]
            if d <= budget:
                mono = current + [g]
                names.append("*".join(mono))
                expand(i, budget - d, mono)
    expand(0, t, [])
    return tuple(sorted(set(names), key=lambda n: (n != "1", n)))


def eval_monomials(names, state: TwoQubitState) -> np.ndarray:
    """Evaluate dictionary monomials on one Bloch record."""
    record = makhlin(state)
    vals = record.continuous()
    out = np.empty(len(names))
    for i, name in enumerate(names):
        if name == "1":
            out[i] = 1.0
        else:
            v = 1.0
            for g in name.split("*"):
                v *= vals[g]
            out[i] = v
    return out


@dataclass
class MomentDecomposition:
    """Affine expansion of a moment over an invariant dictionary."""

    names: tuple
    coefficients: np.ndarray
    residual: float

    def coefficient(self, name: str) -> float:
        return float(self.coefficients[self.names.index(name)])

    def as_dict(self) -> dict:
        return {
            "coefficients": {n: float(c) for n, c in zip(self.names, self.coefficients)},
            "residual": self.residual,
        }


def _fit_states(count: int, seed: int, label: str) -> list:
    rng = substream(seed, "twirl.fit", label)
    return [random_bloch_record(2, rng) for _ in range(count)]


def decompose(obs, t: int, dictionary=None, seed: int = 20240, n_states: int = None) -> MomentDecomposition:
    """Least-squares expansion of the exact moment over an invariant
    dictionary, fitted on random (generally non-physical) Bloch records.

    A residual above ~1e-8 means the dictionary does not span the moment;
    it is reported, not fatal.
    """
    names = tuple(dictionary) if dictionary is not None else dictionary_for(t)
    coeffs = twirl_coefficients(obs, t) if not isinstance(obs, TwirlCoefficients) else obs
    n = n_states if n_states is not None else max(3 * len(names), 24)
    states = _fit_states(n, seed, f"decompose-t{t}-{len(names)}")
    design = np.array([eval_monomials(names, s) for s in states])
    y = coeffs.moments(states)
    sol, *_ = np.linalg.lstsq(design, y, rcond=None)
    residual = float(np.max(np.abs(design @ sol - y)))
    return MomentDecomposition(names=names, coefficients=sol, residual=residual)


def odd_part(obs, state, t: int) -> float:
    """PT-odd half of the moment, (R(rho) - R(rho^T2)) / 2.

    Only det(T) and the Hodge invariant survive among the continuous
    invariants of degree <= 4, so for t <= 4 this isolates their combined
    contribution exactly.
    """
    coeffs = twirl_coefficients(obs, t) if not isinstance(obs, TwirlCoefficients) else obs
    state = as_bloch(state, parties=2)
    return (coeffs.moment(state) - coeffs.moment(partial_transpose_bloch(state))) / 2.0


def odd_fit(obs, t: int, seed: int = 31400, n_states: int = 12):
    """Fit the PT-odd part over {det T, Hodge}; returns a decomposition
    whose names are ("I1", "I14")."""
    names = ("I1", "I14")
    coeffs = twirl_coefficients(obs, t) if not isinstance(obs, TwirlCoefficients) else obs
    states = _fit_states(n_states, seed, f"oddfit-t{t}")
    design = np.array([eval_monomials(names, s) for s in states])
    y = np.array([odd_part(coeffs, s, t) for s in states])
    sol, *_ = np.linalg.lstsq(design, y, rcond=None)
    residual = float(np.max(np.abs(design @ sol - y)))
    return MomentDecomposition(names=names, coefficients=sol, residual=residual)


# ---------------------------------------------------------------------------
# Symmetric-decomposition closed form at t = 3
# ---------------------------------------------------------------------------

# the seven coefficient classes of a symmetric twirl at t = 3, in the
# gauge where the long-3-cycle coefficients vanish per party
SYM_T3_CLASSES = (
    "id,id", "id,swap", "id,cycle", "swap,same", "swap,other",
    "swap,cycle", "cycle,cycle",
)

_SYM_T3_B = np.array([
    [4, 0, -8, 0, 0, 0, 4],
    [0, -2, 4, 0, 0, 2, -4],
    [-4, 12, -4, 0, 0, -12, 8],
    [0, 0, 0, 3, -2, -4, 4],
    [0, 0, 0, -1, 2, -4, 4],
    [0, 2, -4, -2, -4, 16, -8],
    [4, -24, 16, 12, 24, -48, 16],
]) / 144.0

# multiplicity of each class among ordered permutation pairs
SYM_T3_CLASS_SIZES = np.array([1, 6, 4, 3, 6, 12, 1])


def symmetric_coefficients_t3(obs: SchmidtObservable) -> np.ndarray:
    """Per-member values of the seven coefficient classes of a symmetric
    observable's twirl at t = 3, from the closed-form moment table of the
    factor traces (no Gram solve)."""
    if not obs.is_symmetric():
        raise ValueError("symmetric decomposition required (A_j = B_j)")
    s = np.asarray(obs.s, dtype=float)
    a = np.stack(obs.A)
    tau = np.real(np.trace(a, axis1=1, axis2=2))
    t2 = tau**2
    tr3 = np.einsum("aij,bjk,cki->abc", a, a, a)   # tr(A_a A_b A_c)
    tr_aab = np.einsum("aij,ajk,bki->ab", a, a, a)  # tr(A_a^2 A_b)
    st = s * tau
    v = np.array([
        (s @ t2) ** 3,
        (s**2 @ t2) * (s @ t2),
        np.einsum("a,b,c,abc->", st, st, st, tr3),
        (s @ s) * (s @ t2),
        s**3 @ t2,
        np.einsum("a,b,ab->", s**2, st, tr_aab),
        np.einsum("a,b,c,abc->", s, s, s, tr3**2),
    ], dtype=complex)
    return np.real(_SYM_T3_B @ v)


def aggregate_sym_classes_t3(coeffs: TwirlCoefficients, tol: float = 1e-9) -> np.ndarray:
    """Extract the seven symmetric class values from an engine-built,
    gauge-fixed coefficient table, asserting members agree within tol."""
    dense = coeffs.dense(gauge=True)
    perms = sg.enumerate_group(3)
    names = [p.cycle_string() for p in perms]
    idx = {n: i for i, n in enumerate(names)}
    swaps = ["(12)", "(13)", "(23)"]
    groups = {
        "id,id": [("()", "()")],
        "id,swap": [("()", s) for s in swaps] + [(s, "()") for s in swaps],
        "id,cycle": [("()", "(123)"), ("(123)", "()")],
        "swap,same": [(s, s) for s in swaps],
        "swap,other": [(s1, s2) for s1 in swaps for s2 in swaps if s1 != s2],
        "swap,cycle": [(s, "(123)") for s in swaps] + [("(123)", s) for s in swaps],
        "cycle,cycle": [("(123)", "(123)")],
    }
    out = np.empty(len(SYM_T3_CLASSES))
    for i, cls in enumerate(SYM_T3_CLASSES):
        members = np.array([dense[idx[a], idx[b]] for a, b in groups[cls]])
        if np.max(np.abs(members.imag)) > tol or np.ptp(members.real) > tol:
            raise EngineError(f"class {cls} members disagree: {members}")
        out[i] = members.real.mean()
    return out


# ---------------------------------------------------------------------------
# Tripartite coefficient classes (Kempe analysis)
# ---------------------------------------------------------------------------

CHAT_CLASSES = ("all_same", "c_differs", "b_differs", "a_differs", "all_distinct")


def chat_vector(coeffs: TwirlCoefficients, tol: float = 1e-10) -> np.ndarray:
    """Aggregated transposition-class sums of a three-party twirl at t = 3.

    The five classes track, in order, the coefficients multiplying
    ||W||^2, the three W-correlation cross terms, and tr(TAB TBC TCA) in
    the moment (each with a 1/8 trace normalization handled separately).
    """
    if coeffs.parties != 3 or coeffs.t != 3:
        raise ValueError("chat_vector needs a three-party t=3 table")
    dense = coeffs.dense(gauge=True)
    perms = sg.enumerate_group(3)
    idx = {p.cycle_string(): i for i, p in enumerate(perms)}
    swaps = ["(12)", "(13)", "(23)"]
    def val(a, b, c):
        return dense[idx[a], idx[b], idx[c]]
    total = np.zeros(5, dtype=complex)
    total[0] = sum(val(s, s, s) for s in swaps)
    total[1] = sum(val(p, p, q) for p in swaps for q in swaps if q != p)
    total[2] = sum(val(p, q, p) for p in swaps for q in swaps if q != p)
    total[3] = sum(val(q, p, p) for p in swaps for q in swaps if q != p)
    total[4] = sum(
        val(a, b, c)
        for a in swaps for b in swaps for c in swaps
        if len({a, b, c}) == 3
    )
    if np.max(np.abs(total.imag)) > tol:
        raise EngineError("aggregated class sums have imaginary residue")
    return total.real

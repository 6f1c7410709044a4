"""Finite-shot simulation of randomized measurement protocols and
end-to-end invariant recovery pipelines.

A protocol run draws K random local frames; within each frame it cycles
through the product terms of the observable (one measurement setting per
term), estimates each term's expectation from M projective shots, sums the
settings, raises to the t-th power and averages over frames.  Powering the
per-frame mean introduces an O(1/M) bias, controlled by M.

Recovery pipelines implement the known optimal observable per invariant.
Calibration constants are never taken from an external table: each
pipeline's moment is fitted against an invariant dictionary with the exact
engine, and recovery inverts that affine relation using previously
recovered invariants.
"""

from dataclasses import dataclass, field
from functools import lru_cache

import numpy as np

from . import twirl
from .haar_mc import MCEstimate, haar_su2_batch
from .invariants import kempe as kempe_record
from .invariants import makhlin
from .observables import TripartiteObservable, dense_from_terms
from .paulis import PAULIS
from .rng import substream
from .states import ThreeQubitState, TwoQubitState, density_from_bloch

_I, _X, _Y, _Z = PAULIS
RECOVERY_TOL = 1e-8


@dataclass
class ProtocolConfig:
    """Sampling plan: K random frames, M shots per setting, moment t.

    ``drift_rate`` advances a fixed-axis frame rotation by that many radians
    per prepared copy; ``setting_change_cost`` charges extra drift ticks
    whenever the measured setting changes, modelling the slow reconfiguration
    that makes multi-setting protocols fragile while single-setting ones
    absorb the drift into the random frame.
    """

    unitary_count: int
    shots_per_setting: int
    moment: int
    drift_rate: float = 0.0   # radians of frame drift per prepared copy
    setting_change_cost: int = 0
    seed: int = 0

    def __post_init__(self):
        if self.unitary_count < 1 or self.shots_per_setting < 1:
            raise ValueError("unitary_count and shots_per_setting must be >= 1")


@dataclass
class RecoveryReport:
    invariant: str
    estimate: float
    stderr: float
    reference: float
    settings_used: int
    details: dict = field(default_factory=dict)

    def as_dict(self) -> dict:
        out = {
            "invariant": self.invariant,
            "estimate": self.estimate,
            "stderr": self.stderr,
            "reference": self.reference,
            "settings_used": self.settings_used,
        }
        if self.details:
            out["details"] = self.details
        return out


# ---------------------------------------------------------------------------
# Finite-shot moment estimation
# ---------------------------------------------------------------------------

def _eigs_and_projectors(factor: np.ndarray):
    vals, vecs = np.linalg.eigh(factor)
    projs = np.einsum("ao,bo->oab", vecs, vecs.conj())
    return vals.real, projs


def _drift_unitaries(axes: np.ndarray, thetas: np.ndarray) -> np.ndarray:
    """exp(-i theta/2 n.sigma) per party, stacked over thetas."""
    n_parties = axes.shape[0]
    out = np.empty((len(thetas), n_parties, 2, 2), dtype=complex)
    for p in range(n_parties):
        nsig = sum(axes[p, j] * PAULIS[j + 1] for j in range(3))
        c = np.cos(thetas / 2.0)
        s = np.sin(thetas / 2.0)
        out[:, p] = c[:, None, None] * np.eye(2) - 1j * s[:, None, None] * nsig
    return out


def simulate_moment(terms, rho, cfg: ProtocolConfig, label: str = "moment",
                    collect_trace: bool = False):
    """Finite-shot estimate of the t-th moment of a sum of product terms.

    Each term must be a product observable (one factor per party); terms
    are measured in separate settings within the same random frame.  With a
    nonzero drift rate the state is conjugated by a slowly advancing local
    rotation, one increment per prepared copy; single-setting protocols
    absorb the drift into the random frame, multi-setting ones do not.
    """
    if isinstance(rho, (TwoQubitState, ThreeQubitState)):
        rho = density_from_bloch(rho)
    rho = np.asarray(rho, dtype=complex)
    n_parties = len(terms[0])
    for term in terms:
        if len(term) != n_parties or any(np.shape(f) != (2, 2) for f in term):
            raise ValueError(
                "each setting must be a product term: one 2x2 factor per party"
            )
    if rho.shape[0] != 2**n_parties:
        raise ValueError(
            f"state dimension {rho.shape[0]} does not match {n_parties} parties"
        )
    n_set = len(terms)
    k_count, m_shots, t = cfg.unitary_count, cfg.shots_per_setting, cfg.moment
    rng = substream(cfg.seed, "protocol.simulate", label)

    # per-term eigen data
    eig_vals, eig_projs = [], []
    for term in terms:
        vs, ps = zip(*(_eigs_and_projectors(np.asarray(f, dtype=complex)) for f in term))
        eig_vals.append(vs)
        eig_projs.append(ps)

    # random frames, one SU(2) per party per frame
    frames = np.stack([haar_su2_batch(rng, k_count) for _ in range(n_parties)], axis=1)

    if cfg.drift_rate != 0.0:
        # fixed drift axes, one per party (x, y, z cycling)
        axes = np.eye(3)[[p % 3 for p in range(n_parties)]]

    rho_t = rho.reshape((2,) * (2 * n_parties))
    estimates = np.empty((k_count, n_set))
    for j, term in enumerate(terms):
        # joint outcome probabilities for every frame: rotate each party's
        # projectors by U^dag and apply the Born rule
        lam = eig_vals[j]
        rot = []
        for p in range(n_parties):
            u = frames[:, p]
            rot.append(np.einsum("kba,obc,kcd->koad", u.conj(), eig_projs[j][p], u))
        if n_parties == 2:
            probs = np.real(np.einsum("xaji,xblk,ikjl->xab", rot[0], rot[1], rho_t))
            lam_prod = np.multiply.outer(lam[0], lam[1]).reshape(-1)
        else:
            probs = np.real(np.einsum(
                "xaji,xblk,xcnm,ikmjln->xabc", rot[0], rot[1], rot[2], rho_t
            ))
            lam_prod = np.multiply.outer(np.multiply.outer(lam[0], lam[1]), lam[2]).reshape(-1)
        probs = probs.reshape(k_count, -1)
        probs = np.clip(probs, 0.0, None)
        probs /= probs.sum(axis=1, keepdims=True)

        if cfg.drift_rate == 0.0:
            counts = rng.multinomial(m_shots, probs)
            estimates[:, j] = counts @ lam_prod / m_shots
        else:
            estimates[:, j] = _drifted_setting(
                rng, rho, rot, lam_prod, cfg, axes, j, n_set, n_parties
            )

    per_frame = estimates.sum(axis=1) ** t
    mean = float(np.mean(per_frame))
    stderr = float(np.std(per_frame, ddof=1) / np.sqrt(k_count)) if k_count > 1 else 0.0
    est = MCEstimate(mean=mean, stderr=stderr, samples=k_count, seed=cfg.seed)
    if collect_trace:
        return est, estimates
    return est


def _drifted_setting(rng, rho, rot, lam_prod, cfg, axes, setting, n_set, n_parties):
    """Per-frame estimates of one setting when every prepared copy sees an
    advanced drift rotation; outcomes sampled shot by shot."""
    k_count, m = cfg.unitary_count, cfg.shots_per_setting
    out = np.empty(k_count)
    shot_idx = np.arange(m)
    block = m + cfg.setting_change_cost
    for k in range(k_count):
        counters = (k * n_set + setting) * block + cfg.setting_change_cost + shot_idx
        thetas = cfg.drift_rate * counters
        d = _drift_unitaries(axes, thetas)
        full = d[:, 0]
        for p in range(1, n_parties):
            full = np.einsum("sab,scd->sacbd", full, d[:, p]).reshape(
                m, full.shape[1] * 2, -1
            )
        rho_s = np.einsum("sab,bc,sdc->sad", full, rho, full.conj())
        rho_st = rho_s.reshape((m,) + (2,) * (2 * n_parties))
        if n_parties == 2:
            probs = np.real(np.einsum(
                "aji,blk,sikjl->sab", rot[0][k], rot[1][k], rho_st
            )).reshape(m, -1)
        else:
            probs = np.real(np.einsum(
                "aji,blk,cnm,sikmjln->sabc", rot[0][k], rot[1][k], rot[2][k], rho_st
            )).reshape(m, -1)
        probs = np.clip(probs, 0.0, None)
        probs /= probs.sum(axis=1, keepdims=True)
        cdf = np.cumsum(probs, axis=1)
        draws = rng.uniform(size=m)
        outcomes = (draws[:, None] > cdf).sum(axis=1)
        out[k] = lam_prod[outcomes].mean()
    return out


# ---------------------------------------------------------------------------
# Two-qubit recovery pipelines (optimal observables per invariant)
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class Pipeline:
    name: str
    t: int
    terms: tuple            # measurement settings: product terms, 2 parties
    dictionary: tuple       # monomial names spanning the (combined) moment
    target: str             # dictionary entry being recovered
    prerequisites: tuple    # invariants recovered first
    settings: int           # tensor rank the protocol cycles through
    difference: tuple = None  # optional second observable; recover from R1 - R2


def _t(*factors):
    return tuple(np.asarray(f, dtype=complex) for f in factors)


PIPELINES = {
    "I2": Pipeline("I2", 2, (_t(3 * _Z, _Z),), ("1", "I2"), "I2", (), 1),
    "I4": Pipeline("I4", 2, (_t(np.sqrt(3) * _Z, _I),), ("1", "I4"), "I4", (), 1),
    "I7": Pipeline("I7", 2, (_t(np.sqrt(3) * _I, _Z),), ("1", "I7"), "I7", (), 1),
    "I3": Pipeline("I3", 4, (_t(_Z, _Z),),
                   ("1", "I2", "I2*I2", "I3"), "I3", ("I2",), 1),
    "I5": Pipeline("I5", 4, (_t(_Z, _I + _Z),),
                   ("1", "I2", "I3", "I4", "I2*I2", "I2*I4", "I4*I4", "I5"),
                   "I5", ("I2", "I3", "I4"), 1),
    "I8": Pipeline("I8", 4, (_t(_I + _Z, _Z),),
                   ("1", "I2", "I3", "I7", "I2*I2", "I2*I7", "I7*I7", "I8"),
                   "I8", ("I2", "I3", "I7"), 1),
    "I12": Pipeline("I12", 3, (_t(_I + _Z, _I + _Z),),
                    ("1", "I2", "I4", "I7", "I12"), "I12", ("I2", "I4", "I7"), 1),
    "I13": Pipeline("I13", 5, (_t(_I + _Z, _I + _Z),),
                    ("1", "I2", "I4", "I7", "I12", "I3", "I5", "I8",
                     "I2*I2", "I2*I4", "I2*I7", "I4*I4", "I4*I7", "I7*I7",
                     "I12*I2", "I12*I4", "I12*I7", "I13"),
                    "I13", ("I2", "I3", "I4", "I5", "I7", "I8", "I12"), 1),
    # auxiliary: det(T)^2 is type-1 accessible and feeds the sixth-moment rows
    "detsq": Pipeline("detsq", 6, (_t(_Z, _Z),),
                      ("1", "I2*I3", "I2*I2*I2", "I1*I1"), "I1*I1", ("I2", "I3"), 1),
    "I6": Pipeline("I6", 6, (_t(_Z, _I + _Z),),
                   ("1", "I1*I1", "I2*I3", "I2*I2*I2", "I2*I2*I4", "I2*I4*I4",
                    "I4*I4*I4", "I3*I4", "I2*I5", "I4*I5", "I6"),
                   "I6", ("I2", "I3", "I4", "I5", "detsq"), 1),
    "I9": Pipeline("I9", 6, (_t(_I + _Z, _Z),),
                   ("1", "I1*I1", "I2*I3", "I2*I2*I2", "I2*I2*I7", "I2*I7*I7",
                    "I7*I7*I7", "I3*I7", "I2*I8", "I7*I8", "I9"),
                   "I9", ("I2", "I3", "I7", "I8", "detsq"), 1),
    "det": Pipeline("det", 3, (_t(_X, _X), _t(_Y, _Y), _t(_Z, _Z)),
                    ("1", "I2", "I4", "I7", "I12", "I1"), "I1", (), 3),
    "hodge": Pipeline("hodge", 4,
                      (_t(_I, _X), _t(_X, _I), _t(_Y, _Z), _t(_Z, _Y)),
                      ("1", "I14"), "I14", (), 4,
                      difference=(_t(_I, _X), _t(_X, _I), _t(_Y, _Z), _t(-_Z, _Y))),
}

TABLE_ROWS = ("I2", "I3", "I4", "I5", "I6", "I7", "I8", "I9", "I12", "I13", "det", "hodge")

#: tensor rank each full recovery procedure cycles through
EXPECTED_SETTINGS = {
    "I2": 1, "I3": 1, "I4": 1, "I5": 1, "I6": 1, "I7": 1, "I8": 1, "I9": 1,
    "I12": 1, "I13": 1, "det": 3, "hodge": 4,
}


def eval_known(name: str, values: dict) -> float:
    """Evaluate a dictionary monomial from recovered invariant values."""
    if name == "1":
        return 1.0
    if name in values:
        return float(values[name])
    out = 1.0
    for g in name.split("*"):
        out *= values[g]
    return out


@lru_cache(maxsize=None)
def _pipeline_engines(name: str):
    """Exact coefficient tables for each measurement setting group."""
    pipe = PIPELINES[name]
    first = twirl.twirl_coefficients(dense_from_terms(pipe.terms, np.ones(len(pipe.terms))), pipe.t)
    if pipe.difference is None:
        return (first,)
    second = twirl.twirl_coefficients(
        dense_from_terms(pipe.difference, np.ones(len(pipe.difference))), pipe.t
    )
    return (first, second)


@lru_cache(maxsize=None)
def calibrate(name: str) -> tuple:
    """Fitted affine expansion of the pipeline's (combined) moment over its
    dictionary; raises if the dictionary does not span the moment."""
    pipe = PIPELINES[name]
    engines = _pipeline_engines(name)
    states = twirl._fit_states(max(3 * len(pipe.dictionary), 24), 977, f"pipeline-{name}")
    design = np.array([twirl.eval_monomials(pipe.dictionary, s) for s in states])
    y = engines[0].moments(states)
    if pipe.difference is not None:
        y = y - engines[1].moments(states)
    sol, *_ = np.linalg.lstsq(design, y, rcond=None)
    residual = float(np.max(np.abs(design @ sol - y)))
    if residual > RECOVERY_TOL:
        raise twirl.EngineError(
            f"pipeline {name}: dictionary does not span the moment (residual {residual:.2e})"
        )
    return tuple(sol)


COEFF_NEGLIGIBLE = 1e-9


def _invert_calibration(pipe: Pipeline, coeffs, r_value, known_values):
    target_c = coeffs[pipe.dictionary.index(pipe.target)]
    rest = r_value
    for nm, c in zip(pipe.dictionary, coeffs):
        if nm != pipe.target and abs(c) > COEFF_NEGLIGIBLE:
            rest -= c * eval_known(nm, known_values)
    return rest / target_c


def _reference_value(name: str, state: TwoQubitState) -> float:
    rec = makhlin(state)
    if name == "detsq":
        return rec.I1**2
    return getattr(rec, {"det": "I1", "hodge": "I14"}.get(name, name))


def recover_invariant(name: str, state, cfg: ProtocolConfig = None,
                      _cache: dict = None) -> RecoveryReport:
    """Recover one invariant from randomized-measurement moments.

    With ``cfg = None`` moments come from the exact engine, which isolates
    the pipeline algebra from statistical noise; otherwise every moment
    (including prerequisite ones) is estimated by the finite-shot protocol.
    ``settings_used`` reports the largest tensor rank the full procedure
    cycles through.
    """
    if name not in PIPELINES:
        raise KeyError(f"unknown invariant pipeline {name!r}")
    state = twirl.as_bloch(state, parties=2)
    pipe = PIPELINES[name]
    cache = _cache if _cache is not None else {}
    known_values, known_errs, settings = {}, {}, pipe.settings
    for pre in pipe.prerequisites:
        if pre not in cache:
            cache[pre] = recover_invariant(pre, state, cfg, _cache=cache)
        rep = cache[pre]
        key = "I1*I1" if pre == "detsq" else pre
        known_values[key] = rep.estimate
        known_errs[key] = rep.stderr
        settings = max(settings, rep.settings_used)

    coeffs = calibrate(name)
    if cfg is None:
        engines = _pipeline_engines(name)
        r_value = engines[0].moment(state)
        if pipe.difference is not None:
            r_value -= engines[1].moment(state)
        r_err = 0.0
    else:
        run = ProtocolConfig(cfg.unitary_count, cfg.shots_per_setting, pipe.t,
                             drift_rate=cfg.drift_rate,
                             setting_change_cost=cfg.setting_change_cost,
                             seed=cfg.seed)
        est = simulate_moment([list(t) for t in pipe.terms], state, run, label=name)
        r_value, r_err = est.mean, est.stderr
        if pipe.difference is not None:
            est2 = simulate_moment([list(t) for t in pipe.difference], state, run,
                                   label=name + "-minus")
            r_value -= est2.mean
            r_err = float(np.hypot(r_err, est2.stderr))

    estimate = _invert_calibration(pipe, coeffs, r_value, known_values)
    target_c = coeffs[pipe.dictionary.index(pipe.target)]
    err = r_err
    for nm, c in zip(pipe.dictionary, coeffs):
        if nm == pipe.target or nm == "1" or abs(c) <= COEFF_NEGLIGIBLE:
            continue
        err += abs(c) * _monomial_error(nm, known_values, known_errs)
    stderr = err / abs(target_c)
    return RecoveryReport(
        invariant=name,
        estimate=float(estimate),
        stderr=float(stderr),
        reference=float(_reference_value(name, state)),
        settings_used=settings,
    )


def _monomial_error(name: str, values: dict, errors: dict) -> float:
    """First-order error propagation through a product of recovered values."""
    if name in errors:
        return errors[name]
    gens = name.split("*")
    total = 0.0
    for i, g in enumerate(gens):
        partial = 1.0
        for j, h in enumerate(gens):
            if j != i:
                partial *= abs(values[h])
        total += partial * errors.get(g, 0.0)
    return total


def recover_all(state, cfg: ProtocolConfig = None) -> dict:
    """Recover every Table row, sharing prerequisite recoveries."""
    cache = {}
    return {name: recover_invariant(name, state, cfg, _cache=cache) for name in TABLE_ROWS}


# ---------------------------------------------------------------------------
# Kempe recovery (three qubits)
# ---------------------------------------------------------------------------

THREE_QUBIT_MONOMIALS = (
    "1", "a2", "b2", "g2", "Tab2", "Tbc2", "Tca2",
    "aTABb", "bTBCg", "gTCAa",
    "W2", "WABg", "WCAb", "WBCa", "TTT",
    "detAB", "detBC", "detCA",
)

KEMPE_TARGETS = ("W2", "WABg", "WCAb", "WBCa", "TTT")


def eval_three_qubit_monomials(names, state: ThreeQubitState) -> np.ndarray:
    rec = kempe_record(state)
    vals = {
        "1": 1.0,
        "a2": float(state.alpha @ state.alpha),
        "b2": float(state.beta @ state.beta),
        "g2": float(state.gamma @ state.gamma),
        "Tab2": float(np.trace(state.TAB.T @ state.TAB)),
        "Tbc2": float(np.trace(state.TBC.T @ state.TBC)),
        "Tca2": float(np.trace(state.TCA.T @ state.TCA)),
        "aTABb": float(state.alpha @ state.TAB @ state.beta),
        "bTBCg": float(state.beta @ state.TBC @ state.gamma),
        "gTCAa": float(state.gamma @ state.TCA @ state.alpha),
        "W2": rec.w_norm_sq,
        "WABg": rec.cross_ab_g,
        "WCAb": rec.cross_ca_b,
        "WBCa": rec.cross_bc_a,
        "TTT": rec.trTTT,
        "detAB": float(np.linalg.det(state.TAB)),
        "detBC": float(np.linalg.det(state.TBC)),
        "detCA": float(np.linalg.det(state.TCA)),
    }
    return np.array([vals[n] for n in names])


def kempe_observables() -> dict:
    """The tensor-rank-2 observable set that decouples the five degree-3
    companions, plus the rank-1 product that measures their fixed
    combination."""
    d = _I - _X
    e = _I + _Z
    return {
        "w_norm": TripartiteObservable([(_I, _I, _I), (_Z, _Z, _Z)]),
        "cross_c": TripartiteObservable([(_I, _I, d), (_Z, _Z, d)]),
        "cross_b": TripartiteObservable([(_I, d, _I), (_Z, d, _Z)]),
        "cross_a": TripartiteObservable([(d, _I, _I), (d, _Z, _Z)]),
        "combo": TripartiteObservable([(e, e, e)]),
    }


@lru_cache(maxsize=None)
def _kempe_calibration() -> dict:
    """Fit each Kempe observable's third moment over the three-qubit
    dictionary with the exact engine."""
    rng = substream(977, "kempe.calibration")
    from .states import random_bloch_record

    states = [random_bloch_record(3, rng) for _ in range(4 * len(THREE_QUBIT_MONOMIALS))]
    design = np.array([eval_three_qubit_monomials(THREE_QUBIT_MONOMIALS, s) for s in states])
    out = {}
    for key, obs in kempe_observables().items():
        coeffs = twirl.twirl_coefficients(obs, 3)
        y = coeffs.moments(states)
        sol, *_ = np.linalg.lstsq(design, y, rcond=None)
        residual = float(np.max(np.abs(design @ sol - y)))
        if residual > RECOVERY_TOL:
            raise twirl.EngineError(f"Kempe calibration residual {residual:.2e} for {key}")
        out[key] = sol
    return out


def _pad_terms(terms, pair: str):
    """Embed two-party product terms into three parties, identity on the
    party missing from ``pair`` (one of AB, BC, AC)."""
    slots = {"AB": (0, 1), "BC": (1, 2), "AC": (0, 2)}[pair]
    padded = []
    for term in terms:
        full = [_I, _I, _I]
        full[slots[0]] = term[0]
        full[slots[1]] = term[1]
        padded.append(tuple(full))
    return tuple(padded)


def marginal_bloch(state: ThreeQubitState, pair: str) -> TwoQubitState:
    if pair == "AB":
        return TwoQubitState(state.alpha, state.beta, state.TAB)
    if pair == "BC":
        return TwoQubitState(state.beta, state.gamma, state.TBC)
    if pair == "AC":
        return TwoQubitState(state.alpha, state.gamma, state.TCA.T)
    raise ValueError("pair must be AB, BC or AC")


def _marginal_pipeline_value(name: str, pair: str, state: ThreeQubitState,
                             cfg: ProtocolConfig, cache: dict):
    """Run a two-qubit pipeline on one pair of a three-qubit state via
    identity-padded observables; returns (estimate, stderr)."""
    key = (name, pair)
    if key in cache:
        return cache[key]
    pipe = PIPELINES[name]
    known_values, known_errs = {}, {}
    for pre in pipe.prerequisites:
        v, e = _marginal_pipeline_value(pre, pair, state, cfg, cache)
        known_values[pre] = v
        known_errs[pre] = e
    coeffs = calibrate(name)
    padded = _pad_terms(pipe.terms, pair)
    if cfg is None:
        obs = TripartiteObservable([tuple(t) for t in padded])
        r_value = twirl.twirl_coefficients(obs, pipe.t).moment(state)
        r_err = 0.0
    else:
        run = ProtocolConfig(cfg.unitary_count, cfg.shots_per_setting, pipe.t,
                             drift_rate=cfg.drift_rate,
                             setting_change_cost=cfg.setting_change_cost,
                             seed=cfg.seed)
        est = simulate_moment([list(t) for t in padded], state, run,
                              label=f"{name}-{pair}")
        r_value, r_err = est.mean, est.stderr
    estimate = _invert_calibration(pipe, coeffs, r_value, known_values)
    target_c = coeffs[pipe.dictionary.index(pipe.target)]
    err = r_err
    for nm, c in zip(pipe.dictionary, coeffs):
        if nm not in (pipe.target, "1") and abs(c) > COEFF_NEGLIGIBLE:
            err += abs(c) * _monomial_error(nm, known_values, known_errs)
    cache[key] = (float(estimate), float(err / abs(target_c)))
    return cache[key]


def recover_kempe(state, cfg: ProtocolConfig = None) -> RecoveryReport:
    """Recover the Kempe invariant with tensor-rank-2 settings.

    The five rank-<=2 observables isolate ||W||^2, the three W-correlation
    cross terms and tr(TAB TBC TCA); all remaining ingredients are
    recovered through identity-padded single-pair (rank-1) pipelines.
    """
    state = twirl.as_bloch(state, parties=3)
    calib = _kempe_calibration()
    names = THREE_QUBIT_MONOMIALS
    target_idx = [names.index(t) for t in KEMPE_TARGETS]

    # rank-1 marginal recoveries feeding the linear system and the final sum
    pair_cache = {}
    marg = {}
    marg_err = {}
    for label, pipes in (("AB", ("I4", "I7", "I2", "I12")),
                         ("BC", ("I4", "I7", "I2", "I12")),
                         ("AC", ("I4", "I7", "I2", "I12"))):
        for p in pipes:
            v, e = _marginal_pipeline_value(p, label, state, cfg, pair_cache)
            marg[(p, label)] = v
            marg_err[(p, label)] = e
    known = {
        "1": 1.0,
        "a2": marg[("I4", "AB")], "b2": marg[("I7", "AB")], "g2": marg[("I7", "BC")],
        "Tab2": marg[("I2", "AB")], "Tbc2": marg[("I2", "BC")], "Tca2": marg[("I2", "AC")],
        "aTABb": marg[("I12", "AB")], "bTBCg": marg[("I12", "BC")],
        "gTCAa": marg[("I12", "AC")],
        "detAB": 0.0, "detBC": 0.0, "detCA": 0.0,
    }
    known_err = {
        "a2": marg_err[("I4", "AB")], "b2": marg_err[("I7", "AB")],
        "g2": marg_err[("I7", "BC")],
        "Tab2": marg_err[("I2", "AB")], "Tbc2": marg_err[("I2", "BC")],
        "Tca2": marg_err[("I2", "AC")],
        "aTABb": marg_err[("I12", "AB")], "bTBCg": marg_err[("I12", "BC")],
        "gTCAa": marg_err[("I12", "AC")],
    }

    # moments of the five decoupling observables
    r_vals, r_errs = {}, {}
    for key, obs in kempe_observables().items():
        if cfg is None:
            r_vals[key] = twirl.twirl_coefficients(obs, 3).moment(state)
            r_errs[key] = 0.0
        else:
            run = ProtocolConfig(cfg.unitary_count, cfg.shots_per_setting, 3,
                                 drift_rate=cfg.drift_rate,
                                 setting_change_cost=cfg.setting_change_cost,
                                 seed=cfg.seed)
            est = simulate_moment(list(obs.terms), state, run, label=f"kempe-{key}")
            r_vals[key] = est.mean
            r_errs[key] = est.stderr

    # linear system Theta @ targets = R - known part
    keys = tuple(kempe_observables())
    theta = np.array([[calib[k][i] for i in target_idx] for k in keys])
    rhs = np.empty(len(keys))
    rhs_err = np.empty(len(keys))
    for row, k in enumerate(keys):
        rest = r_vals[k]
        err = r_errs[k]
        for nm, c in zip(names, calib[k]):
            if nm not in KEMPE_TARGETS:
                rest -= c * known[nm]
                err += abs(c) * known_err.get(nm, 0.0)
        rhs[row] = rest
        rhs_err[row] = err
    targets, *_ = np.linalg.lstsq(theta, rhs, rcond=None)
    target_vals = dict(zip(KEMPE_TARGETS, targets))
    theta_inv = np.linalg.pinv(theta)
    target_errs = dict(zip(KEMPE_TARGETS, np.abs(theta_inv) @ rhs_err))

    estimate = (
        1.0 + known["a2"] + known["b2"] + known["g2"]
        + known["aTABb"] + known["bTBCg"] + known["gTCAa"]
        + target_vals["TTT"]
    ) / 8.0
    stderr = (
        sum(known_err.get(k, 0.0) for k in
            ("a2", "b2", "g2", "aTABb", "bTBCg", "gTCAa"))
        + target_errs["TTT"]
    ) / 8.0
    ref = kempe_record(state)
    return RecoveryReport(
        invariant="kempe",
        estimate=float(estimate),
        stderr=float(stderr),
        reference=ref.kempe,
        settings_used=2,
        details={
            "w_norm_sq": float(target_vals["W2"]),
            "w_norm_sq_reference": ref.w_norm_sq,
            "trTTT": float(target_vals["TTT"]),
            "trTTT_reference": ref.trTTT,
        },
    )

"""Monte Carlo oracle for randomized-measurement moments.

Estimates the moments by direct Haar sampling of local SU(2) rotations with
exact per-sample expectation values (no shot noise), independent of the
permutation-operator engine.  Used as the statistical cross-check of every
exact result.
"""

from dataclasses import dataclass

import numpy as np

from .linalg import num_qubits
from .rng import substream


@dataclass
class MCEstimate:
    mean: float
    stderr: float
    samples: int
    seed: int

    def as_dict(self) -> dict:
        return {
            "mean": self.mean,
            "stderr": self.stderr,
            "samples": self.samples,
            "seed": self.seed,
        }


def haar_su2(rng: np.random.Generator) -> np.ndarray:
    """Haar-random SU(2) element via a normalized Gaussian quaternion.

    The unit quaternion (a, b, c, d) maps to
    [[a + ib, c + id], [-c + id, a - ib]], which has determinant
    a^2 + b^2 + c^2 + d^2 = 1 exactly.
    """
    return haar_su2_batch(rng, 1)[0]


def haar_su2_batch(rng: np.random.Generator, count: int) -> np.ndarray:
    """Stack of ``count`` independent Haar-random SU(2) matrices."""
    q = rng.standard_normal((count, 4))
    q /= np.linalg.norm(q, axis=1, keepdims=True)
    a, b, c, d = q[:, 0], q[:, 1], q[:, 2], q[:, 3]
    u = np.empty((count, 2, 2), dtype=complex)
    u[:, 0, 0] = a + 1j * b
    u[:, 0, 1] = c + 1j * d
    u[:, 1, 0] = -c + 1j * d
    u[:, 1, 1] = a - 1j * b
    return u


def local_unitary_batch(rng: np.random.Generator, parties: int, count: int) -> np.ndarray:
    """Stack of count local rotations U_1 x ... x U_n, each factor Haar."""
    us = [haar_su2_batch(rng, count) for _ in range(parties)]
    full = us[0]
    for nxt in us[1:]:
        full = np.einsum("kab,kcd->kacbd", full, nxt).reshape(
            count, full.shape[1] * 2, full.shape[2] * 2
        )
    return full


def mc_moment(observable: np.ndarray, rho: np.ndarray, t: int,
              samples: int, seed: int) -> MCEstimate:
    """Plain Monte Carlo estimate of the t-th randomized-measurement moment.

    Averages tr(rho U^dag O U)^t over i.i.d. local-unitary tuples; each
    sample uses the exact expectation value, so the only randomness is the
    Haar draw.  Deterministic per seed.
    """
    observable = np.asarray(observable, dtype=complex)
    rho = np.asarray(rho, dtype=complex)
    parties = num_qubits(rho)
    if observable.shape != rho.shape:
        raise ValueError("observable and state dimensions differ")
    rng = substream(seed, "haar_mc.mc_moment", str(t), str(samples))
    values = np.empty(samples)
    # draw in fixed-size blocks so memory stays bounded at large sample counts
    block = 20000
    done = 0
    while done < samples:
        n = min(block, samples - done)
        u = local_unitary_batch(rng, parties, n)
        rotated = np.einsum("kab,bc,kdc->kad", u, rho, u.conj())
        vals = np.real(np.einsum("kad,da->k", rotated, observable))
        values[done:done + n] = vals**t
        done += n
    mean = float(np.mean(values))
    stderr = float(np.std(values, ddof=1) / np.sqrt(samples)) if samples > 1 else 0.0
    return MCEstimate(mean=mean, stderr=stderr, samples=samples, seed=seed)

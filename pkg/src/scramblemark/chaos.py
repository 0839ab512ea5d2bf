"""Logistic-map keystreams and the correlation statistics used to detect them.

Every sequence here is produced with plain IEEE-754 double arithmetic in a
fixed evaluation order, because the receiver has to regenerate the exact same
permutations from the same keys.
"""

from dataclasses import dataclass

import numpy as np

from .errors import ParameterError, WatermarkError

BURN_IN = 500
MU_MIN, MU_MAX = 3.57, 4.0
DIGITS_SCALE = 1e14


@dataclass(frozen=True)
class ChaosKey:
    """Parameter ``mu`` and initial state ``x0`` of the logistic map."""

    mu: float
    x0: float

    def __post_init__(self):
        mu, x0 = float(self.mu), float(self.x0)
        if not (MU_MIN <= mu <= MU_MAX):
            raise ParameterError(f"mu={mu!r} outside [{MU_MIN}, {MU_MAX}]")
        # 0 and 1 are absorbing: the orbit collapses to 0 immediately
        if not (0.0 < x0 < 1.0):
            raise ParameterError(f"x0={x0!r} must lie strictly inside (0, 1)")
        object.__setattr__(self, "mu", mu)
        object.__setattr__(self, "x0", x0)

    def to_text(self) -> str:
        """Two decimal lines with 17 significant digits (lossless for doubles)."""
        return f"{self.mu:.17g}\n{self.x0:.17g}\n"

    @classmethod
    def from_text(cls, text: str) -> "ChaosKey":
        fields = text.replace(",", " ").split()
        if len(fields) != 2:
            raise ParameterError("chaos key text must hold exactly two numbers (mu, x0)")
        return cls(float(fields[0]), float(fields[1]))


def iterate_logistic(key: ChaosKey, burn_in: int = BURN_IN, length: int = 1) -> np.ndarray:
    """Return ``x[burn_in+1] .. x[burn_in+length]`` of ``x <- mu*x*(1-x)``."""
    if length < 1:
        raise ParameterError("length must be >= 1")
    if burn_in < 0:
        raise ParameterError("burn_in must be >= 0")
    mu, x = key.mu, key.x0
    for _ in range(burn_in):
        x = mu * x * (1.0 - x)
    out = [0.0] * length
    for i in range(length):
        x = mu * x * (1.0 - x)
        out[i] = x
    return np.array(out, dtype=np.float64)


def digitize(seq, R: int) -> np.ndarray:
    """Map each value to ``floor(x * 1e14) mod R``."""
    if R < 2:
        raise ParameterError("modulus R must be >= 2")
    x = np.asarray(seq, dtype=np.float64)
    return (np.floor(x * DIGITS_SCALE).astype(np.int64) % R).astype(np.int64)


def to_signs(bits) -> np.ndarray:
    """0 -> +1, 1 -> -1."""
    b = np.asarray(bits, dtype=np.int64)
    if b.size and not np.isin(b, (0, 1)).all():
        raise WatermarkError("to_signs expects a binary (R=2) sequence")
    return (1 - 2 * b).astype(np.int8)


def sign_sequence(key: ChaosKey, length: int, burn_in: int = BURN_IN) -> np.ndarray:
    """Chaotic +/-1 sequence of the given length drawn from ``key``."""
    return to_signs(digitize(iterate_logistic(key, burn_in, length), 2))


def _lagged_mean(b, b2, tau: int) -> float:
    b = np.asarray(b, dtype=np.float64)
    b2 = np.asarray(b2, dtype=np.float64)
    if b.size == 0:
        raise WatermarkError("correlation of an empty sequence is undefined")
    if b.shape != b2.shape:
        raise WatermarkError(f"length mismatch: {b.size} vs {b2.size}")
    # indices past the end wrap around
    return float(np.dot(b, np.roll(b2, -abs(int(tau)))) / b.size)


def autocorrelation(b, tau: int) -> float:
    return _lagged_mean(b, b, tau)


def crosscorrelation(b, b2, tau: int) -> float:
    return _lagged_mean(b, b2, tau)


def correlation_curve(b, b2, max_lag: int) -> np.ndarray:
    """CC(tau) for tau = -max_lag..max_lag, computed for all lags at once via FFT."""
    b = np.asarray(b, dtype=np.float64)
    b2 = np.asarray(b2, dtype=np.float64)
    if b.size == 0 or b.shape != b2.shape:
        raise WatermarkError("need two nonempty sequences of equal length")
    sums = np.fft.irfft(np.conj(np.fft.rfft(b)) * np.fft.rfft(b2), n=b.size)
    if np.array_equal(b, np.round(b)) and np.array_equal(b2, np.round(b2)):
        # integer sequences have integer lagged sums; drop the FFT round-off
        sums = np.round(sums)
    circ = sums / b.size
    lags = np.abs(np.arange(-max_lag, max_lag + 1)) % b.size
    return circ[lags]


def sort_index(seq) -> np.ndarray:
    """1-based positions of the values in ascending order; ties keep original order."""
    x = np.asarray(seq, dtype=np.float64)
    if x.size == 0:
        raise WatermarkError("cannot sort an empty sequence")
    return np.argsort(x, kind="stable").astype(np.int64) + 1

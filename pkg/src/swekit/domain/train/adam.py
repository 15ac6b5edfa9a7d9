"""Row-sparse Adam over an embedding matrix.

Moments have the same shape as the trainable table. A step only touches the
rows present in the batch; untouched rows keep their moments unchanged
(lazy update). The bias-correction counter is global.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from swekit.common.errors import UsageError


@dataclass
class SparseAdam:
    shape: tuple[int, int]
    lr: float = 0.001
    beta1: float = 0.9
    beta2: float = 0.999
    eps: float = 1e-8
    t: int = 0
    m: np.ndarray = field(init=False, repr=False)
    v: np.ndarray = field(init=False, repr=False)

    def __post_init__(self) -> None:
        if self.lr <= 0:
            raise UsageError(f"learning rate must be > 0, got {self.lr}")
        if not (0.0 <= self.beta1 < 1.0 and 0.0 <= self.beta2 < 1.0):
            raise UsageError(f"betas must be in [0, 1), got ({self.beta1}, {self.beta2})")
        self.m = np.zeros(self.shape, dtype=np.float64)
        self.v = np.zeros(self.shape, dtype=np.float64)

    def step(self, params: np.ndarray, rows: np.ndarray, grads: np.ndarray) -> None:
        """Update params[rows] in place; `rows` must be unique."""
        self.t += 1
        if rows.size == 0:
            return
        bc1 = 1.0 - self.beta1**self.t
        bc2 = 1.0 - self.beta2**self.t

        m = self.m[rows]
        v = self.v[rows]
        m *= self.beta1
        m += (1.0 - self.beta1) * grads
        v *= self.beta2
        v += (1.0 - self.beta2) * (grads * grads)
        self.m[rows] = m
        self.v[rows] = v

        denom = np.sqrt(v / bc2) + self.eps
        params[rows] -= (self.lr / bc1) * m / denom

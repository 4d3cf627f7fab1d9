"""
Test integrands on [0,1)^d with known integrals.
"""
from dataclasses import dataclass
from typing import Callable, Dict

import numpy as np

from laurentnet.core.errors import ConfigError

OSCILLATORY_SHIFT = 0.3


@dataclass(frozen=True)
class Integrand:
    name: str
    fn: Callable[[np.ndarray], np.ndarray]
    exact: Callable[[int], float]

    def __call__(self, x: np.ndarray) -> np.ndarray:
        return self.fn(np.atleast_2d(x))

    def integral(self, d: int) -> float:
        return self.exact(d)


def _oscillatory(x: np.ndarray) -> np.ndarray:
    return np.cos(2 * np.pi * OSCILLATORY_SHIFT + x.sum(axis=1))


def _oscillatory_integral(d: int) -> float:
    # Re e^{i 2 pi u} prod_j (e^{i} - 1)/i
    factor = (np.exp(1j) - 1) / 1j
    return float(np.real(np.exp(2j * np.pi * OSCILLATORY_SHIFT) * factor**d))


INTEGRANDS: Dict[str, Integrand] = {
    "constant": Integrand(
        name="constant",
        fn=lambda x: np.ones(x.shape[0]),
        exact=lambda d: 1.0,
    ),
    "linear": Integrand(
        name="linear",
        fn=lambda x: x[:, 0],
        exact=lambda d: 0.5,
    ),
    "product": Integrand(
        name="product",
        fn=lambda x: np.prod(1.0 + (x - 0.5), axis=1),
        exact=lambda d: 1.0,
    ),
    "oscillatory": Integrand(
        name="oscillatory",
        fn=_oscillatory,
        exact=_oscillatory_integral,
    ),
    "indicator": Integrand(
        name="indicator",
        fn=lambda x: (x[:, 0] < 1.0 / 3.0).astype(np.float64),
        exact=lambda d: 1.0 / 3.0,
    ),
}


def get_integrand(name: str) -> Integrand:
    try:
        return INTEGRANDS[name]
    except KeyError:
        raise ConfigError(f"Unknown integrand {name!r}; choose one of {', '.join(sorted(INTEGRANDS))}")

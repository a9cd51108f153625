import math

import numpy as np

from measurecond.linalg import Projector, StateVector

SQRT_HALF = 1 / math.sqrt(2)


def e(dim, i):
    return StateVector.basis(dim, i)


def ket(*amps):
    return StateVector(np.array(amps, dtype=complex))


def proj(*vectors):
    return Projector.from_span([np.asarray(v.amplitudes if isinstance(v, StateVector) else v) for v in vectors])

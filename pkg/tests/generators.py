"""Random instances shared by the test modules."""

import numpy as np

from gausscap.channel import ChannelClass, GaussianChannel, canonical_channel, compose_unitaries
from gausscap.gaussian_core import rotation, squeeze

ALL_CLASSES = list(ChannelClass)


def random_symplectic(rng, max_r=4.0):
    return rotation(rng.uniform(0, 2 * np.pi)) @ squeeze(rng.uniform(1.0, max_r)) @ rotation(
        rng.uniform(0, 2 * np.pi)
    )


def random_physical_cm(rng, max_nu=5.0):
    nu = rng.uniform(0.5, max_nu)
    s = random_symplectic(rng)
    return nu * s @ s.T


def random_canonical_params(cls, rng):
    cls = ChannelClass(cls)
    kw = dict(nbar=rng.uniform(0, 3), r=rng.uniform(1, 5), t=rng.uniform(0.2, 4), n=rng.uniform(0.2, 4))
    if cls is ChannelClass.C_att:
        kw["tau"] = rng.uniform(0.05, 0.95)
    elif cls is ChannelClass.C_amp:
        kw["tau"] = rng.uniform(1.05, 5)
    elif cls is ChannelClass.D:
        kw["tau"] = -rng.uniform(0.1, 4)
    return kw


def random_channel(cls, rng, max_r=3.0):
    """A channel of class ``cls`` hidden behind random Gaussian unitaries."""
    ch = canonical_channel(cls, **random_canonical_params(cls, rng))
    return compose_unitaries(
        ch,
        (rng.normal(size=2), random_symplectic(rng, max_r)),
        (rng.normal(size=2), random_symplectic(rng, max_r)),
    )

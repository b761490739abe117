"""dmabeam: power-minimizing downlink beamforming for metasurface antenna arrays.

Library layout:

- ``numerics``  shared dense complex linear algebra (eigendecomposition,
  Kronecker/vectorization identities, dBm conversions)
- ``channel``   planar-array geometry, spherical-wave channel, user sampling
- ``dma``       waveguide-fed array state, Lorentzian weight set, weight-step
  problem data
- ``sdp``       interior-point solver for trace-objective / trace-inequality
  semidefinite programs, rank-one extraction, randomized recovery
- ``beamform``  the three optimizers (fully digital, metasurface alternating,
  unrestricted weights) and solution evaluation
- ``harness``   Monte-Carlo experiment runner, statistics, CSV/JSON export
"""

from . import _core, beamform, channel, dma, harness, numerics, sdp

__version__ = "0.1.0"

__all__ = [
    "numerics",
    "channel",
    "dma",
    "sdp",
    "beamform",
    "harness",
    "_core",
    "__version__",
]

"""Top level API.

.. data:: __version__
    :type: str

    Version number as calculated by https://github.com/pypa/setuptools_scm
"""

from ._version import __version__
from .datatypes import Event, FiveVector, Flavor, FourVelocity, MechanicalSpace
from .measure import Dimension, Quantity, parse_dimension

__all__ = [
    "__version__",
    "Dimension",
    "Event",
    "FiveVector",
    "Flavor",
    "FourVelocity",
    "MechanicalSpace",
    "Quantity",
    "parse_dimension",
]

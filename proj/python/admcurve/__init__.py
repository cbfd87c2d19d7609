"""Arbitrage-free OIS and CDS term structures."""

from ._core import *  # noqa: F401,F403
from ._core import __doc__  # noqa: F401

OIS_2013_05_31 = (
    [1, 2, 3, 4, 5, 6, 7, 8, 9, 10, 15, 20, 30, 40],
    [0.000720, 0.001530, 0.002870, 0.004540, 0.006390, 0.008210, 0.009930,
     0.011570, 0.013090, 0.014470, 0.019300, 0.021160, 0.021820, 0.022090],
)

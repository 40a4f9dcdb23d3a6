"""Echo state network forecasting engine.

A fixed random reservoir with leaky-integrator dynamics and a ridge readout
whose penalty is chosen by information-criterion-guided random search, plus
the surrounding tooling: M4-format data handling, preprocessing, simple
benchmark methods, accuracy metrics and a resumable hyperparameter sweep.
"""

from esnforecast._core import *  # noqa: F401,F403
from esnforecast._core import __version__  # noqa: F401

"""Python bindings for the macdonald C++ library."""
from ._core import *  # noqa: F401,F403
from ._core import DomainError, NumericalError  # noqa: F401

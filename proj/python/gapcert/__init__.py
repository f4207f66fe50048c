"""Spectral gap certificates for block matrices."""

from ._gapcert import *  # noqa: F401,F403
from ._gapcert import GapcertError

__all__ = [name for name in dir() if not name.startswith("_")]

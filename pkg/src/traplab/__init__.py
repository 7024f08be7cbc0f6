"""Trap-model and K-process simulation toolkit."""

from ._kernels import BACKEND as KERNEL_BACKEND

__version__ = "0.1.0"

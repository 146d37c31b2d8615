"""Mellin-transform zeta families: evaluation, Hankel continuation,
Hamiltonian identity checks, and critical-line zero finding."""

try:
    from ._zhl import *  # noqa: F401,F403  (installed package layout)
except ImportError:  # in-tree build: the extension sits next to the package
    from _zhl import *  # noqa: F401,F403

__version__ = "0.1.0"

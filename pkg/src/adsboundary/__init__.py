"""Foundation sets, boundary relations and simplicity certificates for Z^d ⋊ P."""

__version__ = "0.1.0"

"""mu_orient: exact-arithmetic verification of C_p representation algebra,
elliptic formal group laws, and the height p-1 fixed point spectral sequence.
"""

__version__ = "0.1.0"

"""p-adic exponentials, Hahn series and integer relations at desk scale."""

__version__ = "0.1.0"

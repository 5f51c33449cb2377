"""Decision procedures and exhaustive verifiers for (ak)^x + (bk)^y = ((a+b)k)^z."""

__version__ = "0.1.0"

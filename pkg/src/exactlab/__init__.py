# Exact and quotient category verification workbench

__version__ = "0.1.0"

"""Single source of the package version for modules that need it at import
time without risking a circular import through the package root."""

__version__ = "0.1.0"

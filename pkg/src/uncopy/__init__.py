"""State-vector toolkit for copying and deleting machines."""

__version__ = "0.1.0"

# src/perqwalk/__init__.py
"""
perqwalk: coined quantum walks on dynamically percolated 2D lattices.

Dynamics live in `perqwalk.walk`, the long-time engine in
`perqwalk.asymptotics`, and the command line in `perqwalk.io.cli`.
"""

__version__ = "0.1.0"

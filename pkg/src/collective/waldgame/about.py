"""
Version information for the collective.waldgame package.
"""

__version__ = "1.0.0a0"

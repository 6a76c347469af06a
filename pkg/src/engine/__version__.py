#!/usr/bin/env python3
"""
SLQ Engine Version
"""

__version__ = "0.1.0"

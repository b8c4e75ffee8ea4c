"""
Test package for the secant-defect engine.
"""

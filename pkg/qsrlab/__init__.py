"""
This file marks the 'qsrlab' directory as a Python package.
"""

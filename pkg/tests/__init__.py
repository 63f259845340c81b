"""
Unified tests package for the entire project.
"""

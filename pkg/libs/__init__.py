"""
Single-peaked election control and manipulation library
"""

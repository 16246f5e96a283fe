"""
Test suite for semantic-sbml
"""

"""
🔬 Unit Tests
Parser, semantics, probability, measures, operators, rankings and postulates in isolation
"""

"""
🔗 Integration Tests
Command line runs, worked examples and long fuzz runs
"""

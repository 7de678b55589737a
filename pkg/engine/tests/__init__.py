"""
🧪 Test Suite for the KM Belief Change Engine
Unit tests per model and service, integration tests for the command line and the worked examples
"""

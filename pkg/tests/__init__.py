"""
Tests package for the ROOPL toolchain
"""

"""
Service layer: instance loading, random generation and check dispatch.
"""

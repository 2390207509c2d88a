"""
API Package
FastAPI REST API for the distribution matcher
"""

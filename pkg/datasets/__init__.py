"""Shipped distributions and block-file generators"""

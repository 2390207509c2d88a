"""
CLI Package
Command implementations, block-file formats and output rendering
"""

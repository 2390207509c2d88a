"""
Matcher Package
Constant composition distribution matching: type math, ranking,
the streaming arithmetic coder, and performance analysis
"""

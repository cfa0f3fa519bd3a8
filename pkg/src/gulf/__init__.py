"""Graph covers under the global, union, local and folded covering numbers."""

"""Faddeev modular double: special functions, shift operators, reductions and fusion."""

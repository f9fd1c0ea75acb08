from fractions import Fraction

from hypothesis import strategies as st

from qexpand import Q2, FieldElement
from qexpand.words import FiniteWord, PeriodicWord

digits = st.lists(st.integers(0, 1), max_size=10).map(tuple)
periods = st.lists(st.integers(0, 1), min_size=1, max_size=6).map(tuple)
periodic_words = st.builds(PeriodicWord, digits, periods)
finite_words = st.builds(FiniteWord, digits)

small_fractions = st.fractions(min_value=-20, max_value=20, max_denominator=12)
elements = st.lists(small_fractions, min_size=4, max_size=4).map(lambda cs: FieldElement.from_coeffs(Q2, cs))
nonzero_elements = elements.filter(lambda e: not e.is_zero())

__all__ = ["digits", "periods", "periodic_words", "finite_words", "elements", "nonzero_elements", "Fraction"]

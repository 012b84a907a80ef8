from fractions import Fraction

from hypothesis import settings, strategies as st

from abelchain.polycore import JetPolynomial, K, T, X

settings.register_profile("default", max_examples=60, deadline=None)
settings.load_profile("default")

VARS = [T, K, X(1), X(2), X(3)]

rationals = st.fractions(min_value=-5, max_value=5, max_denominator=6)


@st.composite
def polynomials(draw, max_terms=4, max_exp=3):
    terms = draw(
        st.lists(
            st.tuples(
                st.lists(st.tuples(st.sampled_from(VARS), st.integers(1, max_exp)), max_size=3),
                rationals,
            ),
            max_size=max_terms,
        )
    )
    return JetPolynomial([(tuple(m), c) for m, c in terms])


@st.composite
def assignments(draw):
    return {v: draw(st.fractions(min_value=-3, max_value=3, max_denominator=4)) for v in VARS}


def frac(x) -> Fraction:
    return Fraction(x)

from fractions import Fraction

from hypothesis import HealthCheck, settings, strategies as st

settings.register_profile("afflab", deadline=None, max_examples=60,
                          suppress_health_check=[HealthCheck.too_slow])
settings.load_profile("afflab")


def rationals(bound=3, max_den=7):
    return st.builds(lambda n, d: Fraction(n, d),
                     st.integers(-bound * max_den, bound * max_den),
                     st.integers(1, max_den)).filter(lambda q: abs(q) <= bound)


def gammas(bound=3, max_den=7):
    return st.tuples(*(rationals(bound, max_den) for _ in range(6)))


def gl2(bound=3):
    ints = st.integers(-bound, bound)
    return st.tuples(ints, ints, ints, ints).filter(lambda m: m[0] * m[3] - m[1] * m[2] != 0) \
        .map(lambda m: [[Fraction(m[0]), Fraction(m[1])], [Fraction(m[2]), Fraction(m[3])]])

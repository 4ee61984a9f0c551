import os
from fractions import Fraction

from hypothesis import HealthCheck, settings, strategies as st

settings.register_profile("default", max_examples=100, deadline=None,
                          suppress_health_check=[HealthCheck.too_slow])
settings.register_profile("ci", max_examples=300, deadline=None,
                          suppress_health_check=[HealthCheck.too_slow])
settings.load_profile(os.environ.get("HYPOTHESIS_PROFILE", "default"))


def sizes(max_den: int = 64):
    """Exact sizes in (0, 1] on a modest denominator grid."""
    return st.integers(2, max_den).flatmap(
        lambda q: st.integers(1, q).map(lambda p: Fraction(p, q)))


def item_lists(min_size: int = 0, max_size: int = 10, max_den: int = 64):
    return st.lists(sizes(max_den), min_size=min_size, max_size=max_size)

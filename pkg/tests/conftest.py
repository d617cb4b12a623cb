import hypothesis

from collatzbin import BinaryNat

# bit-string walks are slow per-example compared to int arithmetic;
# the per-example deadline just causes flaky timeouts here
hypothesis.settings.register_profile("default", deadline=None)
hypothesis.settings.load_profile("default")


def bn(n: int) -> BinaryNat:
    return BinaryNat.from_int(n)

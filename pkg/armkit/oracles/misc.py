from typing import List, Sequence, Union


def palindrome(word: str) -> bool:
    return word == word[::-1]


def power_of_two(word: str) -> bool:
    """0^n with n a power of two."""
    n = len(word)
    return set(word) <= {"0"} and n > 0 and n & (n - 1) == 0


def sorted_merge(numbers: Sequence[str]) -> List[str]:
    return sorted(numbers, key=lambda bits: int(bits, 2))


def zeros_ones(word: str) -> bool:
    """0^n 1^n."""
    half = len(word) // 2
    return len(word) % 2 == 0 and word == "0" * half + "1" * half


_CHECKS = {
    "palindrome": palindrome,
    "power_of_two": power_of_two,
    "sorted_merge": sorted_merge,
    "zeros_ones": zeros_ones,
}


def oracle_misc(kind: str, value) -> Union[bool, List[str]]:
    check = _CHECKS.get(kind)
    if check is None:
        raise ValueError(f"unknown oracle {kind!r}")
    return check(value)

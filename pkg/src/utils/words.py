"""32-bit two's complement word helpers shared by the interpreter and the VM."""
import numpy as np

MASK = 0xFFFFFFFF
SIGN_BIT = 0x80000000


def to_word(value: int) -> int:
    """Wrap an arbitrary Python int into the signed 32-bit range."""
    value &= MASK
    return value - (1 << 32) if value & SIGN_BIT else value


def to_unsigned(value: int) -> int:
    return value & MASK


def fits_word(value: int) -> bool:
    return -(1 << 31) <= value < (1 << 31)


def div_trunc(a: int, b: int) -> int:
    """Division truncating toward zero; caller guarantees b != 0."""
    q = abs(a) // abs(b)
    return to_word(q if (a < 0) == (b < 0) else -q)


def mod_trunc(a: int, b: int) -> int:
    """Remainder with the sign of the dividend, paired with div_trunc."""
    r = abs(a) % abs(b)
    return to_word(-r if a < 0 else r)


def rotate_left(value: int, amount: int) -> int:
    amount &= 31
    u = value & MASK
    return to_word(((u << amount) | (u >> (32 - amount))) & MASK) if amount else to_word(u)


def rotate_right(value: int, amount: int) -> int:
    return rotate_left(value, (32 - (amount & 31)) & 31)


def shift_left(value: int, amount: int) -> int:
    return to_word((value & MASK) << (amount & 31))


def shift_right_logical(value: int, amount: int) -> int:
    return to_word((value & MASK) >> (amount & 31))


def shift_right_arithmetic(value: int, amount: int) -> int:
    return to_word(to_word(value) >> (amount & 31))


def new_memory(size: int) -> np.ndarray:
    return np.zeros(size, dtype=np.int32)

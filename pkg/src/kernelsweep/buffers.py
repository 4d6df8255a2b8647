"""Typed, contiguous field buffers shared by the reference ops and the backends."""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

# Complex grids are stored as numpy complex64, which is memory-identical to
# interleaved (re, im) float32 pairs in row-major order.
DTYPES = {
    "f32": np.float32,
    "c64_pair": np.complex64,
    "i8": np.int8,
    "u32": np.uint32,
}

ELEMENT_SIZE = {"f32": 4, "c64_pair": 8, "i8": 1, "u32": 4}


@dataclass
class FieldBuffer:
    element_kind: str
    extents: tuple
    data: np.ndarray = field(repr=False)

    def __post_init__(self):
        if self.element_kind not in DTYPES:
            raise ValueError(f"unknown element kind {self.element_kind!r}")
        self.extents = tuple(int(e) for e in self.extents)
        expected = DTYPES[self.element_kind]
        if self.data.dtype != expected:
            raise ValueError(
                f"buffer dtype {self.data.dtype} does not match element kind {self.element_kind}"
            )
        if not self.data.flags["C_CONTIGUOUS"]:
            raise ValueError("buffer payload must be contiguous row-major")
        n = 1
        for e in self.extents:
            n *= e
        if self.data.size != n:
            raise ValueError(
                f"payload has {self.data.size} elements, extents {self.extents} imply {n}"
            )

    @property
    def nbytes(self) -> int:
        return self.data.size * ELEMENT_SIZE[self.element_kind]

    def copy(self) -> "FieldBuffer":
        return FieldBuffer(self.element_kind, self.extents, self.data.copy())

    def byte_equal(self, other: "FieldBuffer") -> bool:
        return (
            self.element_kind == other.element_kind
            and self.extents == other.extents
            and self.data.tobytes() == other.data.tobytes()
        )


def make_buffer(element_kind: str, extents, values) -> FieldBuffer:
    """Build a FieldBuffer from any array-like, casting to the element dtype."""
    arr = np.ascontiguousarray(values, dtype=DTYPES[element_kind]).reshape(tuple(extents))
    return FieldBuffer(element_kind, tuple(extents), arr)


def zeros(element_kind: str, extents) -> FieldBuffer:
    arr = np.zeros(tuple(extents), dtype=DTYPES[element_kind])
    return FieldBuffer(element_kind, tuple(extents), arr)

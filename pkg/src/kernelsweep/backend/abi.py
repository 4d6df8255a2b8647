"""The candidate ABI: descriptor layout and per-task entry-point bindings.

The C header shipped with the seed kernels is the authoritative byte-level
contract; the ctypes mirror here must match it field for field.  Layout is
ordered 8-byte members first, so the struct packs with no padding:

    uint64 seed
    uint64 buf_len[8]      element counts
    void*  buf[8]
    float  consts[16]
    uint32 params[8]
    uint32 abi_version, n_buffers, n_params, n_consts, steps, step_index

Single-entry tasks receive one call per repetition and own their step loop
(descriptor.steps).  Phased tasks expose several entry symbols which the
harness sequences once per step with step_index updated, optionally swapping
the first two buffer pointers between calls (ping-pong).
"""

from __future__ import annotations

import ctypes
from dataclasses import dataclass

from ..tasks import lj_box_edge
from ..tasks.types import SizeConfig, TaskSpec

ABI_VERSION = 1
MAX_BUFFERS = 8
MAX_PARAMS = 8
MAX_CONSTS = 16


class Descriptor(ctypes.Structure):
    _fields_ = [
        ("seed", ctypes.c_uint64),
        ("buf_len", ctypes.c_uint64 * MAX_BUFFERS),
        ("buf", ctypes.c_void_p * MAX_BUFFERS),
        ("consts", ctypes.c_float * MAX_CONSTS),
        ("params", ctypes.c_uint32 * MAX_PARAMS),
        ("abi_version", ctypes.c_uint32),
        ("n_buffers", ctypes.c_uint32),
        ("n_params", ctypes.c_uint32),
        ("n_consts", ctypes.c_uint32),
        ("steps", ctypes.c_uint32),
        ("step_index", ctypes.c_uint32),
    ]


assert ctypes.sizeof(Descriptor) == 256, "descriptor layout drifted from the frozen ABI"


@dataclass(frozen=True)
class TaskBinding:
    entries: tuple  # entry symbol names, call order
    plan: str  # single | phased
    swap: str = "none"  # none | step | entry  (swap buf[0] <-> buf[1])

    @property
    def multi_kernel(self) -> bool:
        return self.plan == "phased"


BINDINGS = {
    "saxpy": TaskBinding(("saxpy_pass",), "single"),
    "heat2d": TaskBinding(("heat2d_run",), "single"),
    "wave3d": TaskBinding(("wave3d_run",), "single"),
    "nbody": TaskBinding(("nbody_run",), "single"),
    "hmc": TaskBinding(("hmc_run",), "single"),
    "lbm": TaskBinding(("lbm_run",), "single"),
    "ising": TaskBinding(("ising_run",), "single"),
    "lj": TaskBinding(("lj_clear_cells", "lj_build_cells", "lj_step"), "phased"),
    "gradshaf": TaskBinding(("gs_axis_max", "gs_relax"), "phased", swap="step"),
    "fft3d": TaskBinding(("fft3d_x", "fft3d_y", "fft3d_z"), "phased", swap="entry"),
}


def descriptor_params(task: TaskSpec, size: SizeConfig) -> tuple:
    """Integer params in frozen per-task order."""
    c = task.constants
    if task.id == "saxpy":
        return (size.param("n"),)
    if task.id in ("heat2d", "lbm", "ising"):
        n = size.param("N")
        return (n, n)
    if task.id == "wave3d":
        n = size.param("N")
        return (n, n, n)
    if task.id == "nbody":
        return (size.param("N"),)
    if task.id == "hmc":
        return (size.param("d"), size.param("K"), int(c["L"]))
    if task.id == "lj":
        from ..tasks.lj import cell_grid

        box = lj_box_edge(task, size)
        return (size.param("N"), cell_grid(box, c["r_cut"]), int(c["cell_capacity"]))
    if task.id == "gradshaf":
        n = size.param("N")
        return (n, n)
    if task.id == "fft3d":
        return (size.param("N"),)
    raise KeyError(task.id)


def descriptor_consts(task: TaskSpec, size: SizeConfig) -> tuple:
    """Float constants in frozen per-task order."""
    c = task.constants
    if task.id == "saxpy":
        return (c["a"],)
    if task.id in ("heat2d", "wave3d"):
        return (c["alpha"],)
    if task.id == "nbody":
        return (c["G"], c["eps"], c["dt"])
    if task.id == "hmc":
        return (c["eps"],)
    if task.id == "lbm":
        return (c["tau"],)
    if task.id == "ising":
        return (c["beta"], c["J"])
    if task.id == "lj":
        return (lj_box_edge(task, size), c["dt"], c["r_cut"])
    if task.id == "gradshaf":
        n = size.param("N")
        dr = (c["r_max"] - c["r_min"]) / (n - 1)
        dz = (c["z_max"] - c["z_min"]) / (n - 1)
        return (c["omega"], c["mu0"], c["p_axis"], dr, dz, c["r_min"])
    if task.id == "fft3d":
        return ()
    raise KeyError(task.id)


def build_descriptor(task: TaskSpec, size: SizeConfig, seed: int, arrays) -> Descriptor:
    """Populate a descriptor over live numpy arrays (pointers taken as-is)."""
    d = Descriptor()
    d.seed = int(seed) & 0xFFFFFFFFFFFFFFFF
    d.abi_version = ABI_VERSION
    d.n_buffers = len(arrays)
    if len(arrays) > MAX_BUFFERS:
        raise ValueError("too many buffers for the descriptor")
    for i, arr in enumerate(arrays):
        d.buf_len[i] = arr.size
        d.buf[i] = arr.ctypes.data
    params = descriptor_params(task, size)
    consts = descriptor_consts(task, size)
    if len(params) > MAX_PARAMS or len(consts) > MAX_CONSTS:
        raise ValueError("descriptor capacity exceeded")
    d.n_params = len(params)
    for i, p in enumerate(params):
        d.params[i] = int(p)
    d.n_consts = len(consts)
    for i, v in enumerate(consts):
        d.consts[i] = float(v)
    d.steps = size.steps
    d.step_index = 0
    return d

"""Shared JSON conventions.

Complex numbers are [re, im] pairs, matrices row-major nested lists, angles
radians as doubles. Every document carries a "format_version"; readers
reject unknown major versions.
"""

from __future__ import annotations

import json

import numpy as np

from .decomposition import KrausSet, kraus_set

FORMAT_VERSION = "1.0"


def matrix_to_json(m: np.ndarray) -> list:
    return [[[c.real, c.imag] for c in row] for row in np.asarray(m, dtype=complex)]


def matrix_from_json(rows: list) -> np.ndarray:
    return np.array(
        [[complex(re, im) for re, im in row] for row in rows], dtype=np.complex128
    )


def check_version(data: dict, what: str) -> None:
    major = str(data.get("format_version", FORMAT_VERSION)).split(".")[0]
    if major != FORMAT_VERSION.split(".")[0]:
        raise ValueError(
            f"unsupported {what} format_version {data.get('format_version')}"
        )


def kraus_set_to_json(s: KrausSet) -> str:
    return json.dumps(
        {
            "format_version": FORMAT_VERSION,
            "ops": [
                {"label": label, "matrix": matrix_to_json(m)}
                for label, m in zip(s.labels, s.ops)
            ],
        },
        indent=2,
    )


def kraus_set_from_json(text: str) -> KrausSet:
    data = json.loads(text)
    check_version(data, "kraus set")
    return kraus_set(
        [matrix_from_json(o["matrix"]) for o in data["ops"]],
        [o["label"] for o in data["ops"]],
    )

"""
State and report files.

Both are JSON documents tagged with a format name and version. Occupations
are written as bitstrings of length ``modes`` whose leftmost character is the
first mode, so ``"1010"`` has modes 1 and 3 filled (0-based modes 0 and 2).

State file kinds::

    {"format": "nonfreeness-state", "format_version": 1, "modes": 2,
     "kind": "pure", "amplitudes": [["10", 0.7071, 0.0], ["01", 0.7071, 0.0]]}

    {..., "kind": "ensemble",
     "members": [{"weight": 0.5, "amplitudes": [["10", 1.0, 0.0]]}, ...]}

    {..., "kind": "blocks",
     "blocks": [{"n": 1, "basis": ["10", "01"],
                 "real": [[0.5, 0.0], [0.0, 0.5]], "imag": [[0, 0], [0, 0]]}]}
"""

from __future__ import annotations

import hashlib
import json
from pathlib import Path

import numpy as np

from . import __version__, fock
from .errors import ValidationError
from .measures import NonfreenessReport
from .states import EPS_NORM, DensityOperator, PureState, density_from_ensemble

STATE_FORMAT = "nonfreeness-state"
REPORT_FORMAT = "nonfreeness-report"
FORMAT_VERSION = 1

#: Amplitudes written with a few digits (e.g. 0.7071) are renormalized if
#: their norm is this close to one; anything further off is rejected.
NORM_SLACK = 1e-4


def _amplitude_list(psi: PureState) -> list:
    basis = fock.sector_basis(psi.d, psi.n)
    return [
        [fock.to_bitstring(int(occ), psi.d), float(a.real), float(a.imag)]
        for occ, a in zip(basis, psi.amplitudes)
        if a != 0
    ]


def state_to_dict(state: PureState | DensityOperator) -> dict:
    doc = {"format": STATE_FORMAT, "format_version": FORMAT_VERSION, "modes": state.d}
    if isinstance(state, PureState):
        doc["kind"] = "pure"
        doc["amplitudes"] = _amplitude_list(state)
    else:
        doc["kind"] = "blocks"
        doc["blocks"] = [
            {
                "n": n,
                "basis": [fock.to_bitstring(int(o), state.d) for o in fock.sector_basis(state.d, n)],
                "real": blk.real.tolist(),
                "imag": blk.imag.tolist(),
            }
            for n, blk in sorted(state.blocks.items())
        ]
    return doc


def _parse_amplitudes(entries, d: int) -> PureState:
    amps: dict[int, complex] = {}
    for entry in entries:
        if not isinstance(entry, (list, tuple)) or len(entry) != 3:
            raise ValidationError(f"amplitude entry must be [bitstring, re, im], got {entry!r}")
        bits, re, im = entry
        if not isinstance(bits, str) or len(bits) != d:
            raise ValidationError(f"occupation {bits!r} does not have length {d}")
        occ = fock.from_bitstring(bits)
        if occ in amps:
            raise ValidationError(f"occupation {bits} listed twice")
        amps[occ] = complex(float(re), float(im))
    norm = np.sqrt(sum(abs(a) ** 2 for a in amps.values()))
    if abs(norm - 1.0) > NORM_SLACK:
        raise ValidationError(f"pure state has norm {norm!r}")
    return PureState.from_dict(d, amps, normalize=abs(norm - 1.0) > EPS_NORM)


def state_from_dict(doc: dict) -> PureState | DensityOperator:
    if not isinstance(doc, dict) or doc.get("format") != STATE_FORMAT:
        raise ValidationError("not a nonfreeness state file")
    if doc.get("format_version") != FORMAT_VERSION:
        raise ValidationError(f"unsupported state format version {doc.get('format_version')!r}")
    d = doc.get("modes")
    if not isinstance(d, int) or d < 1:
        raise ValidationError(f"invalid mode count {d!r}")
    kind = doc.get("kind")
    if kind == "pure":
        fock.check_capacity(d, dense=False)
        return _parse_amplitudes(doc["amplitudes"], d)
    fock.check_capacity(d, dense=True)
    if kind == "ensemble":
        members = [(float(m["weight"]), _parse_amplitudes(m["amplitudes"], d)) for m in doc["members"]]
        return density_from_ensemble(members, d)
    if kind == "blocks":
        blocks = {}
        for entry in doc["blocks"]:
            n = int(entry["n"])
            expected = [fock.to_bitstring(int(o), d) for o in fock.sector_basis(d, n)]
            if list(entry.get("basis", expected)) != expected:
                raise ValidationError(f"block n={n} basis does not match the canonical ordering")
            blocks[n] = np.array(entry["real"], dtype=float) + 1j * np.array(entry["imag"], dtype=float)
        return DensityOperator(d, blocks)
    raise ValidationError(f"unknown state kind {kind!r}")


def parse_state(path) -> PureState | DensityOperator:
    """Read and validate a state file."""
    try:
        doc = json.loads(Path(path).read_text())
    except json.JSONDecodeError as exc:
        raise ValidationError(f"{path}: malformed JSON ({exc})") from exc
    try:
        return state_from_dict(doc)
    except ValidationError:
        raise
    except (KeyError, TypeError, ValueError) as exc:
        raise ValidationError(f"{path}: missing or mistyped field ({exc})") from exc


def dumps_state(state: PureState | DensityOperator) -> str:
    return json.dumps(state_to_dict(state), indent=1)


def write_state(path, state: PureState | DensityOperator) -> None:
    Path(path).write_text(dumps_state(state) + "\n")


def digest(data: bytes | str) -> str:
    if isinstance(data, str):
        data = data.encode()
    return hashlib.sha256(data).hexdigest()


def report_to_dict(report: NonfreenessReport, input_digest: str, options: dict) -> dict:
    return {
        "format": REPORT_FORMAT,
        "format_version": FORMAT_VERSION,
        "report": report.to_dict(),
        "provenance": {
            "input_digest": input_digest,
            "tool_version": __version__,
            "options": options,
            "log_base": report.log_base,
        },
    }


def dumps_report(report: NonfreenessReport, input_digest: str, options: dict) -> str:
    # repr-based float output keeps 17 significant digits; inf is written as Infinity
    return json.dumps(report_to_dict(report, input_digest, options), indent=1)


def loads_report(text: str) -> tuple[NonfreenessReport, dict]:
    doc = json.loads(text)
    if doc.get("format") != REPORT_FORMAT:
        raise ValidationError("not a nonfreeness report file")
    return NonfreenessReport.from_dict(doc["report"]), doc["provenance"]

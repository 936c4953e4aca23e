"""Species data files with magnetic Feshbach resonance parameters.

The CSV contract is one resonance per row under the header

    species,mass_amu,C6_au,B0_G,DeltaB_G,abg_a0,dmu_muB

with masses in unified atomic mass units, C6 in Hartree atomic units,
fields in gauss, background scattering lengths in Bohr radii and magnetic
moments in Bohr magnetons. Lines starting with ``#`` and blank lines are
ignored.
"""

from __future__ import annotations

import csv
import math

from .errors import DegenerateResonance, InvalidInput, ParseError, UnitError
from .units import (
    ATOMIC_MASS_SI,
    BOHR_MAGNETON_SI,
    BOHR_RADIUS_SI,
    GAUSS_SI,
    HARTREE_SI,
    ResonanceData,
    UnitSystem,
    convert_resonance,
)

SPECIES_COLUMNS = (
    "species",
    "mass_amu",
    "C6_au",
    "B0_G",
    "DeltaB_G",
    "abg_a0",
    "dmu_muB",
)


def _data_lines(text: str):
    for lineno, raw in enumerate(text.splitlines(), start=1):
        stripped = raw.strip()
        if not stripped or stripped.startswith("#"):
            continue
        yield lineno, raw


def parse_species(text: str, mode: str = "natural") -> list[ResonanceData]:
    """Parse species CSV text; see :func:`load_species`."""
    if mode not in ("natural", "si", "atomic"):
        raise InvalidInput(f"unknown unit mode {mode!r}")
    lines = list(_data_lines(text))
    if not lines:
        raise ParseError("missing header line", line=1)
    header_line, header_raw = lines[0]
    header = tuple(field.strip() for field in next(csv.reader([header_raw])))
    if header != SPECIES_COLUMNS:
        raise ParseError(
            f"bad header {','.join(header)!r}; expected {','.join(SPECIES_COLUMNS)!r}",
            line=header_line,
        )

    out: list[ResonanceData] = []
    for lineno, raw in lines[1:]:
        row = next(csv.reader([raw]))
        if len(row) != len(SPECIES_COLUMNS):
            raise ParseError(
                f"expected {len(SPECIES_COLUMNS)} fields, got {len(row)}", line=lineno
            )
        name = row[0].strip()
        values = []
        for col, field in enumerate(row[1:], start=2):
            try:
                values.append(float(field))
            except ValueError:
                raise ParseError(
                    f"field {SPECIES_COLUMNS[col - 1]!r} is not a number: {field!r}",
                    line=lineno,
                    column=col,
                ) from None
        mass_amu, c6_au, b0_g, db_g, abg_a0, dmu_mub = values
        if not all(math.isfinite(v) for v in values):
            raise UnitError(f"line {lineno}: non-finite field value")
        if mass_amu <= 0.0:
            raise UnitError(f"line {lineno}: mass_amu must be positive")
        if c6_au <= 0.0:
            raise UnitError(f"line {lineno}: C6_au must be positive")
        if db_g == 0.0:
            raise DegenerateResonance(f"line {lineno}: DeltaB_G must be nonzero")

        mass_kg = mass_amu * ATOMIC_MASS_SI
        si = UnitSystem.si(mass_kg)
        res = ResonanceData(
            a_bg=abg_a0 * BOHR_RADIUS_SI,
            delta_b=db_g * GAUSS_SI,
            b0=b0_g * GAUSS_SI,
            dmu=dmu_mub * BOHR_MAGNETON_SI,
            c6=c6_au * HARTREE_SI * BOHR_RADIUS_SI**6,
            mass=mass_kg,
            units=si,
            species=name,
        )
        if mode == "natural":
            res = convert_resonance(res, UnitSystem.natural())
        elif mode == "atomic":
            res = convert_resonance(res, UnitSystem.atomic(mass_kg))
        out.append(res)
    return out


def load_species(path, mode: str = "natural") -> list[ResonanceData]:
    """Load a species CSV file into unit-converted resonance records.

    ``mode`` selects the unit system the returned fields are expressed in.
    Natural units are anchored per row: each species' own mass maps to 1.
    Structural problems raise :class:`ParseError` with the line number,
    unphysical field values raise :class:`UnitError`, and a zero resonance
    width raises :class:`DegenerateResonance`.
    """
    with open(path, encoding="utf-8") as fh:
        return parse_species(fh.read(), mode=mode)

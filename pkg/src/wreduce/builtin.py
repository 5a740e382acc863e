"""Built-in example setups.

Two worked examples ship with fixed coordinate frames so that their
bracket tables are reproducible byte for byte:

* ``kdv``: sl2, regular nilpotent.  One slice coordinate; the reduced
  pencil is the KdV pencil.
* ``fkdv``: sl3, minimal nilpotent (partition 2,1).  Four slice
  coordinates; the reduced second structure is the fractional KdV
  algebra.  Several admissible (grading, isotropic, a) variants are
  provided; all of them produce the identical second structure.

A desk-scale stress case (``sl4``, regular nilpotent) exercises
operator order >= 3 without any frozen table.
"""

from fractions import Fraction

from .liealg import (
    Grading,
    GradedSetup,
    build_sl_n,
    derive_subspaces,
    dynkin_grading,
    sl2_from_partition,
)

__all__ = [
    "BUILTIN_NAMES",
    "builtin_setup",
    "fkdv_grading",
    "fkdv_setup",
    "fkdv_variants",
    "kdv_setup",
    "sl4_setup",
    "standard_frames",
]


def _unit(alg, label, coeff=1):
    v = alg.basis_vector(alg.label_index(label))
    c = Fraction(coeff)
    return [c * x for x in v]


def _add(*vecs):
    out = [Fraction(0)] * len(vecs[0])
    for v in vecs:
        for i, x in enumerate(v):
            out[i] += x
    return out


def kdv_setup() -> GradedSetup:
    """sl2 regular nilpotent with the frames the KdV table uses.

    Slice coordinate q1 dual to e (trace pairing against the slice
    vector f); complement spanned by h/2 and e so that the full frame
    duals come out as (e, h, f).
    """
    alg = build_sl_n(2)
    triple = sl2_from_partition(2, [2])
    grading = dynkin_grading(alg, triple.h)
    half_h = _unit(alg, "h1", Fraction(1, 2))
    return derive_subspaces(
        alg,
        triple,
        grading,
        isotropic=(),
        a=triple.f,
        slice_basis=[list(triple.f)],
        complement=[half_h, _unit(alg, "e12")],
    )


def _sl3():
    alg = build_sl_n(3)
    triple = sl2_from_partition(3, [2, 1])
    return alg, triple


def fkdv_grading(alg, triple, name: str) -> Grading:
    """Good gradings for the sl3 minimal nilpotent, by name.

    ``dynkin`` (alias ``G1``) is the eigenvalue grading of ad h.  ``G2``
    and ``G3`` are the two other good gradings for this orbit; all
    three place e in degree 2 and f in degree -2.  Degrees are listed
    in basis-label order e12, e13, e21, e23, e31, e32, h1, h2.
    """
    key = name.strip().lower()
    if key in ("dynkin", "g1"):
        return dynkin_grading(alg, triple.h)
    if key == "g2":
        return Grading([0, 2, 0, 2, -2, -2, 0, 0])
    if key == "g3":
        return Grading([2, 2, -2, 0, -2, 0, 0, 0])
    raise ValueError(
        f"unknown sl3 grading {name!r}: choose dynkin, G1, G2 or G3")


def _fkdv_frames(alg):
    """Slice frame (e31, e32, e21, H) with H = diag(1, -2, 1).

    This is the frame the frozen fractional KdV tables are written in;
    its duals under the trace form are (e13, e23/3, e12/3, H/12).
    """
    h_cap = _add(_unit(alg, "h1"), _unit(alg, "h2", -1))
    return [
        _unit(alg, "e31"),
        _unit(alg, "e32"),
        _unit(alg, "e21"),
        h_cap,
    ]


def _fkdv_s_frame(alg, last_label):
    """Gauge-section frame for b_minus: slice frame + K + one extra.

    K = diag(1, 0, -1); the sixth vector is e12 - e23 for the
    ell = span(e21 + e32) parametrization and e23 for the G3, a = e21
    one.  Both frames are regression-locked by the generator lists.
    """
    kvec = _add(_unit(alg, "h1"), _unit(alg, "h2"))
    if last_label == "e12-e23":
        last = _add(_unit(alg, "e12"), _unit(alg, "e23", -1))
    else:
        last = _unit(alg, last_label)
    return _fkdv_frames(alg) + [kvec, last]


def _fkdv_variant_table(alg, triple):
    e21 = _unit(alg, "e21")
    e31 = _unit(alg, "e31")
    e32 = _unit(alg, "e32")
    lplus = _add(e21, e32)
    lminus = _add(e21, _unit(alg, "e32", -1))
    # name -> (grading name, isotropic rows, a, s-frame tag or None)
    return {
        "g1-lplus-a-e21+e32": ("G1", [lplus], lplus, "e12-e23"),
        "g1-lplus-a-e31": ("G1", [lplus], e31, None),
        "g1-lminus-a-e21-e32": ("G1", [lminus], lminus, None),
        "g1-l0-a-e31": ("G1", [], e31, None),
        "g2-l0-a-e32": ("G2", [], e32, None),
        "g2-l0-a-e31": ("G2", [], e31, None),
        "g3-l0-a-e21": ("G3", [], e21, "e23"),
        "g3-l0-a-e31": ("G3", [], e31, None),
    }


FKDV_DEFAULT_VARIANT = "g1-lplus-a-e21+e32"


def fkdv_variants() -> dict:
    """All admissible (grading, isotropic, a) triples for sl3 minimal.

    Every variant shares the slice frame, so the reduced second
    structures are identical as operator matrices; first structures
    differ with a.
    """
    alg, triple = _sl3()
    out = {}
    for name, (gname, iso, a, s_tag) in _fkdv_variant_table(alg, triple).items():
        grading = fkdv_grading(alg, triple, gname)
        s_basis = _fkdv_s_frame(alg, s_tag) if s_tag else None
        out[name] = derive_subspaces(
            alg,
            triple,
            grading,
            isotropic=iso,
            a=a,
            slice_basis=_fkdv_frames(alg),
            s_basis=s_basis,
        )
    return out


def fkdv_setup(variant: str = FKDV_DEFAULT_VARIANT) -> GradedSetup:
    """One sl3 minimal nilpotent setup; default is the table frame.

    The default takes the Dynkin grading, ell = span(e21 + e32) and
    a = e21 + e32, matching the frozen first-structure table.
    """
    alg, triple = _sl3()
    table = _fkdv_variant_table(alg, triple)
    if variant not in table:
        names = ", ".join(sorted(table))
        raise ValueError(f"unknown fkdv variant {variant!r}: choose one of {names}")
    gname, iso, a, s_tag = table[variant]
    grading = fkdv_grading(alg, triple, gname)
    s_basis = _fkdv_s_frame(alg, s_tag) if s_tag else None
    return derive_subspaces(
        alg,
        triple,
        grading,
        isotropic=iso,
        a=a,
        slice_basis=_fkdv_frames(alg),
        s_basis=s_basis,
    )


def sl4_setup() -> GradedSetup:
    """sl4 regular nilpotent, a = e41; default canonical frames.

    The reduced operators reach differential order 7, which makes this
    the cheap stress case for the three reduction routes.
    """
    alg = build_sl_n(4)
    triple = sl2_from_partition(4, [4])
    grading = dynkin_grading(alg, triple.h)
    return derive_subspaces(
        alg, triple, grading, isotropic=(), a=_unit(alg, "e41"))


def standard_frames(n: int, partition) -> dict:
    """Frame overrides that pin the worked examples to their tables.

    Returns keyword arguments for derive_subspaces.  Empty for setups
    without a frozen table; those fall back to the canonical echelon
    frames.
    """
    part = tuple(int(p) for p in partition)
    if n == 2 and part == (2,):
        alg = build_sl_n(2)
        half_h = _unit(alg, "h1", Fraction(1, 2))
        return {
            "slice_basis": [_unit(alg, "e21")],
            "complement": [half_h, _unit(alg, "e12")],
        }
    if n == 3 and part == (2, 1):
        alg = build_sl_n(3)
        return {"slice_basis": _fkdv_frames(alg)}
    return {}


BUILTIN_NAMES = ("kdv", "fkdv", "sl4")


def builtin_setup(name: str) -> GradedSetup:
    """Resolve a builtin setup name, including fkdv:<variant>."""
    if name == "kdv":
        return kdv_setup()
    if name == "fkdv":
        return fkdv_setup()
    if name.startswith("fkdv:"):
        return fkdv_setup(name.split(":", 1)[1])
    if name == "sl4":
        return sl4_setup()
    known = ", ".join(BUILTIN_NAMES) + ", fkdv:<variant>"
    raise ValueError(f"unknown builtin setup {name!r}: choose one of {known}")

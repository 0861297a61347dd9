"""Deterministic command-line front end.

One structured JSON input document describes a toric or symmetric datum
plus a label selection; commands print canonical JSON (or a flat TSV
projection) with byte-identical output across runs.  Exit codes: 0 ok,
1 schema/usage error, 2 invalid datum, 3 failed checks.
"""

from __future__ import annotations

import argparse
import json
import sys
from fractions import Fraction

from .checks import run_battery
from .extalg import ext_algebra
from .faces import FacePoint, KData, SymmetricDatum, downward_closed_families, g_stable_open
from .fans import Fan, toric_datum
from .hsheaf import build_H, support_sets, validate_support_facts
from .isotropy import DatumError, IsotropyFamily, build_catalog
from .posets import cech_cohomology

DEFAULT_CUTOFF = 20
DEFAULT_SEED = 2026


class SchemaError(ValueError):
    """Malformed input document or invocation (exit code 1)."""


# ---------------------------------------------------------------------------
# input documents


def _need(doc, key, types, where="document"):
    if key not in doc:
        raise SchemaError(f"{where}: missing key {key!r}")
    if types is not None and not isinstance(doc[key], types):
        raise SchemaError(f"{where}: key {key!r} has the wrong type")
    return doc[key]


def load_document(path):
    try:
        with open(path, "r", encoding="utf-8") as fh:
            doc = json.load(fh)
    except OSError as exc:
        raise SchemaError(f"cannot read input: {exc}")
    except json.JSONDecodeError as exc:
        raise SchemaError(f"input is not valid JSON: {exc}")
    if not isinstance(doc, dict):
        raise SchemaError("document must be a JSON object")
    mode = _need(doc, "mode", str)
    if mode not in ("toric", "symmetric"):
        raise SchemaError("mode must be 'toric' or 'symmetric'")
    labels = doc.get("labels", "all")
    if labels != "all":
        if not isinstance(labels, list):
            raise SchemaError("labels must be 'all' or a list")
        for entry in labels:
            if not isinstance(entry, dict) or "orbit" not in entry or "character" not in entry:
                raise SchemaError("each label needs 'orbit' and 'character'")
    cutoff = doc.get("cutoff", DEFAULT_CUTOFF)
    if not isinstance(cutoff, int) or cutoff < 0 or cutoff % 2:
        raise SchemaError("cutoff must be a nonnegative even integer")
    if mode == "toric":
        t = _need(doc, "toric", dict)
        for key, types in [("lattice_rank", int), ("overlattice_generators", list),
                           ("rays", list), ("max_cones", list)]:
            _need(t, key, types, where="toric")
    else:
        s = _need(doc, "symmetric", dict)
        for key, types in [("V", list), ("S", list), ("l", int), ("Jmap", dict),
                           ("m", int), ("D_subspaces", dict)]:
            _need(s, key, types, where="symmetric")
    return doc


def _orbit_from_key(key):
    return () if key in ("-", "") else tuple(sorted(key.split("+")))


def document_datum(doc):
    """Build (datum, D-basis rows, label selection, fan-or-None) from a document."""
    if doc["mode"] == "toric":
        t = doc["toric"]
        fan = Fan(rank=t["lattice_rank"],
                  overlattice_gens=tuple(tuple(g) for g in t["overlattice_generators"]),
                  rays=tuple(tuple(r) for r in t["rays"]),
                  max_cones=tuple(tuple(c) for c in t["max_cones"]))
        datum, dbasis = toric_datum(fan)
    else:
        s = doc["symmetric"]
        fan = None
        m = s["m"]
        subs = {_orbit_from_key(k): tuple(tuple(row) for row in v)
                for k, v in s["D_subspaces"].items()}
        fam = IsotropyFamily(m=m, subspaces=subs, mode="symmetric")
        kdatum = s.get("Kdatum")
        kdata = KData(m=m, l=s["l"], entries=kdatum)
        jmap = {_orbit_from_key(k): tuple(v) for k, v in s["Jmap"].items()}
        datum = SymmetricDatum(V=tuple(s["V"]), S=[tuple(x) for x in s["S"]], l=s["l"],
                               Jmap=jmap, isotropy=fam, kdata=kdata, mode="symmetric")
        dbasis = tuple(tuple(1 if i == j else 0 for j in range(m)) for i in range(m))
    labels = doc.get("labels", "all")
    if labels != "all":
        labels = [(_orbit_from_key("+".join(e["orbit"]) if isinstance(e["orbit"], list) else e["orbit"]),
                   tuple(int(b) for b in e["character"]))
                  for e in labels]
    return datum, dbasis, labels, fan


# ---------------------------------------------------------------------------
# serialization


def _frac(x):
    return str(x) if isinstance(x, Fraction) else x


def emit_json(payload):
    return json.dumps(payload, sort_keys=True, separators=(",", ":")) + "\n"


def emit_tsv(payload):
    lines = []

    def walk(prefix, obj):
        if isinstance(obj, dict):
            for k in sorted(obj):
                walk(prefix + [str(k)], obj[k])
        elif isinstance(obj, list):
            if obj and all(isinstance(x, (str, int, float)) for x in obj):
                lines.append("\t".join(prefix + [",".join(str(x) for x in obj)]))
            else:
                for i, x in enumerate(obj):
                    walk(prefix + [str(i)], x)
        else:
            lines.append("\t".join(prefix + [str(obj)]))

    walk([], payload)
    return "\n".join(lines) + "\n"


def _meta(doc_path, cutoff, seed, command):
    import os

    return {
        "input": os.path.basename(doc_path),
        "command": command,
        "cutoff": cutoff,
        "seed": seed,
        "format_version": 1,
    }


# ---------------------------------------------------------------------------
# commands


def _build(doc, cutoff):
    datum, dbasis, labels, fan = document_datum(doc)
    catalog = build_catalog(datum.isotropy, datum.V, labels)
    H = build_H(datum, catalog, cutoff)
    return datum, dbasis, catalog, H, fan


def cmd_validate(doc, path, cutoff, seed):
    datum, dbasis, catalog, H, fan = _build(doc, cutoff)
    checks = [{"name": "schema", "status": "pass"},
              {"name": "datum-invariants", "status": "pass"}]
    for i in range(len(catalog)):
        for j in range(len(catalog)):
            sup = support_sets(datum, catalog, i, j)
            problems = validate_support_facts(H.space, datum, sup)
            if problems:
                raise DatumError(f"support facts fail on block {i}:{j}: {problems[0]}")
    checks.append({"name": "support-facts", "status": "pass"})
    payload = {"meta": _meta(path, cutoff, seed, "validate"), "checks": checks}
    return 0, payload


def cmd_faces(doc, path, cutoff, seed):
    datum, dbasis, catalog, H, fan = _build(doc, cutoff)
    faces = [{"orbit": list(f.orbit), "J": list(f.j)} for f in datum.faces()]
    payload = {"meta": _meta(path, cutoff, seed, "faces"), "faces": faces}
    return 0, payload


def cmd_labels(doc, path, cutoff, seed):
    datum, dbasis, catalog, H, fan = _build(doc, cutoff)
    labels = []
    for k, lab in enumerate(catalog.labels):
        labels.append({
            "index": k,
            "orbit": list(lab.orbit),
            "character": "".join(str(b) for b in lab.char),
            "delta_prime": list(catalog.dprime(k)),
        })
    payload = {"meta": _meta(path, cutoff, seed, "labels"),
               "d_basis": [list(row) for row in dbasis],
               "labels": labels}
    return 0, payload


def parse_faces_output(payload):
    return [FacePoint(orbit=tuple(sorted(f["orbit"])), j=tuple(sorted(f["J"])))
            for f in payload["faces"]]


def parse_labels_output(payload):
    return [(tuple(sorted(e["orbit"])), tuple(int(b) for b in e["character"]))
            for e in payload["labels"]]


def _parse_block(text, catalog):
    try:
        a, b = text.split(":")
        a, b = int(a), int(b)
    except ValueError:
        raise SchemaError("--block must look like A:B with catalog indices")
    if not (0 <= a < len(catalog) and 0 <= b < len(catalog)):
        raise SchemaError("--block indices out of range")
    return a, b


def cmd_hilbert(doc, path, cutoff, seed, block=None):
    datum, dbasis, catalog, H, fan = _build(doc, cutoff)
    ext = ext_algebra(H)
    blocks = sorted(H.blocks) if block is None else [block]
    payload = {"meta": _meta(path, cutoff, seed, "hilbert"), "blocks": [
        {"alpha": i, "beta": j, "hilbert": ext.block_hilbert((i, j))}
        for i, j in blocks]}
    return 0, payload


def _basis_entry(ext, idx):
    b = ext.basis[idx]
    face, lab = min(b.vector)
    pm, km = lab
    return {
        "name": b.name,
        "degree": b.degree,
        "pivot_face": face,
        "pivot_monomial": "*".join(f"X_{v}^{e}" for v, e in pm) or "1",
        "pivot_kpart": list(km),
    }


def cmd_ext(doc, path, cutoff, seed, block=None):
    datum, dbasis, catalog, H, fan = _build(doc, cutoff)
    ext = ext_algebra(H)
    blocks = sorted(H.blocks) if block is None else [block]
    shown = set(blocks)
    out_blocks = []
    for i, j in blocks:
        table = []
        for x in ext.by_block[(i, j)]:
            for (b2, c) in sorted(ext.by_block):
                if b2 != j or ((i, j) != (b2, c) and (b2, c) not in shown):
                    continue
                for y in ext.by_block[(b2, c)]:
                    prod = ext.multiply(x, y)
                    if prod == "truncated" or not prod:
                        continue
                    for z, cv in sorted(prod.items()):
                        table.append([ext.basis[x].name, ext.basis[y].name,
                                      ext.basis[z].name, _frac(cv)])
        out_blocks.append({
            "alpha": i, "beta": j,
            "hilbert": ext.block_hilbert((i, j)),
            "basis": [_basis_entry(ext, idx) for idx in ext.by_block[(i, j)]],
            "table": table,
        })
    payload = {"meta": _meta(path, cutoff, seed, "ext"),
               "unit": {ext.basis[k].name: _frac(v) for k, v in sorted(ext.unit_coeffs().items())},
               "truncated_pairs": ext.truncated_pairs,
               "blocks": out_blocks}
    return 0, payload


def cmd_cohomology(doc, path, cutoff, seed):
    datum, dbasis, catalog, H, fan = _build(doc, cutoff)
    opens = []
    for fam in downward_closed_families(datum):
        U = g_stable_open(datum, H.space, fam)
        name = ",".join("+".join(s) if s else "-" for s in fam) or "(empty)"
        blocks = []
        for (i, j), blk in sorted(H.blocks.items()):
            if blk.zero:
                continue
            hs = cech_cohomology(H.space, U, blk.sheaf, cutoff)
            tables = {str(p): h.hilbert(cutoff) for p, h in enumerate(hs) if p == 0 or h.dims}
            blocks.append({"alpha": i, "beta": j, "cech": tables})
        opens.append({"name": name, "blocks": blocks})
    payload = {"meta": _meta(path, cutoff, seed, "cohomology"), "opens": opens}
    return 0, payload


def cmd_check_all(doc, path, cutoff, seed):
    datum, dbasis, catalog, H, fan = _build(doc, cutoff)
    ext = ext_algebra(H)
    report = run_battery(H, ext, seed, fan=fan)
    checks = [{"name": e.name, "status": "pass" if e.ok else "fail", "details": e.details}
              for e in report.entries]
    payload = {"meta": _meta(path, cutoff, seed, "check-all"),
               "ok": report.ok,
               "checks": checks}
    return (0 if report.ok else 3), payload


# ---------------------------------------------------------------------------
# entry point


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise SchemaError(message)


def make_parser():
    p = _Parser(prog="extsheaf", description="extension-algebra engine over finite face posets")
    p.add_argument("--input", required=True, help="path to the input JSON document")
    p.add_argument("--command", required=True,
                   choices=["validate", "faces", "labels", "ext", "hilbert", "cohomology", "check-all"])
    p.add_argument("--cutoff", type=int, default=None,
                   help=f"internal degree cutoff (default: document cutoff or {DEFAULT_CUTOFF})")
    p.add_argument("--block", default=None, help="restrict to one block, e.g. 0:0")
    p.add_argument("--format", default="json", choices=["json", "tsv"])
    p.add_argument("--seed", type=int, default=DEFAULT_SEED)
    return p


def run(argv, out=None):
    out = out if out is not None else sys.stdout
    try:
        args = make_parser().parse_args(argv)
        doc = load_document(args.input)
        cutoff = args.cutoff if args.cutoff is not None else doc.get("cutoff", DEFAULT_CUTOFF)
        if cutoff < 0 or cutoff % 2:
            raise SchemaError("cutoff must be a nonnegative even integer")
        block = None
        if args.block is not None:
            datum, dbasis, labels, fan = document_datum(doc)
            catalog = build_catalog(datum.isotropy, datum.V, labels)
            block = _parse_block(args.block, catalog)
        handlers = {
            "validate": cmd_validate,
            "faces": cmd_faces,
            "labels": cmd_labels,
            "cohomology": cmd_cohomology,
            "check-all": cmd_check_all,
        }
        if args.command in ("ext", "hilbert"):
            fn = cmd_ext if args.command == "ext" else cmd_hilbert
            code, payload = fn(doc, args.input, cutoff, args.seed, block=block)
        else:
            code, payload = handlers[args.command](doc, args.input, cutoff, args.seed)
        out.write(emit_json(payload) if args.format == "json" else emit_tsv(payload))
        return code
    except SchemaError as exc:
        out.write(emit_json({"error": {"kind": "schema", "message": str(exc)}}))
        return 1
    except DatumError as exc:
        out.write(emit_json({"error": {"kind": "datum-invalid", "message": str(exc)}}))
        return 2


def main():
    sys.exit(run(sys.argv[1:]))


if __name__ == "__main__":
    main()

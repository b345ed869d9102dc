"""Command-line front end and the variety cache file format.

Every command writes a single JSON document to stdout (indented with
--pretty).  Exit codes: 0 success, 2 argument or file error, 3 parameter
validity failure, 4 invariant violation (a combinatorial claim failed on
actual data; this must never happen on valid inputs).

Cache files are JSON: a header (format_version, field spec, parameters, set
tag, count) plus either a sorted "points" index array or, for large spaces,
a "bitset" field holding the base64 of the little-endian bit-packed point
mask padded to 64-bit words.  The format version pins the point enumeration
order.

The environment variable QHV_CONFIG may name a JSON config file able to
override the modulus and the distinguished primitive element; the --modulus
flag wins over the config.
"""

import argparse
import base64
import json
import math
import os
import sys

import numpy as np

from . import classify
from .errors import (DomainError, FieldError, InvariantViolation, ParamError)
from .field import Field
from .graph import (CollinearityGraph, connectivity_and_diameter,
                    distance_witness, omega3_structure)
from .lines import contained_lines, line_census
from .projgeom import Space
from .variety import (PointSet, build_point_set, hyperplane_spectrum,
                      omega_partition, unchecked_params, validate_params)

EXIT_OK = 0
EXIT_USAGE = 2
EXIT_INVALID = 3
EXIT_VIOLATION = 4

FORMAT_VERSION = 1
BITSET_THRESHOLD = 100_000  # point counts above this default to bitset payload


def parse_element(field, text):
    """Field element from 'eps', 'eps^k', or a coefficient list 'c0,c1,...'."""
    text = str(text).strip()
    if text in ("eps", "epsilon"):
        return field.primitive_element()
    if text.startswith("eps^"):
        return field.pow(field.primitive_element(), int(text[4:]))
    return field.from_coeffs([int(t) for t in text.split(",")])


def format_element(field, x):
    return list(field.coeffs(x))


def load_config():
    path = os.environ.get("QHV_CONFIG")
    if not path:
        return {}
    with open(path) as fh:
        return json.load(fh)


def make_field(args):
    config = load_config()
    modulus = None
    if getattr(args, "modulus", None):
        modulus = [int(c) for c in args.modulus.split(",")]
    elif "modulus" in config:
        modulus = config["modulus"]
    field = Field(args.p, args.n, modulus)
    eps = None
    if "epsilon" in config:
        eps = parse_element(field, config["epsilon"])
    return field, eps


def make_params(field, args, eps, alpha_opt="alpha", beta_opt="beta"):
    alpha = parse_element(field, getattr(args, alpha_opt))
    beta = parse_element(field, getattr(args, beta_opt))
    if getattr(args, "unchecked", False):
        return unchecked_params(field, alpha, beta, eps=eps)
    return validate_params(field, alpha, beta, eps=eps)


# -- cache files --

def save_cache(path, S, params, payload="auto"):
    space = S.space
    field = space.field
    doc = {
        "format_version": FORMAT_VERSION,
        "p": field.p, "n": field.n, "modulus": list(field.modulus),
        "alpha": None if params is None else format_element(field, params.alpha),
        "beta": None if params is None else format_element(field, params.beta),
        "set": S.meta,
        "unchecked": S.unchecked,
        "count": S.card,
    }
    if payload == "auto":
        payload = "bitset" if space.n_points > BITSET_THRESHOLD else "points"
    if payload == "points":
        doc["points"] = [int(i) for i in S.indices]
    else:
        packed = np.packbits(S.mask, bitorder="little").tobytes()
        packed += b"\x00" * (-len(packed) % 8)
        doc["bitset"] = base64.b64encode(packed).decode("ascii")
    with open(path, "w") as fh:
        json.dump(doc, fh)
        fh.write("\n")
    return doc


def load_cache(path):
    """Returns (space, params or None, PointSet); raises ValueError on a
    corrupt or mismatched file."""
    with open(path) as fh:
        doc = json.load(fh)
    if doc.get("format_version") != FORMAT_VERSION:
        raise ValueError(f"unsupported cache format {doc.get('format_version')}")
    field = Field(doc["p"], doc["n"], doc["modulus"])
    space = Space(field)
    params = None
    if doc.get("alpha") is not None:
        alpha = field.from_coeffs(doc["alpha"])
        beta = field.from_coeffs(doc["beta"])
        if doc.get("unchecked"):
            params = unchecked_params(field, alpha, beta)
        else:
            params = validate_params(field, alpha, beta)
    mask = np.zeros(space.n_points, dtype=bool)
    if "points" in doc:
        idx = np.asarray(doc["points"], dtype=np.int64)
        if len(idx) and (idx.min() < 0 or idx.max() >= space.n_points):
            raise ValueError("cache point index out of range for this space")
        mask[idx] = True
    elif "bitset" in doc:
        raw = np.frombuffer(base64.b64decode(doc["bitset"]), dtype=np.uint8)
        bits = np.unpackbits(raw, bitorder="little")
        if len(bits) < space.n_points:
            raise ValueError("cache bitset shorter than the point count")
        mask = bits[:space.n_points].astype(bool)
    else:
        raise ValueError("cache has neither points nor bitset payload")
    S = PointSet(space, mask, doc.get("set", "other"), doc.get("unchecked", False))
    if S.card != doc["count"]:
        raise ValueError(
            f"cache count {doc['count']} does not match payload {S.card}")
    return space, params, S


# -- expected census profiles (the per-point line count theorems) --

def expected_profile(q, meta):
    if meta == "M":
        if q % 4 == 1:
            return {"omega0": {q + 1: 1}, "omega1": {q + 1: 2 * q * q},
                    "omega2": {2: q ** 5}, "omega3": {1: (q - 1) * q * q}}
        return {"omega0": {q + 1: 1}, "omega1": {},
                "omega2": {0: q ** 5}, "omega3": {1: q ** 3 + q ** 2}}
    if meta == "B":
        if q % 4 == 1:
            return {"p_inf": {2: 1}, "b_inf": {q + 1: 2 * q * q},
                    "affine": {2: q ** 5}}
        return {"p_inf": {2: 1}, "b_inf": {1: 2 * q * q},
                "affine": {0: q ** 5}}
    return None


# -- commands --

def cmd_build(args):
    field, eps = make_field(args)
    params = None
    if args.set != "H":
        params = make_params(field, args, eps)
    space = Space(field)
    S = build_point_set(space, args.set, params)
    doc = save_cache(args.out, S, params, payload=args.payload)
    summary = {k: doc[k] for k in
               ("format_version", "p", "n", "modulus", "alpha", "beta",
                "set", "unchecked", "count")}
    summary["out"] = args.out
    return summary, EXIT_OK


def cmd_verify(args):
    space, params, S = load_cache(args.cache)
    rep = hyperplane_spectrum(space, S)
    doc = rep.to_json()
    doc["set"] = S.meta
    code = EXIT_OK
    if S.meta in ("M", "H") and not S.unchecked and not rep.two_character:
        doc["violation"] = "two_character"
        code = EXIT_VIOLATION
    return doc, code


def cmd_census(args):
    space, params, S = load_cache(args.cache)
    if S.meta not in ("M", "B") or params is None:
        raise ValueError("census needs an M or B cache built from parameters")
    cen = line_census(space, S, params, threads=args.threads)
    doc = cen.to_json()
    code = EXIT_OK
    if not cen.double_count_ok:
        doc["violation"] = "line_census_double_count"
        code = EXIT_VIOLATION
    elif not S.unchecked:
        want = expected_profile(space.field.q, S.meta)
        got = {lab: dict(cnt) for lab, cnt in cen.profile.items()}
        if want is not None and got != want:
            doc["violation"] = "line_census_profile"
            doc["expected_profile"] = {
                lab: {str(c): m for c, m in sorted(cnt.items())}
                for lab, cnt in want.items()}
            code = EXIT_VIOLATION
    return doc, code


def cmd_graph(args):
    space, params, S = load_cache(args.cache)
    if S.meta != "M" or params is None:
        raise ValueError("graph needs an M cache built from parameters")
    lines = contained_lines(space, S, threads=args.threads)
    om = omega_partition(space, params, M=S)
    G = CollinearityGraph(space, S, lines)
    stats = connectivity_and_diameter(
        G, om, full=True if args.full_sweep else None)
    doc = stats.to_json(G)
    code = EXIT_OK
    q = space.field.q
    if q % 4 == 1 and not S.unchecked:
        if stats.components != 1 or stats.diameter != 3:
            doc["violation"] = "graph_connectivity_diameter"
            code = EXIT_VIOLATION
        else:
            P, Q, path = distance_witness(G, om)
            doc["witness"] = {"pair": [P, Q], "path": path}
            doc["omega3"] = omega3_structure(G, om)
            if not doc["omega3"]["ok"]:
                doc["violation"] = "omega3_structure"
                code = EXIT_VIOLATION
    if args.edges_out:
        with open(args.edges_out, "w") as fh:
            coo = G.adj.tocoo()
            for u, v in zip(coo.row, coo.col):
                if u < v:
                    fh.write(f"{G.verts[u]} {G.verts[v]}\n")
        doc["edges_out"] = args.edges_out
    return doc, code


def cmd_classify(args):
    field, eps = make_field(args)
    if eps is None:
        eps = field.primitive_element()
    n_formula = classify.count_classes_formula(field.p, field.n)
    orbits = classify.delta_orbits(field)
    classes = []
    for orb in sorted(orbits):
        delta_c = orb[0]
        rep = classify.class_representative(field, delta_c, eps=eps)
        classes.append({
            "delta_canonical": format_element(field, delta_c),
            "representative": {"alpha": format_element(field, rep),
                               "beta": format_element(field, eps)},
            "size": len(orb),
        })
    doc = {"q": field.q, "N_formula": n_formula, "N_bruteforce": len(orbits),
           "classes": classes}
    code = EXIT_OK
    if args.full_bruteforce:
        groups, invalid = classify.class_grouping(field, eps=eps)
        doc["raw_pairs"] = {
            "classes": len(groups),
            "invalid": invalid,
            "sizes": sorted(g["size"] for g in groups.values()),
        }
        if len(groups) != n_formula:
            doc["violation"] = "class_count_bruteforce"
            code = EXIT_VIOLATION
    if n_formula != len(orbits):
        doc["violation"] = "class_count_formula"
        code = EXIT_VIOLATION
    return doc, code


def _witness_doc(field, p1, p2, coll):
    return {
        "p": field.p, "n": field.n, "modulus": list(field.modulus),
        "alpha1": format_element(field, p1.alpha),
        "beta1": format_element(field, p1.beta),
        "alpha2": format_element(field, p2.alpha),
        "beta2": format_element(field, p2.beta),
        **coll.to_json(field),
    }


def _replay(space, params1, params2, coll):
    M1 = build_point_set(space, "M", params1)
    M2 = build_point_set(space, "M", params2)
    img = classify.apply_collineation(space, coll, M1)
    if img != M2:
        raise InvariantViolation(
            "collineation witness does not map the first variety onto the "
            "second")


def cmd_equiv(args):
    if args.replay:
        with open(args.replay) as fh:
            doc = json.load(fh)
        field = Field(doc["p"], doc["n"], doc["modulus"])
        p1 = validate_params(field, field.from_coeffs(doc["alpha1"]),
                             field.from_coeffs(doc["beta1"]))
        p2 = validate_params(field, field.from_coeffs(doc["alpha2"]),
                             field.from_coeffs(doc["beta2"]))
        matrix = tuple(tuple(field.from_coeffs(c) for c in row)
                       for row in doc["matrix"])
        coll = classify.Collineation(doc["sigma_exp"], matrix)
        _replay(Space(field), p1, p2, coll)
        return {"replay_ok": True}, EXIT_OK
    field, eps = make_field(args)
    p1 = make_params(field, args, eps, "alpha1", "beta1")
    p2 = make_params(field, args, eps, "alpha2", "beta2")
    coll = classify.find_collineation(p1, p2)
    equivalent = classify.are_equivalent(p1, p2)
    if (coll is None) == equivalent:
        raise InvariantViolation(
            "collineation search disagrees with the delta invariant")
    if coll is None:
        return {"equivalent": False}, EXIT_OK
    if args.check:
        _replay(Space(field), p1, p2, coll)
    doc = {"equivalent": True, **_witness_doc(field, p1, p2, coll)}
    if args.out:
        with open(args.out, "w") as fh:
            json.dump(doc, fh)
            fh.write("\n")
    return doc, EXIT_OK


def build_parser():
    top = argparse.ArgumentParser(
        prog="qhv",
        description="Construct, verify and classify BM quasi-Hermitian "
                    "varieties of PG(3,q^2), q odd.")
    sub = top.add_subparsers(dest="command", required=True)

    field_args = argparse.ArgumentParser(add_help=False)
    field_args.add_argument("--p", type=int, required=True, help="odd prime")
    field_args.add_argument("--n", type=int, required=True, help="q = p^n")
    field_args.add_argument("--modulus",
                            help="modulus coefficients c0,c1,... (monic, "
                                 "degree 2n); wins over QHV_CONFIG")

    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--pretty", action="store_true",
                        help="indent the JSON output")
    common.add_argument("--threads", type=int,
                        default=os.cpu_count() or 1,
                        help="worker threads for line scans")

    b = sub.add_parser("build", parents=[field_args, common],
                       help="materialize a point set and cache it")
    b.add_argument("--alpha", help="element: coeffs c0,c1 or eps / eps^k")
    b.add_argument("--beta", help="element: coeffs c0,c1 or eps / eps^k")
    b.add_argument("--set", choices=["B", "F", "M", "H"], default="M")
    b.add_argument("--out", required=True)
    b.add_argument("--unchecked", action="store_true",
                   help="skip the validity test (negative experiments)")
    b.add_argument("--payload", choices=["auto", "points", "bitset"],
                   default="auto")
    b.set_defaults(func=cmd_build)

    v = sub.add_parser("verify", parents=[common],
                       help="hyperplane spectrum / two-character test")
    v.add_argument("cache")
    v.set_defaults(func=cmd_verify)

    c = sub.add_parser("census", parents=[common],
                       help="contained-line census of a cached set")
    c.add_argument("cache")
    c.set_defaults(func=cmd_census)

    g = sub.add_parser("graph", parents=[common],
                       help="collinearity graph statistics")
    g.add_argument("cache")
    g.add_argument("--full-sweep", action="store_true",
                   help="BFS from every vertex (default reduces by class)")
    g.add_argument("--edges-out", help="write the edge list as 'u v' lines")
    g.set_defaults(func=cmd_graph)

    k = sub.add_parser("classify", parents=[field_args, common],
                       help="count and describe the equivalence classes")
    k.add_argument("--full-bruteforce", action="store_true",
                   help="also group every raw (alpha, beta) pair")
    k.set_defaults(func=cmd_classify)

    e = sub.add_parser("equiv", parents=[common],
                       help="search for a collineation between two varieties")
    e.add_argument("--p", type=int)
    e.add_argument("--n", type=int)
    e.add_argument("--modulus")
    e.add_argument("--alpha1")
    e.add_argument("--beta1")
    e.add_argument("--alpha2")
    e.add_argument("--beta2")
    e.add_argument("--unchecked", action="store_true")
    e.add_argument("--check", action="store_true",
                   help="verify the witness on the actual bitsets")
    e.add_argument("--out", help="save the witness JSON here")
    e.add_argument("--replay", help="re-verify a saved witness file")
    e.set_defaults(func=cmd_equiv)
    return top


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    if args.command == "equiv" and not args.replay:
        missing = [o for o in ("p", "n", "alpha1", "beta1", "alpha2", "beta2")
                   if getattr(args, o) is None]
        if missing:
            parser.error(f"equiv needs --{' --'.join(missing)} "
                         "(or --replay FILE)")
    try:
        doc, code = args.func(args)
    except ParamError as exc:
        doc, code = {"error": str(exc), "code": exc.code}, EXIT_INVALID
    except InvariantViolation as exc:
        doc, code = {"violation": str(exc)}, EXIT_VIOLATION
    except (FieldError, DomainError, ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    print(json.dumps(doc, indent=2 if args.pretty else None))
    return code


if __name__ == "__main__":
    sys.exit(main())

"""File-driven command line interface.

Category files are JSON with blocks:

  grading    {"type": "Z"} or {"type": "Z_mod", "modulus": 2N}
  objects    list of object names
  homs       {"src,tgt": [{"name", "degree", "weight"}, ...]}
  units      {object: name}
  mu         [{"arity": d, "inputs": [[ "src,tgt", name], ...] right-to-left
               (an entry's inputs are listed x_d, ..., x_1),
               "output": ["src,tgt", name], "coeff": "p/q",
               "monomial": ["v", ...] (optional, default [])}, ...]
  variables  {"v": degree} (optional; marks the file as a linear system)
  twisted    {name: {"summands": [[obj, shift], ...],
                     "delta": [{"i", "j", "key": ["src,tgt", name],
                                "coeff": "p/q"}, ...]}} (optional)
  bimodule   {name: {"spaces": {"src,tgt": [{"name", "degree", "weight"}]},
                     "mu_s1r": [{"left": [...], "y": ["src,tgt", name],
                                 "right": [...], "output": [...],
                                 "coeff": "p/q", "monomial": [...]}]}}
             (optional; left/right entries are ["src,tgt", name] lists)

Rationals are decimal-free strings "p/q" or "p"; unit products implied by
strict unitality may be omitted and are reinstated on parse.  Reports are
written (deterministically) as JSON plus a text summary into the current
directory or NCPENCIL_REPORT_DIR.  Exit status: 0 if all checks pass, 1 if
a check fails, 2 on malformed input.
"""

import csv
import io
import itertools
import json
import os
import sys
from fractions import Fraction

import click

from .ainfcat import (AInfCategory, TransferDatum, check_ainf, check_units,
                      homotopy_transfer)
from .bimod import Bimodule, check_bimodule, check_bimodule_units
from .exactlin import GradedSpace
from .ncsys import NCLinearSystem, fibre, validate_system
from .poly import p_normalize
from .popsicle import (FlavouredType, WeightedPopsicleType, _diamond,
                       boundary_sign, classify_stratum, enumerate_codim1,
                       enumerate_p_for_weights, flavoured_classify,
                       flavoured_enumerate_and_classify, flavoured_partner,
                       partner_stratum, verify_cancellation)
from .quadric import case_study_report, tmu_hom_table
from .twloc import TwistedComplex, single, tw_hom_cohomology


class InputError(Exception):
    """Malformed input file or arguments; exits with status 2."""


def frac_to_str(x):
    x = Fraction(x)
    return "%d" % x.numerator if x.denominator == 1 \
        else "%d/%d" % (x.numerator, x.denominator)


def frac_from_str(s):
    try:
        return Fraction(str(s))
    except (ValueError, ZeroDivisionError):
        raise InputError("bad rational %r" % (s,))


def _pair_str(pair):
    return "%s,%s" % pair


def _pair_from_str(s):
    parts = s.split(",")
    if len(parts) != 2:
        raise InputError("bad hom pair %r (want 'src,tgt')" % s)
    return (parts[0], parts[1])


def _key_from_json(item, where):
    if not (isinstance(item, list) and len(item) == 2):
        raise InputError("%s: bad morphism reference %r" % (where, item))
    return (_pair_from_str(item[0]), item[1])


def _key_to_json(key):
    return [_pair_str(key[0]), key[1]]


def _poly_rows(entries, where):
    """Collect {target key: polynomial} rows from a list of coefficient
    entries sharing the same source."""
    row = {}
    for e in entries:
        out = _key_from_json(e["output"], where)
        mono = tuple(sorted(e.get("monomial", [])))
        c = frac_from_str(e.get("coeff", "1"))
        poly = dict(row.get(out, {}))
        poly[mono] = poly.get(mono, Fraction(0)) + c
        row[out] = {m: v for m, v in poly.items() if v}
    return {o: p for o, p in row.items() if p}


def parse_category(data):
    for block in ("grading", "objects", "homs", "units"):
        if block not in data:
            raise InputError("missing block %r" % block)
    g = data["grading"]
    if g.get("type") == "Z":
        modulus = None
    elif g.get("type") == "Z_mod":
        modulus = g.get("modulus")
        if not (isinstance(modulus, int) and modulus > 0 and modulus % 2 == 0):
            raise InputError("grading.modulus must be a positive even integer")
    else:
        raise InputError("grading.type must be 'Z' or 'Z_mod'")
    homs = {}
    for pair_s, basis in data["homs"].items():
        pair = _pair_from_str(pair_s)
        try:
            homs[pair] = GradedSpace([(b["name"], int(b["degree"]),
                                       int(b.get("weight", 0)))
                                      for b in basis])
        except (KeyError, TypeError, ValueError) as e:
            raise InputError("homs[%s]: %s" % (pair_s, e))
    units = {x: n for x, n in data["units"].items()}
    mu = {}
    for idx, entry in enumerate(data.get("mu", [])):
        where = "mu[%d]" % idx
        try:
            inputs = tuple(_key_from_json(i, where) for i in entry["inputs"])
            if entry.get("arity", len(inputs)) != len(inputs):
                raise InputError("%s: arity does not match inputs" % where)
        except KeyError as e:
            raise InputError("%s: missing field %s" % (where, e))
        row = mu.setdefault(inputs, {})
        out = _key_from_json(entry["output"], where)
        mono = tuple(sorted(entry.get("monomial", [])))
        poly = dict(row.get(out, {}))
        poly[mono] = poly.get(mono, Fraction(0)) + \
            frac_from_str(entry.get("coeff", "1"))
        row[out] = {m: v for m, v in poly.items() if v}
    mu = {k: {o: p for o, p in row.items() if p}
          for k, row in mu.items()}
    mu = {k: row for k, row in mu.items() if row}
    variables = data.get("variables")
    if variables is not None:
        variables = {v: int(d) for v, d in variables.items()}
    try:
        cat = AInfCategory(list(data["objects"]), homs, units, mu,
                           modulus=modulus, variables=variables)
    except AssertionError as e:
        raise InputError("inconsistent category data: %s" % e)
    # reinstate the strict-unit products the format allows to be omitted
    full = dict(cat.mu)
    for x, e in units.items():
        for pair in homs:
            for key in cat.hom_keys(pair):
                if pair[1] == x:
                    ins = ((pair[1], pair[1]), e), key
                    full.setdefault(
                        ins, {key: p_normalize((-1) ** (cat.degree(key) % 2))})
                if pair[0] == x and key[1] != e:
                    ins = key, ((pair[0], pair[0]), e)
                    full.setdefault(ins, {key: p_normalize(1)})
    return AInfCategory(cat.objects, homs, units, full, modulus=modulus,
                        variables=variables)


def serialize_category(cat):
    data = {
        "grading": {"type": "Z"} if cat.modulus is None
        else {"type": "Z_mod", "modulus": cat.modulus},
        "objects": list(cat.objects),
        "homs": {_pair_str(pair): [
            {"name": n, "degree": d, "weight": w} for (n, d, w) in sp.basis]
            for pair, sp in sorted(cat.homs.items())},
        "units": dict(sorted(cat.units.items())),
        "mu": [],
    }
    if cat.variables:
        data["variables"] = dict(sorted(cat.variables.items()))
    for inputs in sorted(cat.mu, key=repr):
        for out in sorted(cat.mu[inputs], key=repr):
            poly = cat.mu[inputs][out]
            for mono in sorted(poly):
                data["mu"].append({
                    "arity": len(inputs),
                    "inputs": [_key_to_json(k) for k in inputs],
                    "output": _key_to_json(out),
                    "coeff": frac_to_str(poly[mono]),
                    "monomial": list(mono),
                })
    return data


def parse_twisted(cat, name, block):
    where = "twisted[%s]" % name
    try:
        summands = [(obj, int(k)) for obj, k in block["summands"]]
    except (KeyError, TypeError, ValueError) as e:
        raise InputError("%s: %s" % (where, e))
    delta = {}
    for e in block.get("delta", []):
        key = _key_from_json(e["key"], where)
        ij = (int(e["i"]), int(e["j"]))
        row = delta.setdefault(ij, {})
        row[key] = p_normalize(frac_from_str(e.get("coeff", "1")))
    try:
        return TwistedComplex(cat, summands, delta)
    except AssertionError as e:
        raise InputError("%s: invalid twisted complex: %s" % (where, e))


def parse_bimodule(cat, name, block):
    where = "bimodule[%s]" % name
    spaces = {}
    for pair_s, basis in block.get("spaces", {}).items():
        spaces[_pair_from_str(pair_s)] = GradedSpace(
            [(b["name"], int(b["degree"]), int(b.get("weight", 0)))
             for b in basis])
    mu = {}
    for e in block.get("mu_s1r", []):
        left = tuple(_key_from_json(i, where) for i in e.get("left", []))
        right = tuple(_key_from_json(i, where) for i in e.get("right", []))
        y = _key_from_json(e["y"], where)
        out = _key_from_json(e["output"], where)
        mono = tuple(sorted(e.get("monomial", [])))
        row = mu.setdefault((left, y, right), {})
        poly = dict(row.get(out, {}))
        poly[mono] = poly.get(mono, Fraction(0)) + \
            frac_from_str(e.get("coeff", "1"))
        row[out] = {m: v for m, v in poly.items() if v}
    try:
        return Bimodule(cat, spaces, mu)
    except AssertionError as e:
        raise InputError("%s: invalid bimodule: %s" % (where, e))


def load_category_file(path):
    try:
        with open(path) as f:
            data = json.load(f)
    except OSError as e:
        raise InputError("cannot read %s: %s" % (path, e))
    except json.JSONDecodeError as e:
        raise InputError("%s: line %d column %d: %s"
                         % (path, e.lineno, e.colno, e.msg))
    if not isinstance(data, dict):
        raise InputError("%s: top level must be a JSON object" % path)
    return data


# ---------------------------------------------------------------------------
# report emission


def _render_text(report, indent=0):
    lines = []
    pad = "  " * indent
    if isinstance(report, dict):
        for k in report:
            v = report[k]
            if isinstance(v, (dict, list)) and v:
                lines.append("%s%s:" % (pad, k))
                lines.extend(_render_text(v, indent + 1))
            else:
                lines.append("%s%s: %r" % (pad, k, v))
    elif isinstance(report, list):
        for v in report:
            if isinstance(v, (dict, list)):
                lines.extend(_render_text(v, indent + 1))
            else:
                lines.append("%s- %r" % (pad, v))
    else:
        lines.append("%s%r" % (pad, report))
    return lines


def emit_report(name, report, fmt):
    outdir = os.environ.get("NCPENCIL_REPORT_DIR", ".")
    os.makedirs(outdir, exist_ok=True)
    blob = json.dumps(report, indent=2, sort_keys=True, default=repr)
    text = "\n".join(_render_text(report)) + "\n"
    with open(os.path.join(outdir, name + ".json"), "w") as f:
        f.write(blob + "\n")
    with open(os.path.join(outdir, name + ".txt"), "w") as f:
        f.write(text)
    click.echo(blob if fmt == "json" else text.rstrip("\n"))


def _dims_json(dims):
    return {str(d): v for d, v in sorted(dims.items())}


def _finish(ok):
    sys.exit(0 if ok else 1)


# ---------------------------------------------------------------------------
# commands


@click.group()
def main():
    """Exact computations with finite A-infinity categories."""


_fmt = click.option("--format", "fmt", type=click.Choice(["json", "text"]),
                    default="text", show_default=True)


@main.command("check-ainf")
@click.argument("file", type=click.Path())
@click.option("--dmax", default=4, show_default=True)
@_fmt
def cmd_check_ainf(file, dmax, fmt):
    """Validate the A-infinity and unit relations of a category file,
    together with any twisted or bimodule blocks it contains."""
    data = load_category_file(file)
    cat = parse_category(data)
    errors = [("ainf",) + tuple(e) for e in check_ainf(cat, dmax)]
    errors += [("units",) + tuple(e) for e in check_units(cat)]
    twisted = {}
    for name, block in sorted(data.get("twisted", {}).items()):
        twisted[name] = parse_twisted(cat, name, block)
    for name, block in sorted(data.get("bimodule", {}).items()):
        q = parse_bimodule(cat, name, block)
        errors += [("bimodule", name) + tuple(e) for e in check_bimodule(q)]
        errors += [("bimodule units", name) + tuple(e)
                   for e in check_bimodule_units(q)]
    report = {"file": os.path.basename(file), "dmax": dmax,
              "twisted_validated": sorted(twisted),
              "errors": [repr(e) for e in errors], "ok": not errors}
    emit_report("check_ainf", report, fmt)
    _finish(report["ok"])


@main.command("cohomology")
@click.argument("file", type=click.Path())
@click.option("--source", required=True)
@click.option("--target", required=True)
@_fmt
def cmd_cohomology(file, source, target, fmt):
    """Graded dimensions of the morphism cohomology between two objects or
    twisted complexes of a category file."""
    data = load_category_file(file)
    cat = parse_category(data)
    tw = {name: parse_twisted(cat, name, block)
          for name, block in data.get("twisted", {}).items()}

    def resolve(label):
        if label in tw:
            return tw[label]
        if label in cat.objects:
            return single(cat, label)
        raise InputError("unknown object or twisted complex %r" % label)

    dims = tw_hom_cohomology(resolve(source), resolve(target))
    report = {"file": os.path.basename(file), "source": source,
              "target": target, "dims": _dims_json(dims), "ok": True}
    emit_report("cohomology", report, fmt)
    _finish(True)


@main.command("fibre")
@click.argument("file", type=click.Path())
@click.option("--at", "at", required=True,
              help="comma-separated values, one per variable (sorted)")
@_fmt
def cmd_fibre(file, at, fmt):
    """Specialize a one-parameter family at a point and validate the fibre."""
    data = load_category_file(file)
    cat = parse_category(data)
    if not cat.variables:
        raise InputError("file has no variables block")
    names = sorted(cat.variables)
    vals = [frac_from_str(v) for v in at.split(",")]
    if len(vals) != len(names):
        raise InputError("--at needs %d values (variables %s)"
                         % (len(names), ",".join(names)))
    l = NCLinearSystem(cat)
    validate_system(l)
    fib = fibre(l, dict(zip(names, vals)))
    errors = check_ainf(fib, 3) + check_units(fib)
    report = {
        "file": os.path.basename(file),
        "at": {v: frac_to_str(x) for v, x in zip(names, vals)},
        "hom_dims": {_pair_str(pair): _dims_json(
            fib.hom_complex(pair).cohomology_dims())
            for pair in sorted(fib.homs)},
        "errors": [repr(e) for e in errors],
        "ok": not errors,
    }
    emit_report("fibre", report, fmt)
    _finish(report["ok"])


@main.command("transfer")
@click.argument("file", type=click.Path())
@click.argument("datum_file", type=click.Path())
@click.option("--dmax", default=3, show_default=True)
@_fmt
def cmd_transfer(file, datum_file, dmax, fmt):
    """Homotopy-transfer the structure onto a subspace described by a datum
    file with blocks 'sub' ({"src,tgt": [names]}) and 'h' (entries with
    input/output/coeff)."""
    cat = parse_category(load_category_file(file))
    ddata = load_category_file(datum_file)
    sub = {}
    for pair_s, names in ddata.get("sub", {}).items():
        sub[_pair_from_str(pair_s)] = list(names)
    h = {}
    for e in ddata.get("h", []):
        src = _key_from_json(e["input"], "h")
        row = h.setdefault(src, {})
        out = _key_from_json(e["output"], "h")
        mono = tuple(sorted(e.get("monomial", [])))
        poly = dict(row.get(out, {}))
        poly[mono] = poly.get(mono, Fraction(0)) + \
            frac_from_str(e.get("coeff", "1"))
        row[out] = poly
    td = TransferDatum(cat, sub, h)
    errors = td.validate()
    if errors:
        report = {"file": os.path.basename(file),
                  "datum_errors": [repr(e) for e in errors], "ok": False}
        emit_report("transfer", report, fmt)
        _finish(False)
    out_cat, _ = homotopy_transfer(td, dmax)
    errors = check_ainf(out_cat, dmax) + check_units(out_cat)
    report = {"file": os.path.basename(file), "dmax": dmax,
              "transferred": serialize_category(out_cat),
              "errors": [repr(e) for e in errors], "ok": not errors}
    emit_report("transfer", report, fmt)
    _finish(report["ok"])


@main.command("localise")
@click.argument("file", type=click.Path())
@click.option("--invert", required=True,
              help="comma-separated names of degree-zero morphisms")
@click.option("--lmax", default=2, show_default=True)
@_fmt
def cmd_localise(file, invert, lmax, fmt):
    """Cohomology of the category with the named morphisms inverted."""
    from .twloc import LocalisationDatum, localised_cohomology
    cat = parse_category(load_category_file(file))
    s = []
    for name in [x for x in invert.split(",") if x]:
        keys = [k for k in cat.all_keys() if k[1] == name]
        if len(keys) != 1:
            raise InputError("morphism %r not found (or ambiguous)" % name)
        key = keys[0]
        if cat.degree(key) != 0:
            raise InputError("morphism %r has nonzero degree" % name)
        pair = key[0]
        s.append((name, pair[0], pair[1], {key: p_normalize(1)}))
    ld = LocalisationDatum(cat, s, lmax)
    report = {
        "file": os.path.basename(file),
        "inverted": sorted(x for x in invert.split(",") if x),
        "lmax": lmax,
        "hom_dims": {_pair_str((x0, x1)): _dims_json(
            localised_cohomology(ld, x0, x1))
            for x0 in cat.objects for x1 in cat.objects},
        "ok": True,
    }
    emit_report("localise", report, fmt)
    _finish(True)


# ---------------------------------------------------------------------------
# popsicle subcommands


def _plain_types(dmax):
    for d in range(1, dmax + 1):
        for w in itertools.product((0, -1), repeat=d + 1):
            for p in enumerate_p_for_weights(d, w):
                if d + len(p) >= 2:
                    yield WeightedPopsicleType(d, p, w)


def _flavoured_types(dmax):
    for t in _plain_types(dmax):
        m = len(t.p)
        for r in range(m + 1):
            for va in itertools.combinations(range(m), r):
                yield FlavouredType(
                    t.d, tuple(t.p[j] for j in va),
                    tuple(t.p[j] for j in range(m) if j not in va), t.w)


def _write_csv(name, header, rows):
    outdir = os.environ.get("NCPENCIL_REPORT_DIR", ".")
    os.makedirs(outdir, exist_ok=True)
    path = os.path.join(outdir, name + ".csv")
    with open(path, "w", newline="") as f:
        w = csv.writer(f)
        w.writerow(header)
        w.writerows(rows)
    return path


@main.command("popsicle")
@click.argument("action", type=click.Choice(
    ["enumerate", "classify", "verify-cancellation"]))
@click.option("--dmax", default=3, show_default=True)
@click.option("--flavoured", is_flag=True)
@_fmt
def cmd_popsicle(action, dmax, flavoured, fmt):
    """Sweep the weighted (or flavoured) popsicle types up to d = dmax."""
    if action == "enumerate":
        types = list(_flavoured_types(dmax) if flavoured
                     else _plain_types(dmax))
        strata = sum(
            len(flavoured_enumerate_and_classify(t)) if flavoured
            else len(enumerate_codim1(t)) for t in types)
        report = {"dmax": dmax, "flavoured": flavoured,
                  "types": len(types), "codim1_strata": strata, "ok": True}
        emit_report("popsicle_enumerate", report, fmt)
        _finish(True)
    if action == "classify":
        rows, counts = [], {}
        if flavoured:
            for t in _flavoured_types(dmax):
                for s, label in flavoured_enumerate_and_classify(t):
                    partner = flavoured_partner(s) \
                        if label[0] in ("SwitchSprinkle", "TwoFlavourStick") \
                        else ""
                    rows.append([repr(t), repr(s), ";".join(map(str, label)),
                                 "", "", repr(partner) if partner else ""])
                    counts[label[0]] = counts.get(label[0], 0) + 1
        else:
            for t in _plain_types(dmax):
                for s in enumerate_codim1(t):
                    label = classify_stratum(s)
                    partner = partner_stratum(s) \
                        if label[0] == "SwitchSprinkle" else ""
                    rows.append([repr(t), repr(s), ";".join(map(str, label)),
                                 boundary_sign(s), _diamond(t, 0),
                                 repr(partner) if partner else ""])
                    counts[label[0]] = counts.get(label[0], 0) + 1
        path = _write_csv(
            "popsicle_classify",
            ["type", "stratum", "classification", "dagger", "diamond",
             "partner"], rows)
        report = {"dmax": dmax, "flavoured": flavoured, "strata": len(rows),
                  "counts": counts, "csv": os.path.basename(path),
                  "ok": True}
        emit_report("popsicle_classify", report, fmt)
        _finish(True)
    # verify-cancellation
    if flavoured:
        failures = []
        pairs = 0
        for t in _flavoured_types(dmax):
            for s, label in flavoured_enumerate_and_classify(t):
                if label[0] not in ("SwitchSprinkle", "TwoFlavourStick"):
                    continue
                pairs += 1
                s2 = flavoured_partner(s)
                if s2 == s or flavoured_classify(s2)[0] != label[0] \
                        or flavoured_partner(s2) != s:
                    failures.append(repr(s))
        report = {"dmax": dmax, "flavoured": True, "pairs": pairs,
                  "failures": failures, "ok": not failures and pairs > 0}
    else:
        rep = verify_cancellation(dmax)
        report = {"dmax": dmax, "flavoured": False,
                  "pairs": [repr(p) for p in rep["pairs"]],
                  "failures": [repr(p) for p in rep["failures"]],
                  "ok": rep["ok"]}
    emit_report("popsicle_cancellation", report, fmt)
    _finish(report["ok"])


@main.command("case-study")
@click.argument("which", type=click.Choice(["kronecker"]))
@click.option("--n", "n", default=3, show_default=True)
@click.option("--lambda", "lam", default="1", show_default=True,
              help="deformation parameter, as p/q")
@_fmt
def cmd_case_study(which, n, lam, fmt):
    """Run the graded Kronecker quiver case study and report every check."""
    lam = frac_from_str(lam)
    if n not in (3, 4, 5):
        raise InputError("--n must be 3, 4 or 5")
    rep = case_study_report(n, lam)
    table = tmu_hom_table(n, 1)
    report = {
        "case": which, "n": n, "lambda": frac_to_str(lam),
        "checks": rep["checks"],
        "tmu_hom_table": {"%s,%s" % k: _dims_json(v)
                          for k, v in sorted(table.items())},
        "ok": rep["ok"],
    }
    emit_report("case_study", report, fmt)
    _finish(report["ok"])


def run(argv):
    """Entry point returning an exit code (0 pass, 1 failed checks, 2 bad
    input) instead of raising SystemExit."""
    try:
        main.main(args=list(argv), standalone_mode=False)
        return 0
    except SystemExit as e:
        code = e.code if isinstance(e.code, int) else 1
        return code
    except InputError as e:
        click.echo("input error: %s" % e, err=True)
        return 2
    except click.ClickException as e:
        e.show()
        return 2
    except click.exceptions.Abort:
        return 2


def console_main():
    sys.exit(run(sys.argv[1:]))


if __name__ == "__main__":
    console_main()

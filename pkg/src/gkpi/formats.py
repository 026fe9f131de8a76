"""Input files and JSON-ready report documents.

Scalars are always written as strings ("a/b", "a", or a residue) so files
survive any text toolchain without losing exactness. Report documents carry
a ``schema`` tag (``cert-v1``, ``bound-v1``, ...) so consumers can refuse
layouts they do not understand.
"""

from __future__ import annotations

import json
import re
from importlib import resources
from pathlib import Path
from typing import Any

from .errors import InputError
from .growth import AlgebraPresentation, GrowthProfile
from .identities import BOUND_SCHEMA, BoundReport, IdentityVerdict
from .linalg import QQ, Field, Matrix
from .monomial import MonomialPresentation
from .reduction import CERT_SCHEMA, LemmaReport, ReductionCertificate, RewriteStep

DEMO_PACKAGE = "gkpi.demos"


# --------------------------------------------------------------------------
# reading
# --------------------------------------------------------------------------

def demo_names() -> list[str]:
    return sorted(p.name[:-5] for p in resources.files(DEMO_PACKAGE).iterdir() if p.name.endswith(".json"))


def load_json(source: str) -> dict:
    """Read a JSON document from a path, falling back to the bundled demos."""
    path = Path(source)
    if path.exists():
        text = path.read_text()
    else:
        name = path.name[:-5] if path.name.endswith(".json") else path.name
        if name not in demo_names():
            raise InputError(f"{source}: no such file or bundled demo")
        text = resources.files(DEMO_PACKAGE).joinpath(name + ".json").read_text()
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise InputError(f"{source}: invalid JSON at line {exc.lineno} column {exc.colno}: {exc.msg}") from None
    if not isinstance(doc, dict):
        raise InputError(f"{source}: top level must be a JSON object")
    return doc


def parse_field(value) -> Field:
    if value == "Q":
        return QQ
    if isinstance(value, dict) and set(value) == {"Fp"}:
        p = value["Fp"]
        if not isinstance(p, int) or isinstance(p, bool):
            raise InputError(f"field.Fp must be an integer, got {p!r}")
        return Field(p)
    raise InputError(f'field must be "Q" or {{"Fp": prime}}, got {value!r}')


def parse_presentation(doc: dict) -> AlgebraPresentation:
    unknown = set(doc) - {"field", "n", "include_unit", "generators", "names"}
    if unknown:
        raise InputError(f"unknown keys in presentation: {sorted(unknown)}")
    for key in ("field", "n", "generators"):
        if key not in doc:
            raise InputError(f"presentation is missing {key!r}")
    f = parse_field(doc["field"])
    n = doc["n"]
    if not isinstance(n, int) or isinstance(n, bool) or n < 1:
        raise InputError(f"n must be a positive integer, got {n!r}")
    include_unit = doc.get("include_unit", True)
    if not isinstance(include_unit, bool):
        raise InputError("include_unit must be true or false")
    gens_doc = doc["generators"]
    if not isinstance(gens_doc, list) or not gens_doc:
        raise InputError("generators must be a nonempty array")
    gens = []
    for g, mat in enumerate(gens_doc):
        if not isinstance(mat, list) or len(mat) != n:
            raise InputError(f"generators[{g}]: expected {n} rows")
        entries = []
        for r, row in enumerate(mat):
            if not isinstance(row, list) or len(row) != n:
                got = len(row) if isinstance(row, list) else type(row).__name__
                raise InputError(f"generators[{g}][{r}]: expected {n} entries, got {got}")
            for c, x in enumerate(row):
                try:
                    entries.append(f.parse(x))
                except InputError as exc:
                    raise InputError(f"generators[{g}][{r}][{c}]: {exc}") from None
        gens.append(Matrix(n, n, entries, f, _trusted=True))
    names = doc.get("names")
    if names is not None:
        if (not isinstance(names, list) or len(names) != len(gens)
                or not all(isinstance(x, str) and x for x in names) or len(set(names)) != len(names)):
            raise InputError("names must be distinct nonempty strings, one per generator")
    return AlgebraPresentation(f, n, tuple(gens), include_unit, tuple(names) if names else None)


def parse_monomial(doc: dict) -> MonomialPresentation:
    alphabet = doc.get("alphabet")
    forbidden = doc.get("forbidden", [])
    if not isinstance(alphabet, list) or not all(isinstance(a, str) and a for a in alphabet):
        raise InputError("alphabet must be an array of nonempty strings")
    if not isinstance(forbidden, list):
        raise InputError("forbidden must be an array of words")
    for k, w in enumerate(forbidden):
        if (isinstance(w, str) and not w) or (isinstance(w, list) and not w):
            raise InputError(f"forbidden[{k}] is empty")
    return MonomialPresentation.from_strings(alphabet, forbidden)


def presentation_document(pres: AlgebraPresentation) -> dict:
    doc = {
        "field": pres.field.to_json(),
        "n": pres.n,
        "include_unit": pres.include_unit,
        "generators": [matrix_document(g) for g in pres.generators],
    }
    if pres.generator_names:
        doc["names"] = list(pres.generator_names)
    return doc


def parse_word(text: str, pres: AlgebraPresentation) -> tuple:
    """Parse "0,1,0", "0 1 0" or "a*b*a" (using generator names)."""
    tokens = [t for t in re.split(r"[,*\s]+", text.strip()) if t]
    if text.strip() in ("", "1", "()"):
        return ()
    names = pres.generator_names or ()
    out = []
    for tok in tokens:
        if tok in names:
            out.append(names.index(tok))
        elif tok.isdigit() and int(tok) < pres.t:
            out.append(int(tok))
        else:
            raise InputError(f"word token {tok!r} is not a generator index or name")
    return tuple(out)


def word_document(w, names=None) -> list:
    return [names[a] for a in w] if names else list(w)


def word_from_document(doc, pres: AlgebraPresentation) -> tuple:
    if not isinstance(doc, list):
        raise InputError(f"word must be an array, got {doc!r}")
    names = pres.generator_names or ()
    out = []
    for x in doc:
        if isinstance(x, int) and not isinstance(x, bool) and 0 <= x < pres.t:
            out.append(x)
        elif isinstance(x, str) and x in names:
            out.append(names.index(x))
        else:
            raise InputError(f"letter {x!r} is not a generator of the presentation")
    return tuple(out)


# --------------------------------------------------------------------------
# writing
# --------------------------------------------------------------------------

def matrix_document(m: Matrix) -> list:
    return [[m.field.format(x) for x in m.row(i)] for i in range(m.rows)]


def profile_document(profile: GrowthProfile, bound: int, names=None) -> dict:
    doc = {
        "schema": "growth-v1",
        "horizon": profile.horizon,
        "dims": profile.dims,
        "differences": profile.differences,
        "measured_bergman_bound": bound,
        "bound_label": "measured Bergman bound of S" + ("" if profile.stabilized_at is not None
                                                        else " (up to horizon)"),
        "stabilized_at": profile.stabilized_at,
    }
    if profile.basis_words is not None:
        doc["basis_words"] = [[word_document(w, names) for w in level] for level in profile.basis_words]
    return doc


def _detail_document(detail: dict, f: Field, names) -> dict:
    out: dict[str, Any] = {}
    for key, val in detail.items():
        if key in ("prefix", "base", "suffix"):
            out[key] = word_document(val, names)
        elif key == "charpoly":
            out[key] = [f.format(c) for c in val]
        elif key == "alphas":
            out[key] = {str(k): f.format(a) for k, a in val.items()}
        elif key == "u":
            out[key] = [{"coefficient": f.format(c), "word": word_document(w, names)} for c, w in val]
        else:
            out[key] = val
    return out


def _terms_document(terms, f: Field, names) -> list:
    return [{"coefficient": f.format(c), "word": word_document(w, names)} for c, w in terms]


def certificate_document(cert: ReductionCertificate, pres: AlgebraPresentation) -> dict:
    f, names = pres.field, pres.generator_names
    return {
        "schema": CERT_SCHEMA,
        "ell": cert.ell,
        "word": word_document(cert.word, names),
        "terms": _terms_document(cert.terms, f, names),
        "trace": [
            {
                "kind": s.kind,
                "input_word": word_document(s.input_word, names),
                "output_terms": _terms_document(s.output_terms, f, names),
                "detail": _detail_document(s.detail, f, names),
            }
            for s in cert.trace
        ],
    }


def _terms_from_document(doc, pres):
    if not isinstance(doc, list):
        raise InputError("terms must be an array")
    out = []
    for t in doc:
        if not isinstance(t, dict) or "coefficient" not in t or "word" not in t:
            raise InputError("each term needs coefficient and word")
        out.append((pres.field.parse(t["coefficient"]), word_from_document(t["word"], pres)))
    return out


def certificate_from_document(doc: dict, pres: AlgebraPresentation) -> ReductionCertificate:
    if not isinstance(doc, dict) or doc.get("schema") != CERT_SCHEMA:
        raise InputError(f"expected a {CERT_SCHEMA} document")
    trace = []
    for s in doc.get("trace", []):
        trace.append(RewriteStep(s["kind"], word_from_document(s["input_word"], pres),
                                 _terms_from_document(s["output_terms"], pres), s.get("detail", {})))
    return ReductionCertificate(word_from_document(doc["word"], pres), _terms_from_document(doc["terms"], pres),
                                trace, doc.get("ell"))


def lemma_document(report: LemmaReport, pres: AlgebraPresentation) -> dict:
    return {
        "schema": "lemma-v1",
        "n": report.n,
        "ell": report.ell,
        "ell_note": report.ell_note,
        "m": report.m,
        "measured_bergman_bound": report.measured_bound,
        "irreducible": report.irreducible,
        "algebra_dim": report.algebra_dim,
        "dims": report.dims,
        "span_claim": report.span_claim,
        "span_claim_detail": (f"d_{report.m - 1} = {report.dims[report.m - 1]}, n^2 = {report.n ** 2}"
                              if report.irreducible else "skipped: presentation is not irreducible"),
        "all_length_m_words_reducible": report.all_reducible,
        "inequality": {
            "statement": "n^2 <= ell^2 (n+1) - ell + 1",
            "lhs": report.inequality_lhs,
            "rhs": report.inequality_rhs,
            "holds": report.inequality_holds,
        },
        "seed": report.seed,
        "certificates": [certificate_document(c, pres) for c in report.certificates],
        "certificates_verified": [bool(c) for c in report.certificate_checks],
        "ok": report.ok,
    }


def verdict_document(v: IdentityVerdict, names=None) -> dict:
    doc: dict[str, Any] = {
        "degree": v.degree,
        "mode": v.mode,
        "status": "Vanishes" if v.vanishes else "Counterexample",
        "tuples_tested": v.tuples_tested,
        "basis_size": v.basis_size,
    }
    if v.mode == "random":
        doc["seed"] = v.seed
        doc["trials"] = v.trials
    if not v.vanishes:
        doc["counterexample"] = [matrix_document(a) for a in v.counterexample]
        if v.counterexample_words is not None:
            doc["counterexample_words"] = [word_document(w, names) for w in v.counterexample_words]
        doc["value"] = matrix_document(v.value)
    return doc


def bound_document(report: BoundReport, names=None) -> dict:
    doc = {
        "schema": BOUND_SCHEMA,
        "measured_c": report.measured_c,
        "c_note": report.c_note,
        "n": report.n,
        "N_int": report.N_int,
        "N_real": report.N_real,
        "remark_bound": report.remark_bound,
        "pi_degree_claim": report.pi_degree_claim,
        "stabilized": report.stabilized,
        "notes": report.notes,
    }
    if report.empirical is not None:
        doc["empirical"] = verdict_document(report.empirical, names)
    return doc


def render_json(doc) -> str:
    return json.dumps(doc, indent=2, sort_keys=True) + "\n"


def render_text(doc, indent: int = 0) -> str:
    lines = []
    pad = "  " * indent
    for key, val in doc.items():
        if isinstance(val, dict):
            lines.append(f"{pad}{key}:")
            lines.append(render_text(val, indent + 1).rstrip("\n"))
        elif isinstance(val, list) and val and isinstance(val[0], dict):
            lines.append(f"{pad}{key}: [{len(val)} entries]")
        else:
            lines.append(f"{pad}{key}: {json.dumps(val) if not isinstance(val, str) else val}")
    return "\n".join(lines) + "\n"

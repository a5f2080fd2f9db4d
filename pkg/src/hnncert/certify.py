"""Acylindrical-hyperbolicity certificates.

A certificate replays the argument

    eps: H ->> Z, normalized so t |-> 1
    H splits as an HNN extension with associated rank <= M = kN
    pick n* with n* L >= M + 1, so b(K_n*) >= M + 1 and d(K_n*) >= M + 2
    K_n* is an HNN extension of A with edge groups C, D of rank <= M
    d(A) >= M + 1 > M >= d(C) = d(D), so C, D are proper in A
    C is not s-normal, hence some C^g meets C finitely, hence K_n* and H are
    acylindrically hyperbolic

where ``b`` is the first l2-Betti number and ``L`` a positive lower bound for
``b(H)``. Steps that a machine can check are COMPUTED and carry the data
needed to recheck them; deep theorems enter as CITED steps recording the
exact instance being invoked.

Every step's data is built only from the recorded data of earlier steps, so
:func:`audit_certificate` re-runs the same builders on a recorded certificate
and compares datum by datum, on top of independent semantic rechecks.
"""

from __future__ import annotations

import hashlib
import json
import math
from dataclasses import dataclass, field
from fractions import Fraction

from .covers import CoverPresentation, cover_hnn_data, kernel_presentation
from .errors import UnknownFormat
from .hnn import split_as_hnn, verify_splitting
from .intlin import abelianization
from .presentations import (
    FinitePresentation,
    apply_moves,
    deficiency,
    move_from_dict,
    move_to_dict,
)
from .words import format_word, parse_word
from .zmaps import (
    ZHomomorphism,
    find_zmap,
    normalize_stable_letter,
    transport_zmap,
    verify_zmap,
    zmap_defects,
)

COMPUTED, CITED, FAILED = "COMPUTED", "CITED", "FAILED"
V_CERTIFIED, V_INCONCLUSIVE, V_FAILED = "certified", "inconclusive", "failed"
DEFICIENCY_ROUTE, USER_ROUTE = "deficiency", "user"
NUM_STEPS = 10


@dataclass
class CertStep:
    index: int
    key: str
    claim: str
    status: str
    justification: str
    data: dict

    def to_dict(self) -> dict:
        return {"index": str(self.index), "key": self.key, "claim": self.claim,
                "status": self.status, "justification": self.justification,
                "data": self.data}

    @classmethod
    def from_dict(cls, d: dict) -> "CertStep":
        return cls(int(d["index"]), d["key"], d["claim"], d["status"],
                   d["justification"], d["data"])


@dataclass
class Certificate:
    presentation: dict
    digest: str
    eps: dict | None
    lower_bound: str
    provenance: str
    steps: list[CertStep] = field(default_factory=list)
    verdict: str = V_INCONCLUSIVE
    reason: str | None = None
    user_note: str | None = None

    @property
    def conditional(self) -> bool:
        return self.provenance == USER_ROUTE

    def to_dict(self) -> dict:
        return {
            "schema_version": "1",
            "input": {"presentation": self.presentation, "digest": self.digest},
            "eps": self.eps,
            "lower_bound": {"value": self.lower_bound, "provenance": self.provenance,
                            "note": self.user_note},
            "conditional": self.conditional,
            "steps": [s.to_dict() for s in self.steps],
            "verdict": self.verdict,
            "reason": self.reason,
        }

    @classmethod
    def from_dict(cls, d: dict) -> "Certificate":
        lb = d["lower_bound"]
        return cls(d["input"]["presentation"], d["input"]["digest"], d.get("eps"),
                   lb["value"], lb["provenance"],
                   [CertStep.from_dict(s) for s in d.get("steps", [])],
                   d["verdict"], d.get("reason"), lb.get("note"))


def presentation_digest(p: FinitePresentation) -> str:
    blob = json.dumps(p.to_dict(), sort_keys=True, separators=(",", ":"))
    return "sha256:" + hashlib.sha256(blob.encode()).hexdigest()


def choose_cover_degree(M: int, N: int, L: Fraction) -> int:
    """Least n with n*L >= M + 1, raised to N so the edge generators exist in K_n."""
    if L <= 0:
        raise ValueError("lower bound must be positive")
    return max(math.ceil(Fraction(M + 1) / Fraction(L)), N)


# -- step builders -----------------------------------------------------------
# Each takes parsed inputs and returns a CertStep. Shared by certify and audit.

def _step_epimorphism(p: FinitePresentation, eps: ZHomomorphism, source: str) -> CertStep:
    defects = zmap_defects(p, eps)
    data = {
        "eps": {n: str(v) for n, v in zip(p.generators, eps.values)},
        "source": source,
        "relator_images": [str(eps.image(r)) for r in p.relators]
        if len(eps.values) == p.num_generators else [],
        "defects": defects,
    }
    return CertStep(1, "epimorphism", f"eps = ({eps.format(p.generators)}) maps H onto Z",
                    FAILED if defects else COMPUTED,
                    "relators have zero image and the values have gcd 1", data)


def _step_normalize(p: FinitePresentation, eps: ZHomomorphism) -> CertStep:
    norm = normalize_stable_letter(p, eps)
    moves, cur = [], p
    for mv, nxt in zip(norm.moves, norm.history):
        moves.append(move_to_dict(mv, cur))
        cur = nxt
    q = norm.presentation
    data = {
        "moves": moves,
        "stable": norm.stable.name,
        "presentation": q.to_dict(),
        "zmap": {n: str(v) for n, v in zip(q.generators, norm.zmap.values)},
    }
    return CertStep(2, "normalize", f"Tietze moves give a presentation of H with "
                    f"eps({norm.stable.name}) = 1 and every other generator in ker eps",
                    COMPUTED, "logged Tietze substitutions; eps transported along them", data)


def _step_split(q: FinitePresentation, t: str) -> CertStep:
    split = split_as_hnn(q, t)
    ok = verify_splitting(split, q)
    names = split.base.generators
    data = {
        "stable": t,
        "k": str(split.k),
        "N": str(split.shift_bound_N),
        "M": str(split.rank_bound_M),
        "coarse_shift_bound": str(split.coarse_shift_bound),
        "base": split.base.to_dict(),
        "relator_offsets": [str(c) for c in split.offsets],
        "assoc_C": [format_word(w, names) for w in split.assoc_C],
        "assoc_D": [format_word(w, names) for w in split.assoc_D],
        "verified": ok,
    }
    M = split.rank_bound_M
    return CertStep(3, "hnn_split",
                    f"H is an HNN extension with stable letter {t} and associated subgroups "
                    f"generated by {len(split.assoc_C)} <= M = k*N = "
                    f"{split.k}*{split.shift_bound_N} = {M} elements",
                    COMPUTED if ok else FAILED,
                    "rewriting over b(a, beta) = t^beta a t^-beta plus the conjugation "
                    "relations t b(a, beta) t^-1 = b(a, beta+1)", data)


def _step_degree(M: int, N: int, L: Fraction, provenance: str) -> CertStep:
    n = choose_cover_degree(M, N, L)
    ok = n * L >= M + 1 and n >= N
    data = {"L": str(L), "L_provenance": provenance, "M": str(M), "N": str(N),
            "n_star": str(n), "l2_lower_on_cover": str(n * L), "target": str(M + 1)}
    just = ("multiplicativity under finite index: b(K_n) = [H:K_n] b(H) >= n L"
            + ("; lower bound b(H) >= def(H) - 1" if provenance == DEFICIENCY_ROUTE
               else "; lower bound supplied by the user"))
    return CertStep(4, "cover_degree",
                    f"n* = max(ceil((M+1)/L), N) = {n}, so b(K_{n}) >= {n * L} >= {M + 1}",
                    COMPUTED if ok else FAILED, just, data)


def _step_rank_lower(n: int, M: int, L: Fraction) -> CertStep:
    data = {"n_star": str(n), "l2_lower": str(n * L), "d_lower": str(M + 2)}
    return CertStep(5, "rank_lower", f"d(K_{n}) >= b(K_{n}) + 1 >= {M + 2}", CITED,
                    "the first l2-Betti number of a finitely generated group is at most "
                    "its rank minus 1", data)


def _step_cover(q: FinitePresentation, t: str, n: int) -> tuple[CertStep, CoverPresentation]:
    split = split_as_hnn(q, t)
    cover = kernel_presentation(q, t, n)
    hd = cover_hnn_data(split, cover)
    ab = abelianization(cover.pres)
    names = cover.pres.generators
    zmap_ok = verify_zmap(cover.pres, cover.inherited_zmap)
    c_in_kernel = all(cover.inherited_zmap.image(w) == 0 for w in hd.assoc_C_words)
    M = split.rank_bound_M
    ok = len(hd.assoc_C_words) <= M and zmap_ok and c_in_kernel
    data = {
        "n": str(n),
        "presentation": cover.pres.to_dict(),
        "embedding": {names[i]: format_word(w, q.generators)
                      for i, w in enumerate(cover.embedding)},
        "assoc_C": [format_word(w, names) for w in hd.assoc_C_words],
        "assoc_D": [format_word(w, names) for w in hd.assoc_D_words],
        "C_size": str(len(hd.assoc_C_words)),
        "M": str(M),
        "zmap_ok": zmap_ok,
        "C_in_ker_zmap": c_in_kernel,
        "b1": str(ab.b1),
        "torsion": [str(d) for d in ab.torsion],
        "min_abelian_gens": str(ab.min_abelian_gens),
    }
    step = CertStep(6, "cover",
                    f"K_{n} is an HNN extension of A with stable letter x = t^{n} and "
                    f"associated subgroups C, D = xCx^-1 generated by "
                    f"{len(hd.assoc_C_words)} <= M = {M} elements",
                    COMPUTED if ok else FAILED,
                    "Reidemeister-Schreier over the transversal 1, t, ..., t^(n-1); "
                    "edge stabilizers do not grow with n", data)
    return step, cover


def _step_chain(n: int, M: int, d_lower: int, c_size: int) -> CertStep:
    d_a = d_lower - 1
    ok = d_a >= M + 1 > M >= c_size
    data = {"d_K_lower": str(d_lower), "d_A_lower": str(d_a), "M": str(M),
            "C_size": str(c_size), "D_size": str(c_size), "proper": ok}
    return CertStep(7, "rank_chain",
                    f"d(A) >= d(K_{n}) - 1 >= {d_a} > {M} >= d(C) = d(D), "
                    f"so C and D are proper in A",
                    COMPUTED if ok else FAILED,
                    "an HNN extension needs at most one generator beyond its base", data)


def _step_not_s_normal(n: int, M: int, L: Fraction, c_words: list[str]) -> CertStep:
    if not c_words:
        data = {"C_generators": [], "C_trivial": True}
        return CertStep(8, "not_s_normal",
                        f"C is trivial, so C^g meets C finitely for every g in K_{n}",
                        COMPUTED, "trivial edge group", data)
    data = {"ambient": f"K_{n}", "C_generators": list(c_words),
            "C_finitely_generated": True, "C_infinite_index": True,
            "l2_lower_ambient": str(n * L)}
    return CertStep(8, "not_s_normal",
                    f"C = <{', '.join(c_words)}> is not s-normal in K_{n}: some g has "
                    f"C^g meets C finitely",
                    CITED,
                    "a group with an infinite-index s-normal subgroup of finite "
                    "first l2-Betti number has vanishing first l2-Betti number; C lies in the "
                    "kernel of K_n -> Z (infinite index) and b(K_n) > 0", data)


def _step_acylindrical(n: int, c_words: list[str], d_words: list[str]) -> CertStep:
    data = {"group": f"K_{n}", "stable": "x", "assoc_C": list(c_words),
            "assoc_D": list(d_words), "C_proper": True, "D_proper": True,
            "finite_intersection_from_step": "8"}
    return CertStep(9, "acylindrical_cover",
                    f"K_{n} is acylindrically hyperbolic", CITED,
                    "an HNN extension of A with C != A != D and some g with "
                    "C^g meeting C finitely is acylindrically hyperbolic", data)


def _step_transfer(n: int) -> CertStep:
    data = {"subgroup": f"K_{n}", "index": str(n)}
    return CertStep(10, "transfer",
                    "H is acylindrically hyperbolic, and so is every group containing H "
                    "with finite index", CITED,
                    "acylindrical hyperbolicity passes to and from finite-index subgroups", data)


# -- pipeline ----------------------------------------------------------------

def _eps_from(p: FinitePresentation, d: dict) -> ZHomomorphism:
    return ZHomomorphism.from_mapping(p, {k: int(v) for k, v in d.items()})


def certify(p: FinitePresentation, lower: Fraction | int | str | None = None,
            provenance: str = DEFICIENCY_ROUTE, eps: ZHomomorphism | None = None,
            user_note: str | None = None) -> Certificate:
    """Build a certificate for the input presentation ``p`` of H.

    With the deficiency route ``L = def(p) - 1``; otherwise ``lower`` is the
    user's bound and the verdict is conditional on it. Never raises for
    mathematical failures: they end up as FAILED steps or an inconclusive verdict.
    """
    if provenance == DEFICIENCY_ROUTE:
        L = Fraction(deficiency(p) - 1)
    elif provenance == USER_ROUTE:
        if lower is None:
            raise ValueError("user route needs a lower bound")
        L = Fraction(lower)
    else:
        raise ValueError(f"unknown provenance {provenance!r}")

    cert = Certificate(p.to_dict(), presentation_digest(p), None, str(L), provenance,
                       user_note=user_note)
    source = "user"
    if eps is None:
        source = "found"
        eps = find_zmap(p)
        if eps is None:
            cert.reason = "b1 = 0: no epimorphism onto Z"
            return cert
    cert.eps = {n: str(v) for n, v in zip(p.generators, eps.values)} \
        if len(eps.values) == p.num_generators else None

    def done(step: CertStep) -> bool:
        cert.steps.append(step)
        if step.status == FAILED:
            cert.verdict = V_FAILED
            cert.reason = f"step {step.index} ({step.key}) failed"
            return True
        return False

    if done(_step_epimorphism(p, eps, source)):
        return cert
    s2 = _step_normalize(p, eps)
    done(s2)
    q = FinitePresentation.from_dict(s2.data["presentation"])
    t = s2.data["stable"]
    s3 = _step_split(q, t)
    if done(s3):
        return cert
    M, N = int(s3.data["M"]), int(s3.data["N"])
    if L <= 0:
        cert.reason = f"no positive lower bound on the first l2-Betti number (L = {L})"
        return cert
    s4 = _step_degree(M, N, L, provenance)
    if done(s4):
        return cert
    n = int(s4.data["n_star"])
    s5 = _step_rank_lower(n, M, L)
    done(s5)
    s6, _ = _step_cover(q, t, n)
    if done(s6):
        return cert
    s7 = _step_chain(n, M, int(s5.data["d_lower"]), int(s6.data["C_size"]))
    if done(s7):
        return cert
    done(_step_not_s_normal(n, M, L, s6.data["assoc_C"]))
    done(_step_acylindrical(n, s6.data["assoc_C"], s6.data["assoc_D"]))
    done(_step_transfer(n))
    cert.verdict = V_CERTIFIED
    if cert.conditional:
        cert.reason = "conditional on user-supplied lower bound"
    return cert


# -- audit -------------------------------------------------------------------

@dataclass
class AuditReport:
    verdict: str
    failures: list[tuple[int, str]]

    @property
    def ok(self) -> bool:
        return not self.failures


def _same(step: CertStep, expected: CertStep) -> str | None:
    for attr in ("index", "key", "claim", "status", "justification"):
        if getattr(step, attr) != getattr(expected, attr):
            return f"{attr} differs from replay"
    if step.data != expected.data:
        diff = sorted(k for k in set(step.data) | set(expected.data)
                      if step.data.get(k) != expected.data.get(k))
        return f"data differs from replay: {', '.join(diff)}"
    return None


def _replay_normalization(p: FinitePresentation, eps: ZHomomorphism, data: dict) -> str | None:
    # independent of normalize_stable_letter: apply the logged moves one by one
    cur, z = p, eps
    for md in data["moves"]:
        mv = move_from_dict(md, cur)
        z = transport_zmap(cur, z, mv)
        cur = apply_moves(cur, [mv])
    if cur != FinitePresentation.from_dict(data["presentation"]):
        return "logged moves do not produce the recorded presentation"
    t = cur.gen_id(data["stable"])
    if z.values != tuple(int(i == t) for i in range(cur.num_generators)):
        return "transported map is not the unit vector at the stable letter"
    if z.values != _eps_from(cur, data["zmap"]).values or not verify_zmap(cur, z):
        return "transported map is not an epimorphism"
    return None


def audit_certificate(cert: Certificate, p: FinitePresentation | None = None) -> AuditReport:
    """Replay every step of ``cert``; any mismatch makes the verdict FAILED."""
    failures: list[tuple[int, str]] = []
    try:
        recorded = FinitePresentation.from_dict(cert.presentation)
    except Exception as exc:  # noqa: BLE001
        return AuditReport(V_FAILED, [(0, f"unreadable input presentation: {exc}")])
    if p is None:
        p = recorded
    if recorded != p or cert.digest != presentation_digest(p):
        failures.append((0, "input presentation or digest mismatch"))
    steps = {s.index: s for s in cert.steps}
    if [s.index for s in cert.steps] != list(range(1, len(cert.steps) + 1)):
        failures.append((0, "steps are not numbered 1..n in order"))

    try:
        L = Fraction(cert.lower_bound)
        if cert.provenance == DEFICIENCY_ROUTE and L != deficiency(p) - 1:
            failures.append((0, "deficiency-route bound does not match the presentation"))
        elif cert.provenance not in (DEFICIENCY_ROUTE, USER_ROUTE):
            failures.append((0, f"unknown provenance {cert.provenance!r}"))
    except Exception as exc:  # noqa: BLE001
        return AuditReport(V_FAILED, failures + [(0, f"bad lower bound: {exc}")])

    def check(i: int, build, extra=None):
        if i not in steps:
            return False
        try:
            msg = _same(steps[i], build())
            if msg is None and extra is not None:
                msg = extra()
        except Exception as exc:  # noqa: BLE001
            msg = f"replay raised {type(exc).__name__}: {exc}"
        if msg:
            failures.append((i, msg))
        return True

    def pipeline():
        s1 = steps.get(1)
        if s1 is None:
            if cert.steps or cert.eps is not None or find_zmap(p) is not None:
                failures.append((0, "missing epimorphism step"))
            return
        eps = _eps_from(p, s1.data["eps"])
        if cert.eps != s1.data["eps"]:
            failures.append((1, "certificate eps differs from step data"))
        if s1.data["source"] not in ("found", "user"):
            failures.append((1, f"unknown eps source {s1.data['source']!r}"))
        if s1.data["source"] == "found" and find_zmap(p) != eps:
            failures.append((1, "recorded eps is not the one find_zmap selects"))
        check(1, lambda: _step_epimorphism(p, eps, s1.data["source"]),
              lambda: None if verify_zmap(p, eps) else "eps is not an epimorphism")
        if 2 not in steps:
            return
        check(2, lambda: _step_normalize(p, eps),
              lambda: _replay_normalization(p, eps, steps[2].data))
        q = FinitePresentation.from_dict(steps[2].data["presentation"])
        t = steps[2].data["stable"]
        if not check(3, lambda: _step_split(q, t),
                     lambda: None if verify_splitting(split_as_hnn(q, t), q)
                     else "splitting does not verify"):
            return
        M, N = int(steps[3].data["M"]), int(steps[3].data["N"])
        if M != int(steps[3].data["k"]) * N:
            failures.append((3, "M != k*N"))
        if not check(4, lambda: _step_degree(M, N, L, cert.provenance)):
            return
        n = int(steps[4].data["n_star"])
        if n * L < M + 1 or n < N:
            failures.append((4, "cover degree arithmetic fails"))
        check(5, lambda: _step_rank_lower(n, M, L))
        if not check(6, lambda: _step_cover(q, t, n)[0]):
            return
        c_words = steps[6].data["assoc_C"]
        cover_names = steps[6].data["presentation"]["generators"]
        for w in c_words + steps[6].data["assoc_D"]:
            parse_word(w, cover_names)
        check(7, lambda: _step_chain(n, M, int(steps[5].data["d_lower"]),
                                     int(steps[6].data["C_size"])))
        check(8, lambda: _step_not_s_normal(n, M, L, c_words))
        check(9, lambda: _step_acylindrical(n, c_words, steps[6].data["assoc_D"]))
        check(10, lambda: _step_transfer(n))

    try:
        pipeline()
    except Exception as exc:  # noqa: BLE001
        failures.append((0, f"replay raised {type(exc).__name__}: {exc}"))

    statuses = [s.status for s in cert.steps]
    if FAILED in statuses and cert.verdict != V_FAILED:
        failures.append((0, "a FAILED step under a non-failed verdict"))
    if cert.verdict == V_CERTIFIED and (len(cert.steps) != NUM_STEPS
                                        or any(s not in (COMPUTED, CITED) for s in statuses)):
        failures.append((0, "certified verdict without the full step sequence"))
    if failures or cert.verdict == V_FAILED:
        return AuditReport(V_FAILED, failures)
    return AuditReport(cert.verdict, failures)


# -- rendering ---------------------------------------------------------------

def render_certificate(c: Certificate, fmt: str = "json") -> str:
    if fmt == "json":
        return json.dumps(c.to_dict(), indent=2, sort_keys=True) + "\n"
    if fmt == "text":
        return _render_text(c)
    raise UnknownFormat(f"unknown format {fmt!r}")


def parse_certificate(text: str) -> Certificate:
    return Certificate.from_dict(json.loads(text))


def _render_data(value, indent: str) -> list[str]:
    lines = []
    for k in sorted(value):
        v = value[k]
        if isinstance(v, dict) and k in ("presentation", "base"):
            p = FinitePresentation.from_dict(v)
            lines.append(f"{indent}{k}: < {p} >")
        elif isinstance(v, dict):
            inner = ", ".join(f"{a}={b}" for a, b in v.items())
            lines.append(f"{indent}{k}: {{{inner}}}")
        elif isinstance(v, list):
            items = [json.dumps(x, sort_keys=True) if isinstance(x, (dict, list)) else str(x)
                     for x in v]
            lines.append(f"{indent}{k}: [{'; '.join(items)}]")
        else:
            lines.append(f"{indent}{k}: {v}")
    return lines


def _render_text(c: Certificate) -> str:
    p = FinitePresentation.from_dict(c.presentation)
    out = [
        "acylindrical hyperbolicity certificate",
        f"input: < {p} >",
        f"digest: {c.digest}",
        f"eps: {', '.join(f'{k}={v}' for k, v in c.eps.items()) if c.eps else '-'}",
        f"lower bound L = {c.lower_bound} ({c.provenance} route)"
        + (f" note: {c.user_note}" if c.user_note else ""),
        "",
    ]
    for s in c.steps:
        out.append(f"{s.index:>2}. [{s.status}] {s.claim}")
        out.append(f"      by: {s.justification}")
        out.extend(_render_data(s.data, "      "))
    out.append("")
    if c.reason:
        out.append(f"reason: {c.reason}")
    out.append(f"verdict: {c.verdict.upper()}")
    return "\n".join(out) + "\n"

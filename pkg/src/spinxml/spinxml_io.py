"""Reading and writing spin system XML documents.

The concrete syntax is:

    spin_system := element "spin_system" { spin*, interaction* }
    spin        := element "spin" { @number:int, @isotope, @label?,
                                    element "coordinates" { @x,@y,@z }? }
    interaction := element "interaction" { @kind, @units, @spin_1:int,
                                           @spin_2?:int, @label?, @reference?,
                                           ( scalar | tensor
                                           | (eigenvalue-form, rotation?) ) }
    eigenvalue-form := eigenvalues(@xx,@yy,@zz) | aniso_asym(@iso,@aniso,@asym)
                     | ax_rh(@iso,@ax,@rh) | span_skew(@iso,@span,@skew)
    rotation    := element "rotation" { euler_angles(@alpha,@beta,@gamma)
                     | angle_axis(@angle; axis(@x,@y,@z))
                     | quaternion(@w,@x,@y,@z) | dcm(@xx..@zz) }

A machine-readable schema shipping the same constraints is installed as
``data/spinxml.xsd``.  Amplitude and rotation children are SWITCH groups:
exactly one alternative may appear.  The parser accepts ``id`` as an alias
for the ``number`` spin attribute; the writer always emits ``number``.
Floats are written in the shortest decimal form that round-trips exactly
(at most 17 significant digits), so write -> parse is drift-free.

Known quirk: one published example document carries a duplicated ``yz``
attribute inside a ``tensor`` element where ``yx``/``yy`` were clearly
intended; duplicated attributes are not well-formed XML, so such a file
must be corrected to the nine distinct attributes xx..zz before parsing.
"""

from __future__ import annotations

import xml.parsers.expat
from dataclasses import dataclass, field
from xml.sax.saxutils import escape, quoteattr

import numpy as np

from .model import (
    AmplitudeSpec,
    DEFAULT_UNITS,
    SUPPORTED_UNITS,
    EigenAmplitude,
    ExplicitEigenvalues,
    InteractionKind,
    InteractionTerm,
    IsoAnisoAsym,
    IsoAxRh,
    IsoSpanSkew,
    Issue,
    MatrixAmplitude,
    ScalarAmplitude,
    Spin,
    SpinSystem,
    promote_amplitude,
)
from .rotations import (
    AngleAxis,
    DCM,
    EULER_CONVENTION_NOTE,
    EulerAngles,
    Quaternion,
    Rotation,
    from_dcm,
    to_dcm,
)

AMPLITUDE_TAGS = ("scalar", "tensor", "eigenvalues", "aniso_asym", "ax_rh", "span_skew")
ROTATION_TAGS = ("euler_angles", "angle_axis", "quaternion", "dcm")
_MATRIX_ATTRS = ("xx", "xy", "xz", "yx", "yy", "yz", "zx", "zy", "zz")


class SpinXMLParseError(ValueError):
    """Document cannot be mapped onto the spin system grammar."""


@dataclass
class _Node:
    tag: str
    attrs: dict[str, str]
    line: int
    children: list["_Node"] = field(default_factory=list)
    text: str = ""

    def find_all(self, tag: str) -> list["_Node"]:
        return [c for c in self.children if c.tag == tag]

    @property
    def where(self) -> str:
        return f"line {self.line} <{self.tag}>"


def _read_tree(data: bytes | str) -> _Node:
    parser = xml.parsers.expat.ParserCreate()
    root: list[_Node] = []
    stack: list[_Node] = []

    def start(tag, attrs):
        node = _Node(tag=tag, attrs=dict(attrs), line=parser.CurrentLineNumber)
        if stack:
            stack[-1].children.append(node)
        else:
            root.append(node)
        stack.append(node)

    def end(_tag):
        stack.pop()

    def chars(text):
        if stack:
            stack[-1].text += text

    parser.StartElementHandler = start
    parser.EndElementHandler = end
    parser.CharacterDataHandler = chars
    try:
        if isinstance(data, str):
            data = data.encode("utf-8")
        parser.Parse(data, True)
    except xml.parsers.expat.ExpatError as e:
        raise SpinXMLParseError(f"not well-formed XML: {e}") from e
    if not root:
        raise SpinXMLParseError("empty document")
    return root[0]


def _float_attr(node: _Node, attr: str) -> float:
    raw = node.attrs.get(attr)
    if raw is None:
        raise SpinXMLParseError(f"{node.where}: missing attribute {attr!r}")
    try:
        return float(raw)
    except ValueError:
        raise SpinXMLParseError(
            f"{node.where}: attribute {attr}={raw!r} is not a number") from None


def _int_attr(node: _Node, attr: str) -> int:
    raw = node.attrs.get(attr)
    if raw is None:
        raise SpinXMLParseError(f"{node.where}: missing attribute {attr!r}")
    try:
        return int(raw)
    except ValueError:
        raise SpinXMLParseError(
            f"{node.where}: attribute {attr}={raw!r} is not an integer") from None


@dataclass(frozen=True)
class ParseReport:
    system: SpinSystem
    warnings: tuple[Issue, ...] = ()


def _parse_rotation(node: _Node) -> Rotation:
    conventions = [c for c in node.children if c.tag in ROTATION_TAGS]
    if len(conventions) != 1:
        raise SpinXMLParseError(
            f"{node.where}: rotation must contain exactly one of "
            f"{', '.join(ROTATION_TAGS)} (found {len(conventions)})")
    c = conventions[0]
    if c.tag == "euler_angles":
        return EulerAngles(alpha=_float_attr(c, "alpha"),
                           beta=_float_attr(c, "beta"),
                           gamma=_float_attr(c, "gamma"))
    if c.tag == "quaternion":
        return Quaternion(w=_float_attr(c, "w"), x=_float_attr(c, "x"),
                          y=_float_attr(c, "y"), z=_float_attr(c, "z"))
    if c.tag == "dcm":
        return DCM(np.array([_float_attr(c, a) for a in _MATRIX_ATTRS]).reshape(3, 3))
    axes = c.find_all("axis")
    if len(axes) != 1:
        raise SpinXMLParseError(f"{c.where}: angle_axis needs exactly one axis child")
    ax = axes[0]
    return AngleAxis(angle=_float_attr(c, "angle"),
                     axis=np.array([_float_attr(ax, "x"), _float_attr(ax, "y"),
                                    _float_attr(ax, "z")]))


def _parse_amplitude(node: _Node) -> AmplitudeSpec:
    amps = [c for c in node.children if c.tag in AMPLITUDE_TAGS]
    if not amps:
        raise SpinXMLParseError(f"{node.where}: interaction has no amplitude child")
    if len(amps) > 1:
        raise SpinXMLParseError(
            f"{node.where}: amplitude is a SWITCH group, found "
            + " and ".join(a.tag for a in amps))
    a = amps[0]
    rotations = node.find_all("rotation")
    if len(rotations) > 1:
        raise SpinXMLParseError(f"{node.where}: more than one rotation child")
    if a.tag in ("scalar", "tensor") and rotations:
        raise SpinXMLParseError(
            f"{node.where}: rotation is only valid with eigenvalue amplitudes")
    rotation = _parse_rotation(rotations[0]) if rotations else None
    if a.tag == "scalar":
        try:
            return ScalarAmplitude(value=float(a.text.strip()))
        except ValueError:
            raise SpinXMLParseError(
                f"{a.where}: scalar text {a.text.strip()!r} is not a number") from None
    if a.tag == "tensor":
        m = np.array([_float_attr(a, name) for name in _MATRIX_ATTRS]).reshape(3, 3)
        return MatrixAmplitude(matrix=m)
    if a.tag == "eigenvalues":
        ev = ExplicitEigenvalues(xx=_float_attr(a, "xx"), yy=_float_attr(a, "yy"),
                                 zz=_float_attr(a, "zz"))
    elif a.tag == "aniso_asym":
        ev = IsoAnisoAsym(iso=_float_attr(a, "iso"), aniso=_float_attr(a, "aniso"),
                          asym=_float_attr(a, "asym"))
    elif a.tag == "ax_rh":
        ev = IsoAxRh(iso=_float_attr(a, "iso"), ax=_float_attr(a, "ax"),
                     rh=_float_attr(a, "rh"))
    else:
        ev = IsoSpanSkew(iso=_float_attr(a, "iso"), span=_float_attr(a, "span"),
                         skew=_float_attr(a, "skew"))
    return EigenAmplitude(eigenvalues=ev, rotation=rotation)


def parse_spinxml(data: bytes | str) -> ParseReport:
    """Parse a spin system document.

    Structural problems raise SpinXMLParseError with line information;
    recoverable oddities (missing units, unknown child elements) are
    reported as warnings and never alter numeric values.
    """
    root = _read_tree(data)
    if root.tag != "spin_system":
        raise SpinXMLParseError(f"{root.where}: root element must be spin_system")
    warnings_: list[Issue] = []
    spins: list[Spin] = []
    terms: list[InteractionTerm] = []
    for child in root.children:
        if child.tag == "spin":
            if "number" in child.attrs:
                number = _int_attr(child, "number")
            elif "id" in child.attrs:
                number = _int_attr(child, "id")
            else:
                raise SpinXMLParseError(f"{child.where}: spin needs a number attribute")
            if child.attrs.get("isotope") is None:
                raise SpinXMLParseError(f"{child.where}: spin needs an isotope attribute")
            coords_nodes = child.find_all("coordinates")
            if len(coords_nodes) > 1:
                raise SpinXMLParseError(f"{child.where}: more than one coordinates child")
            coords = None
            if coords_nodes:
                c = coords_nodes[0]
                coords = np.array([_float_attr(c, "x"), _float_attr(c, "y"),
                                   _float_attr(c, "z")])
            spins.append(Spin(id=number, isotope=child.attrs["isotope"],
                              coordinates=coords, label=child.attrs.get("label")))
        elif child.tag == "interaction":
            kind_raw = child.attrs.get("kind")
            if kind_raw is None:
                raise SpinXMLParseError(f"{child.where}: interaction needs a kind attribute")
            try:
                kind = InteractionKind(kind_raw)
            except ValueError:
                raise SpinXMLParseError(
                    f"{child.where}: unknown interaction kind {kind_raw!r}") from None
            spin_1 = _int_attr(child, "spin_1")
            spin_2 = _int_attr(child, "spin_2") if "spin_2" in child.attrs else None
            units = child.attrs.get("units")
            if units is None:
                units = DEFAULT_UNITS[kind]
                warnings_.append(Issue(child.where,
                                       f"missing units, defaulting to {units!r}"))
            amplitude = _parse_amplitude(child)
            terms.append(InteractionTerm(
                id=len(terms) + 1, kind=kind, units=units, spin_1=spin_1,
                spin_2=spin_2, label=child.attrs.get("label"),
                reference=child.attrs.get("reference"), amplitude=amplitude))
        else:
            warnings_.append(Issue(child.where, f"unknown element {child.tag!r} ignored"))
    system = SpinSystem(spins=tuple(spins), interactions=tuple(terms))
    for term in system.interactions:
        if term.units not in SUPPORTED_UNITS[term.kind]:
            warnings_.append(Issue(f"interaction {term.id}",
                                   f"units {term.units!r} unusual for {term.kind.value}; "
                                   "carried verbatim"))
    return ParseReport(system=system, warnings=tuple(warnings_))


def _fmt(v: float) -> str:
    return repr(float(v))


def _rotation_xml(r: Rotation, indent: str) -> list[str]:
    pad = indent + "  "
    if isinstance(r, EulerAngles):
        inner = (f'{pad}<euler_angles alpha={quoteattr(_fmt(r.alpha))} '
                 f'beta={quoteattr(_fmt(r.beta))} gamma={quoteattr(_fmt(r.gamma))} />')
    elif isinstance(r, Quaternion):
        inner = (f'{pad}<quaternion w={quoteattr(_fmt(r.w))} x={quoteattr(_fmt(r.x))} '
                 f'y={quoteattr(_fmt(r.y))} z={quoteattr(_fmt(r.z))} />')
    elif isinstance(r, DCM):
        vals = " ".join(f"{name}={quoteattr(_fmt(v))}"
                        for name, v in zip(_MATRIX_ATTRS, r.matrix.ravel()))
        inner = f"{pad}<dcm {vals} />"
    elif isinstance(r, AngleAxis):
        inner = (f'{pad}<angle_axis angle={quoteattr(_fmt(r.angle))}>\n'
                 f'{pad}  <axis x={quoteattr(_fmt(r.axis[0]))} '
                 f'y={quoteattr(_fmt(r.axis[1]))} z={quoteattr(_fmt(r.axis[2]))} />\n'
                 f'{pad}</angle_axis>')
    else:
        raise TypeError(f"not a rotation: {r!r}")
    return [f"{indent}<rotation>", inner, f"{indent}</rotation>"]


def _amplitude_xml(amp: AmplitudeSpec, indent: str) -> list[str]:
    if isinstance(amp, ScalarAmplitude):
        return [f"{indent}<scalar>{escape(_fmt(amp.value))}</scalar>"]
    if isinstance(amp, MatrixAmplitude):
        vals = " ".join(f"{name}={quoteattr(_fmt(v))}"
                        for name, v in zip(_MATRIX_ATTRS, amp.matrix.ravel()))
        return [f"{indent}<tensor {vals} />"]
    ev = amp.eigenvalues
    if isinstance(ev, ExplicitEigenvalues):
        line = (f'{indent}<eigenvalues xx={quoteattr(_fmt(ev.xx))} '
                f'yy={quoteattr(_fmt(ev.yy))} zz={quoteattr(_fmt(ev.zz))} />')
    elif isinstance(ev, IsoAnisoAsym):
        line = (f'{indent}<aniso_asym iso={quoteattr(_fmt(ev.iso))} '
                f'aniso={quoteattr(_fmt(ev.aniso))} asym={quoteattr(_fmt(ev.asym))} />')
    elif isinstance(ev, IsoAxRh):
        line = (f'{indent}<ax_rh iso={quoteattr(_fmt(ev.iso))} '
                f'ax={quoteattr(_fmt(ev.ax))} rh={quoteattr(_fmt(ev.rh))} />')
    else:
        line = (f'{indent}<span_skew iso={quoteattr(_fmt(ev.iso))} '
                f'span={quoteattr(_fmt(ev.span))} skew={quoteattr(_fmt(ev.skew))} />')
    out = [line]
    if amp.rotation is not None:
        out.extend(_rotation_xml(amp.rotation, indent))
    return out


def write_spinxml(sys: SpinSystem, style: str = "preserve") -> bytes:
    """Serialize a spin system document.

    ``preserve`` keeps every term in its stored convention; ``normalize``
    rewrites every anisotropic amplitude as a full ``tensor`` element with
    the orientation folded in (the recommended interchange form).  Output
    is deterministic: fixed attribute order, one element per line, UTF-8.
    """
    if style not in ("preserve", "normalize"):
        raise ValueError(f"unknown write style {style!r}")
    lines = [
        '<?xml version="1.0" encoding="UTF-8"?>',
        f"<!-- conventions: {EULER_CONVENTION_NOTE} -->",
    ]
    body: list[str] = []
    for spin in sys.spins:
        attrs = [f"number={quoteattr(str(spin.id))}",
                 f"isotope={quoteattr(spin.isotope)}"]
        if spin.label is not None:
            attrs.append(f"label={quoteattr(spin.label)}")
        if spin.coordinates is None:
            body.append(f"  <spin {' '.join(attrs)} />")
        else:
            x, y, z = spin.coordinates
            body.append(f"  <spin {' '.join(attrs)}>")
            body.append(f'    <coordinates x={quoteattr(_fmt(x))} '
                        f'y={quoteattr(_fmt(y))} z={quoteattr(_fmt(z))} />')
            body.append("  </spin>")
    for term in sys.interactions:
        amp = term.amplitude
        if style == "normalize" and isinstance(amp, EigenAmplitude):
            amp = MatrixAmplitude(matrix=promote_amplitude(term))
        attrs = [f"kind={quoteattr(term.kind.value)}",
                 f"units={quoteattr(term.units)}",
                 f"spin_1={quoteattr(str(term.spin_1))}"]
        if term.spin_2 is not None:
            attrs.append(f"spin_2={quoteattr(str(term.spin_2))}")
        if term.label is not None:
            attrs.append(f"label={quoteattr(term.label)}")
        if term.reference is not None:
            attrs.append(f"reference={quoteattr(term.reference)}")
        body.append(f"  <interaction {' '.join(attrs)}>")
        body.extend(_amplitude_xml(amp, "    "))
        body.append("  </interaction>")
    if body:
        lines.append("<spin_system>")
        lines.extend(body)
        lines.append("</spin_system>")
    else:
        lines.append("<spin_system></spin_system>")
    return ("\n".join(lines) + "\n").encode("utf-8")


def convert_rotations(sys: SpinSystem, target: str = "dcm") -> SpinSystem:
    """Rewrite every stored orientation in the ``target`` convention."""
    terms = []
    for term in sys.interactions:
        amp = term.amplitude
        if isinstance(amp, EigenAmplitude) and amp.rotation is not None:
            rot = from_dcm(to_dcm(amp.rotation), target)
            amp = EigenAmplitude(eigenvalues=amp.eigenvalues, rotation=rot)
            term = InteractionTerm(id=term.id, kind=term.kind, units=term.units,
                                   spin_1=term.spin_1, spin_2=term.spin_2,
                                   label=term.label, reference=term.reference,
                                   amplitude=amp)
        terms.append(term)
    return SpinSystem(spins=sys.spins, interactions=tuple(terms))


_INT_ATTRS = {("spin", "number"), ("spin", "id"), ("interaction", "spin_1"),
              ("interaction", "spin_2")}
_ELEMENT_ATTRS: dict[str, tuple[tuple[str, ...], tuple[str, ...]]] = {
    # tag: (required attrs, optional attrs)
    "spin": ((), ("number", "id", "isotope", "label")),
    "coordinates": (("x", "y", "z"), ()),
    "interaction": (("kind", "units", "spin_1"), ("spin_2", "label", "reference")),
    "scalar": ((), ()),
    "tensor": (_MATRIX_ATTRS, ()),
    "eigenvalues": (("xx", "yy", "zz"), ()),
    "aniso_asym": (("iso", "aniso", "asym"), ()),
    "ax_rh": (("iso", "ax", "rh"), ()),
    "span_skew": (("iso", "span", "skew"), ()),
    "rotation": ((), ()),
    "euler_angles": (("alpha", "beta", "gamma"), ()),
    "angle_axis": (("angle",), ()),
    "axis": (("x", "y", "z"), ()),
    "quaternion": (("w", "x", "y", "z"), ()),
    "dcm": (_MATRIX_ATTRS, ()),
}


def _check_attrs(node: _Node, out: list[Issue]):
    required, optional = _ELEMENT_ATTRS[node.tag]
    for attr in required:
        if attr not in node.attrs:
            out.append(Issue(node.where, f"missing attribute {attr!r}"))
    allowed = set(required) | set(optional)
    for attr, raw in node.attrs.items():
        if attr not in allowed:
            out.append(Issue(node.where, f"unexpected attribute {attr!r}"))
            continue
        if (node.tag, attr) in _INT_ATTRS:
            try:
                int(raw)
            except ValueError:
                out.append(Issue(node.where, f"attribute {attr}={raw!r} is not an integer"))
        elif attr not in ("isotope", "label", "kind", "units", "reference"):
            try:
                float(raw)
            except ValueError:
                out.append(Issue(node.where, f"attribute {attr}={raw!r} is not a number"))


def validate_against_schema(data: bytes | str) -> list[Issue]:
    """Structural schema check without building a SpinSystem.

    Reports element naming, attribute presence/type and SWITCH arity
    violations.  Well-formedness failures are reported as a single issue.
    """
    out: list[Issue] = []
    try:
        root = _read_tree(data)
    except SpinXMLParseError as e:
        return [Issue("document", str(e))]
    if root.tag != "spin_system":
        return [Issue(root.where, "root element must be spin_system")]
    for child in root.children:
        if child.tag == "spin":
            _check_attrs(child, out)
            if "number" not in child.attrs and "id" not in child.attrs:
                out.append(Issue(child.where, "spin needs a number attribute"))
            coords = child.find_all("coordinates")
            if len(coords) > 1:
                out.append(Issue(child.where, "more than one coordinates child"))
            for c in coords:
                _check_attrs(c, out)
            for extra in child.children:
                if extra.tag != "coordinates":
                    out.append(Issue(extra.where, f"unexpected element {extra.tag!r}"))
        elif child.tag == "interaction":
            _check_attrs(child, out)
            kind = child.attrs.get("kind")
            if kind is not None and kind not in {k.value for k in InteractionKind}:
                out.append(Issue(child.where, f"unknown interaction kind {kind!r}"))
            amps = [c for c in child.children if c.tag in AMPLITUDE_TAGS]
            if not amps:
                out.append(Issue(child.where, "no amplitude child"))
            elif len(amps) > 1:
                out.append(Issue(child.where,
                                 "amplitude SWITCH violated: "
                                 + " and ".join(a.tag for a in amps)))
            rotations = child.find_all("rotation")
            if len(rotations) > 1:
                out.append(Issue(child.where, "more than one rotation child"))
            if rotations and amps and amps[0].tag in ("scalar", "tensor"):
                out.append(Issue(child.where,
                                 "rotation is only valid with eigenvalue amplitudes"))
            for a in amps:
                _check_attrs(a, out)
                if a.tag == "scalar":
                    try:
                        float(a.text.strip())
                    except ValueError:
                        out.append(Issue(a.where, "scalar text is not a number"))
            for r in rotations:
                conv = [c for c in r.children if c.tag in ROTATION_TAGS]
                if len(conv) != 1:
                    out.append(Issue(r.where,
                                     "rotation SWITCH violated: expected exactly one of "
                                     + ", ".join(ROTATION_TAGS)))
                for c in r.children:
                    if c.tag not in ROTATION_TAGS:
                        out.append(Issue(c.where, f"unexpected element {c.tag!r}"))
                        continue
                    _check_attrs(c, out)
                    if c.tag == "angle_axis":
                        axes = c.find_all("axis")
                        if len(axes) != 1:
                            out.append(Issue(c.where, "angle_axis needs exactly one axis child"))
                        for ax in axes:
                            _check_attrs(ax, out)
            for extra in child.children:
                if extra.tag not in AMPLITUDE_TAGS and extra.tag != "rotation":
                    out.append(Issue(extra.where, f"unexpected element {extra.tag!r}"))
        else:
            out.append(Issue(child.where, f"unexpected element {child.tag!r}"))
    return out

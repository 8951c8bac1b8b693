"""Schema validation and stylesheet transformation for report documents.

The report schema and stylesheet are plain XSD/XSLT assets. This module
interprets the subset of those languages the assets use: nested element
declarations with sequences, occurrence bounds, attributes and simple-content
extensions on the schema side; templates with value-of, for-each, if, text,
literal elements and attribute value templates on the stylesheet side.
Unsupported constructs fail loudly rather than being silently ignored.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from datetime import date, datetime, time
from xml.etree import ElementTree as ET

from .errors import SchemaViolation, TransformFailure

XSD_NS = "{http://www.w3.org/2001/XMLSchema}"
XSL_NS = "{http://www.w3.org/1999/XSL/Transform}"


# -- schema --------------------------------------------------------------------


@dataclass
class AttrDecl:
    name: str
    type_name: str
    required: bool


@dataclass
class ChildSlot:
    decl: "ElementDecl"
    min_occurs: int
    max_occurs: int | None  # None means unbounded


@dataclass
class ElementDecl:
    name: str
    simple_type: str | None = None  # set for pure simple elements and simpleContent
    attributes: dict[str, AttrDecl] = field(default_factory=dict)
    children: list[ChildSlot] = field(default_factory=list)
    has_complex_content: bool = False


def _check_simple_value(type_name: str, value: str) -> bool:
    value = value.strip()
    try:
        if type_name in ("xs:string", "xs:anyURI"):
            return True
        if type_name == "xs:integer":
            int(value)
            return True
        if type_name == "xs:nonNegativeInteger":
            return int(value) >= 0
        if type_name == "xs:decimal":
            float(value)
            return True
        if type_name == "xs:date":
            date.fromisoformat(value)
            return True
        if type_name == "xs:time":
            time.fromisoformat(value)
            return True
        if type_name == "xs:dateTime":
            datetime.fromisoformat(value.replace("Z", "+00:00"))
            return True
        if type_name == "xs:boolean":
            return value in ("true", "false", "0", "1")
    except ValueError:
        return False
    raise SchemaViolation(f"schema uses unsupported simple type {type_name}")


def _parse_occurs(node: ET.Element) -> tuple[int, int | None]:
    min_occurs = int(node.get("minOccurs", "1"))
    raw_max = node.get("maxOccurs", "1")
    max_occurs = None if raw_max == "unbounded" else int(raw_max)
    return min_occurs, max_occurs


def _parse_element_decl(node: ET.Element) -> ElementDecl:
    name = node.get("name")
    if not name:
        raise SchemaViolation("schema element declaration without a name")
    type_attr = node.get("type")
    if type_attr:
        return ElementDecl(name=name, simple_type=type_attr)
    complex_type = node.find(f"{XSD_NS}complexType")
    if complex_type is None:
        return ElementDecl(name=name, simple_type="xs:string")
    decl = ElementDecl(name=name)
    simple_content = complex_type.find(f"{XSD_NS}simpleContent")
    if simple_content is not None:
        extension = simple_content.find(f"{XSD_NS}extension")
        if extension is None:
            raise SchemaViolation(f"{name}: simpleContent without extension")
        decl.simple_type = extension.get("base", "xs:string")
        for attr in extension.findall(f"{XSD_NS}attribute"):
            decl.attributes[attr.get("name", "")] = AttrDecl(
                name=attr.get("name", ""),
                type_name=attr.get("type", "xs:string"),
                required=attr.get("use") == "required",
            )
        return decl
    decl.has_complex_content = True
    sequence = complex_type.find(f"{XSD_NS}sequence")
    if sequence is not None:
        for child in sequence.findall(f"{XSD_NS}element"):
            min_occurs, max_occurs = _parse_occurs(child)
            decl.children.append(
                ChildSlot(decl=_parse_element_decl(child), min_occurs=min_occurs,
                          max_occurs=max_occurs)
            )
    for attr in complex_type.findall(f"{XSD_NS}attribute"):
        decl.attributes[attr.get("name", "")] = AttrDecl(
            name=attr.get("name", ""),
            type_name=attr.get("type", "xs:string"),
            required=attr.get("use") == "required",
        )
    return decl


class XsdValidator:
    """Validates instance documents against a (subset) XSD schema."""

    def __init__(self, schema_text: str):
        root = ET.fromstring(schema_text)
        if root.tag != f"{XSD_NS}schema":
            raise SchemaViolation("not an XML Schema document")
        self._top: dict[str, ElementDecl] = {}
        for node in root.findall(f"{XSD_NS}element"):
            decl = _parse_element_decl(node)
            self._top[decl.name] = decl

    def validate(self, root: ET.Element) -> None:
        """Raise SchemaViolation describing every problem found, if any."""
        decl = self._top.get(root.tag)
        if decl is None:
            raise SchemaViolation(f"unexpected root element <{root.tag}>")
        errors: list[str] = []
        self._validate_element(root, decl, root.tag, errors)
        if errors:
            raise SchemaViolation("; ".join(errors[:10]))

    def _validate_element(
        self, elem: ET.Element, decl: ElementDecl, path: str, errors: list[str]
    ) -> None:
        declared = decl.attributes
        for name, value in elem.attrib.items():
            attr = declared.get(name)
            if attr is None:
                errors.append(f"{path}: undeclared attribute {name!r}")
            elif not _check_simple_value(attr.type_name, value):
                errors.append(f"{path}: attribute {name!r} is not a valid {attr.type_name}")
        for attr in declared.values():
            if attr.required and attr.name not in elem.attrib:
                errors.append(f"{path}: missing required attribute {attr.name!r}")

        if decl.simple_type is not None:
            if len(elem) > 0:
                errors.append(f"{path}: element must not have children")
            elif not _check_simple_value(decl.simple_type, elem.text or ""):
                errors.append(f"{path}: content is not a valid {decl.simple_type}")
            return

        if (elem.text or "").strip():
            errors.append(f"{path}: unexpected text content")
        kids = list(elem)
        index = 0
        for slot in decl.children:
            count = 0
            while (
                index < len(kids)
                and kids[index].tag == slot.decl.name
                and (slot.max_occurs is None or count < slot.max_occurs)
            ):
                child = kids[index]
                self._validate_element(
                    child, slot.decl, f"{path}/{child.tag}[{count + 1}]", errors
                )
                if (child.tail or "").strip():
                    errors.append(f"{path}: unexpected text after <{child.tag}>")
                index += 1
                count += 1
            if count < slot.min_occurs:
                errors.append(
                    f"{path}: expected at least {slot.min_occurs} <{slot.decl.name}>, got {count}"
                )
        if index < len(kids):
            errors.append(f"{path}: unexpected element <{kids[index].tag}>")


# -- stylesheet ----------------------------------------------------------------


_VOID_HTML = {"br", "hr", "img", "meta", "link", "input", "col", "area", "base"}
_AVT = re.compile(r"\{([^{}]+)\}")


def _escape_text(value: str) -> str:
    return value.replace("&", "&amp;").replace("<", "&lt;").replace(">", "&gt;")


def _escape_attr(value: str) -> str:
    return _escape_text(value).replace('"', "&quot;")


class _OutNode:
    __slots__ = ("tag", "attrs", "children")

    def __init__(self, tag: str):
        self.tag = tag
        self.attrs: dict[str, str] = {}
        self.children: list = []  # _OutNode or str

    def serialize(self, out: list[str]) -> None:
        attrs = "".join(f' {k}="{_escape_attr(v)}"' for k, v in self.attrs.items())
        if self.tag in _VOID_HTML and not self.children:
            out.append(f"<{self.tag}{attrs}/>")
            return
        out.append(f"<{self.tag}{attrs}>")
        for child in self.children:
            if isinstance(child, str):
                out.append(_escape_text(child))
            else:
                child.serialize(out)
        out.append(f"</{self.tag}>")


def _text_content(elem: ET.Element) -> str:
    return "".join(elem.itertext())


def _eval_nodes(ctx: ET.Element, path: str) -> list[ET.Element]:
    path = path.strip()
    if path == ".":
        return [ctx]
    return ctx.findall(path)


def _eval_string(ctx: ET.Element, path: str) -> str:
    path = path.strip()
    if path == ".":
        return _text_content(ctx)
    if path.startswith("@"):
        return ctx.get(path[1:], "")
    if "/@" in path:
        elem_path, _, attr = path.rpartition("/@")
        nodes = ctx.findall(elem_path)
        return nodes[0].get(attr, "") if nodes else ""
    nodes = ctx.findall(path)
    return _text_content(nodes[0]) if nodes else ""


def _truthy(ctx: ET.Element, expr: str) -> bool:
    expr = expr.strip()
    if expr.startswith("@"):
        return bool(ctx.get(expr[1:], "").strip())
    return bool(_eval_nodes(ctx, expr)) or bool(_eval_string(ctx, expr).strip())


class XsltRenderer:
    """Applies the report stylesheet to a document tree.

    Supports the template constructs the bundled stylesheet uses; anything
    else raises TransformFailure.
    """

    def __init__(self, stylesheet_text: str):
        sheet = ET.fromstring(stylesheet_text)
        if sheet.tag != f"{XSL_NS}stylesheet":
            raise TransformFailure("not an XSLT stylesheet")
        self._root_template: ET.Element | None = None
        for template in sheet.findall(f"{XSL_NS}template"):
            if template.get("match") == "/":
                self._root_template = template
        if self._root_template is None:
            raise TransformFailure("stylesheet has no template matching '/'")

    def render(self, root: ET.Element) -> str:
        document = ET.Element("(document)")
        document.append(root)
        out = _OutNode("(fragment)")
        try:
            self._instantiate(self._root_template, document, out)
        except TransformFailure:
            raise
        except Exception as exc:  # pragma: no cover - defensive
            raise TransformFailure(f"stylesheet application failed: {exc}") from exc
        pieces: list[str] = []
        for child in out.children:
            if isinstance(child, str):
                pieces.append(_escape_text(child))
            else:
                child.serialize(pieces)
        return "<!DOCTYPE html>\n" + "".join(pieces) + "\n"

    def _instantiate(self, template: ET.Element, ctx: ET.Element, out: _OutNode) -> None:
        if template.text and template.text.strip():
            out.children.append(template.text.strip())
        for node in template:
            self._apply_node(node, ctx, out)
            if node.tail and node.tail.strip():
                out.children.append(node.tail.strip())

    def _apply_node(self, node: ET.Element, ctx: ET.Element, out: _OutNode) -> None:
        tag = node.tag
        if tag == f"{XSL_NS}value-of":
            out.children.append(_eval_string(ctx, node.get("select", ".")))
        elif tag == f"{XSL_NS}text":
            out.children.append(node.text or "")
        elif tag == f"{XSL_NS}for-each":
            for item in _eval_nodes(ctx, node.get("select", ".")):
                self._instantiate(node, item, out)
        elif tag == f"{XSL_NS}if":
            if _truthy(ctx, node.get("test", "")):
                self._instantiate(node, ctx, out)
        elif tag.startswith(XSL_NS):
            raise TransformFailure(f"unsupported stylesheet instruction {tag}")
        else:
            element = _OutNode(tag)
            for name, value in node.attrib.items():
                element.attrs[name] = _AVT.sub(
                    lambda match: _eval_string(ctx, match.group(1)), value
                )
            out.children.append(element)
            self._instantiate(node, ctx, element)
